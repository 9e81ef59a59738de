// Micro-benchmarks for the hot paths: parsing, printing, weaving,
// manifest emission and deployment planning, all over the mammogrid
// sample model.
#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gforge/codegen.hpp"
#include "gforge/deploy.hpp"
#include "gforge/library.hpp"
#include "gforge/parser.hpp"
#include "gforge/printer.hpp"
#include "gforge/rewrite.hpp"

namespace {

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

const std::string& model_source() {
  static const std::string source =
      read_file(std::filesystem::path(GFORGE_BENCH_FIXTURE_DIR) /
                "mammogrid.gdsl");
  return source;
}

const gforge::ArchitectureModel& base_model() {
  static const gforge::ArchitectureModel model =
      gforge::parse_model(model_source(), "mammogrid.gdsl");
  return model;
}

const gforge::Library& library() {
  static const gforge::Library lib =
      gforge::load_library(GFORGE_BENCH_CONSTRUCTS_DIR);
  return lib;
}

const gforge::ArchitectureModel& woven_model() {
  static const gforge::ArchitectureModel model = [] {
    gforge::WeaveReport report;
    return gforge::weave(base_model(), library(), gforge::WeaveStage::All,
                         report);
  }();
  return model;
}

void BM_ParseModel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gforge::parse_model(model_source(), "mammogrid.gdsl"));
  }
}
BENCHMARK(BM_ParseModel);

void BM_PrettyPrint(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gforge::pretty_print(base_model()));
  }
}
BENCHMARK(BM_PrettyPrint);

void BM_Weave(benchmark::State& state) {
  for (auto _ : state) {
    gforge::WeaveReport report;
    benchmark::DoNotOptimize(gforge::weave(base_model(), library(),
                                           gforge::WeaveStage::All, report));
  }
}
BENCHMARK(BM_Weave);

void BM_EmitManifests(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gforge::emit_manifests(
        woven_model(), gforge::Granularity::ComplexObjects));
  }
}
BENCHMARK(BM_EmitManifests);

void BM_PlanDeployment(benchmark::State& state) {
  const gforge::InfrastructureModel infra = gforge::parse_infrastructure(
      read_file(std::filesystem::path(GFORGE_BENCH_FIXTURE_DIR) /
                "two-node.germ"),
      "two-node.germ");
  gforge::DeploymentSpec spec;
  spec.anti_affinity = gforge::derive_anti_affinity_groups(woven_model());
  for (auto _ : state) {
    benchmark::DoNotOptimize(gforge::plan_deployment(woven_model(), infra,
                                                     spec));
  }
}
BENCHMARK(BM_PlanDeployment);

}  // namespace

BENCHMARK_MAIN();
