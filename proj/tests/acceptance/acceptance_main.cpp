// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on
// any failure. Tolerances are pinned in the constants below.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gforge/codegen.hpp"
#include "gforge/deploy.hpp"
#include "gforge/library.hpp"
#include "gforge/parser.hpp"
#include "gforge/printer.hpp"
#include "gforge/rewrite.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"
#include "support/paths.hpp"
#include "support/subprocess.hpp"

using namespace gforge;
using namespace gforge::testing;

namespace {

// Pinned tolerances.
constexpr double kGoldenWeaveBudgetSeconds = 1.0;
constexpr int kRoundTripModels = 1000;
constexpr double kRoundTripBudgetSeconds = 30.0;
constexpr int kWeavePairs = 500;
constexpr int kPlannerInstances = 240;
constexpr double kPlannerBudgetSeconds = 60.0;

int failures = 0;

void run(int number, const std::string& label,
         const std::function<void()>& body) {
  try {
    body();
    std::cout << "PASS criterion " << number << ": " << label << "\n";
  } catch (const std::exception& e) {
    ++failures;
    std::cout << "FAIL criterion " << number << ": " << label << " — "
              << e.what() << "\n";
  }
}

void ensure(bool condition, const std::string& detail) {
  if (!condition) throw std::runtime_error(detail);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

ArchitectureModel fixture_model(const std::string& name) {
  return parse_model(read_text_file(fixture_path(name)), name);
}

bool has_attachment(const ArchitectureModel& model, const PortPath& from,
                    const PortPath& to) {
  return std::find(model.attachments.begin(), model.attachments.end(),
                   Attachment{from, to}) != model.attachments.end();
}

// --- criteria ---------------------------------------------------------------

void golden_reliability_weave() {
  const auto start = std::chrono::steady_clock::now();
  const ArchitectureModel before = fixture_model("mammogrid.gdsl");
  const Library library = load_library(constructs_dir());
  WeaveReport report;
  const ArchitectureModel woven =
      weave(before, library, WeaveStage::All, report);
  const double elapsed = seconds_since(start);

  ensure(!report.error, "weave reported an error: " +
                            report.error.value_or(""));
  ensure(report.applied.size() == 1 &&
             report.applied[0].construct == "FT_reliability",
         "expected exactly the reliability construct to apply");
  ensure(woven.elements.size() == 7, "expected 7 elements, got " +
                                         std::to_string(woven.elements.size()));

  for (const char* name :
       {"mammogridPortal", "mammogridAuth", "mammogridAuthz",
        "mammogridGridProxy", "mammogridDataProxy"})
    ensure(woven.find_element(name) != nullptr,
           std::string("original element missing: ") + name);

  const ArchElement* clone = woven.find_element("mammogridDataProxyClone0");
  ensure(clone != nullptr && clone->kind == ElementKind::Component,
         "replica component mammogridDataProxyClone0 missing");
  const ArchElement* connector = woven.find_element("FTConnector");
  ensure(connector != nullptr && connector->kind == ElementKind::Connector,
         "connector FTConnector missing");

  ensure(woven.attachments.size() == before.attachments.size() + 2,
         "expected exactly two new attachments");
  const PortPath coupler{"FTConnector", "mammogridGridProxyComsP0",
                         "mammogridGridProxyIncC0"};
  ensure(has_attachment(woven, {"mammogridDataProxy", "ComsP0", "ComsOutC0"},
                        coupler),
         "primary replica is not wired into the connector");
  ensure(has_attachment(woven,
                        {"mammogridDataProxyClone0", "ComsP0", "ComsOutC0"},
                        coupler),
         "secondary replica is not wired into the connector");
  for (const Attachment& original : before.attachments)
    ensure(std::find(woven.attachments.begin(), woven.attachments.end(),
                     original) != woven.attachments.end(),
           "an original attachment disappeared");

  ensure(check_refinement(before, woven).empty(),
         "refinement contract reported findings");
  ensure(elapsed < kGoldenWeaveBudgetSeconds,
         "weave took " + std::to_string(elapsed) + "s (budget " +
             std::to_string(kGoldenWeaveBudgetSeconds) + "s)");
}

void golden_platform_weave() {
  const ArchitectureModel before = fixture_model("healthechild.gdsl");
  const Library library = load_library(constructs_dir());
  WeaveReport report;
  const ArchitectureModel woven =
      weave(before, library, WeaveStage::All, report);

  ensure(!report.error && report.applied.size() == 1 &&
             report.applied[0].construct == "gLite3Proxy",
         "expected exactly the gLite construct to apply");
  ensure(woven.find_element("gLiteGlueing") != nullptr,
         "glueing component missing");
  ensure(has_attachment(
             woven, {"health-e-childGridProxy", "ComsP0", "ComsOutC0"},
             {"gLiteGlueing", "ProxyComsP0", "ProxyComsIncC0"}),
         "proxy-to-glueing attachment missing");
  ensure(has_attachment(
             woven, {"gLiteGlueing", "ProxyComsP0", "ProxyComsOutC0"},
             {"health-e-childGridProxy", "ComsP0", "ComsInC0"}),
         "glueing-to-proxy attachment missing");
  ensure(woven.attachments.size() == before.attachments.size() + 2,
         "expected exactly two new attachments");
  ensure(check_refinement(before, woven).empty(),
         "refinement contract reported findings");
}

void random_round_trips() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(424242);
  for (int i = 0; i < kRoundTripModels; ++i) {
    const ArchitectureModel model = random_model(rng);
    const std::string text = pretty_print(model);
    ArchitectureModel reparsed;
    try {
      reparsed = parse_model(text, "roundtrip.gdsl");
    } catch (const Error& e) {
      throw std::runtime_error("model " + std::to_string(i) +
                               " failed to reparse: " + e.what());
    }
    ensure(reparsed == model,
           "model " + std::to_string(i) + " changed across a round trip");
    ensure(pretty_print(reparsed) == text,
           "model " + std::to_string(i) + " is not a print fixpoint");
  }
  const double elapsed = seconds_since(start);
  ensure(elapsed < kRoundTripBudgetSeconds,
         std::to_string(kRoundTripModels) + " round trips took " +
             std::to_string(elapsed) + "s (budget " +
             std::to_string(kRoundTripBudgetSeconds) + "s)");
}

void random_weave_pairs() {
  std::mt19937 rng(77007700);
  for (int i = 0; i < kWeavePairs; ++i) {
    const WeaveCase wc = random_weave_case(rng);
    ArchitectureModel woven;
    try {
      woven = apply_construct(wc.model, wc.construct, wc.target,
                              wc.annotation);
    } catch (const Error& e) {
      throw std::runtime_error("pair " + std::to_string(i) +
                               " failed to apply: " + e.what());
    }
    const auto findings = check_refinement(wc.model, woven);
    if (!findings.empty())
      throw std::runtime_error("pair " + std::to_string(i) +
                               " violates refinement: " + findings[0].kind +
                               " " + findings[0].subject);
    for (const auto& [source, clone] : wc.replicas) {
      const ArchElement* original = woven.find_element(source);
      const ArchElement* replica = woven.find_element(clone);
      ensure(original != nullptr && replica != nullptr,
             "pair " + std::to_string(i) + " lost replica " + clone);
      ensure(structurally_isomorphic(*original, *replica,
                                     {{source, clone}}),
             "pair " + std::to_string(i) + " replica " + clone +
                 " is not isomorphic to " + source);
    }
  }
}

void weave_idempotence() {
  const Library library = load_library(constructs_dir());
  for (const char* fixture : {"mammogrid.gdsl", "healthechild.gdsl"}) {
    WeaveReport first_report;
    const ArchitectureModel first = weave(fixture_model(fixture), library,
                                          WeaveStage::All, first_report);
    ensure(first_report.ok(), std::string(fixture) + ": first weave failed");
    WeaveReport second_report;
    const ArchitectureModel second =
        weave(first, library, WeaveStage::All, second_report);
    ensure(second_report.applied.empty(),
           std::string(fixture) + ": second weave applied constructs");
    ensure(pretty_print(second) == pretty_print(first),
           std::string(fixture) + ": second weave changed the model");
  }
}

void planner_matches_brute_force() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(13131313);
  auto pick = [&rng](int bound) {
    return static_cast<int>(rng() % static_cast<unsigned>(bound));
  };
  for (int i = 0; i < kPlannerInstances; ++i) {
    OracleInstance instance;
    const int components = 1 + pick(6);   // <= 6
    for (int c = 0; c < components; ++c)
      instance.components.push_back("c" + std::to_string(c));
    const int nodes = 1 + pick(4);        // <= 4
    for (int n = 0; n < nodes; ++n)
      instance.nodes.push_back({"n" + std::to_string(n), 1 + pick(3)});
    if (components >= 2 && pick(2) == 1) {  // 0 or 1 anti-affinity group
      const int size = 2 + pick(components - 1);
      std::vector<std::string> group;
      for (int m = 0; m < size; ++m) group.push_back(instance.components[m]);
      instance.groups.push_back(std::move(group));
    }

    const OracleResult expected = brute_force(instance);
    const PlanOutcome outcome =
        plan_deployment(instance_model(instance), instance_infra(instance),
                        instance_spec(instance));
    ensure(outcome.plan.has_value() == expected.feasible,
           "instance " + std::to_string(i) + ": feasibility mismatch");
    if (expected.feasible) {
      ensure(outcome.plan->nodes_used == expected.min_nodes,
             "instance " + std::to_string(i) + ": planner used " +
                 std::to_string(outcome.plan->nodes_used) +
                 " nodes, minimum is " + std::to_string(expected.min_nodes));
      ensure(validate_plan(instance_model(instance),
                           instance_infra(instance), instance_spec(instance),
                           *outcome.plan)
                 .empty(),
             "instance " + std::to_string(i) + ": plan fails validation");
    }
  }
  const double elapsed = seconds_since(start);
  ensure(elapsed < kPlannerBudgetSeconds,
         std::to_string(kPlannerInstances) + " instances took " +
             std::to_string(elapsed) + "s (budget " +
             std::to_string(kPlannerBudgetSeconds) + "s)");
}

void manifest_emission() {
  const Library library = load_library(constructs_dir());
  WeaveReport report;
  const ArchitectureModel woven = weave(fixture_model("mammogrid.gdsl"),
                                        library, WeaveStage::All, report);
  ensure(report.ok(), "weave failed");

  const auto first = emit_manifests(woven, Granularity::ComplexObjects);
  std::size_t manifests = 0, connectors = 0, indexes = 0;
  for (const auto& artifact : first) {
    const std::string name = artifact.path.string();
    if (name.find(".manifest.json") != std::string::npos) ++manifests;
    else if (name.find(".connector.json") != std::string::npos) ++connectors;
    else if (name == "gesa-index.json") ++indexes;
  }
  ensure(manifests == 6, "expected 6 manifests, got " +
                             std::to_string(manifests));
  ensure(connectors == 1, "expected 1 connector descriptor, got " +
                              std::to_string(connectors));
  ensure(indexes == 1 && first.back().path.string() == "gesa-index.json",
         "expected the index artifact, last");

  const auto second = emit_manifests(woven, Granularity::ComplexObjects);
  ensure(first.size() == second.size(), "artifact count changed across runs");
  for (std::size_t i = 0; i < first.size(); ++i)
    ensure(first[i].path == second[i].path &&
               first[i].content == second[i].content,
           "artifact " + first[i].path.string() +
               " differs between two runs");
}

void style_gate_exit_codes() {
  const CommandResult bad =
      run_command({cli_path(), "check",
                   fixture_path("style_bad.gdsl")});
  ensure(bad.exit_code == 2, "style_bad check exited " +
                                 std::to_string(bad.exit_code) +
                                 ", expected 2");
  ensure(bad.err.find("StatefulnessViolation") != std::string::npos,
         "style_bad check did not name the violation");

  const CommandResult good =
      run_command({cli_path(), "check",
                   fixture_path("mammogrid.gdsl")});
  ensure(good.exit_code == 0, "conforming check exited " +
                                  std::to_string(good.exit_code) +
                                  ", expected 0");
}

void cli_failure_codes() {
  const CommandResult unmatched = run_command(
      {cli_path(), "weave", fixture_path("unmatched.gdsl"),
       "--library", constructs_dir()});
  ensure(unmatched.exit_code == 3, "unmatched weave exited " +
                                       std::to_string(unmatched.exit_code) +
                                       ", expected 3");

  const auto dir = make_scratch_dir("acceptance-plan");
  const auto woven = dir / "woven.gdsl";
  const CommandResult weave_run = run_command(
      {cli_path(), "weave", fixture_path("mammogrid.gdsl"),
       "--library", constructs_dir(), "-o", woven.string()});
  ensure(weave_run.exit_code == 0, "preparatory weave failed");
  const CommandResult infeasible = run_command(
      {cli_path(), "plan", woven.string(), "--infra",
       fixture_path("one-node.germ")});
  ensure(infeasible.exit_code == 4, "infeasible plan exited " +
                                        std::to_string(infeasible.exit_code) +
                                        ", expected 4");

  const CommandResult parse_error = run_command(
      {cli_path(), "parse",
       fixture_path("parse_error.gdsl")});
  ensure(parse_error.exit_code == 1, "parse error exited " +
                                         std::to_string(parse_error.exit_code) +
                                         ", expected 1");
  ensure(parse_error.err.find("parse_error.gdsl:3:24:") != std::string::npos,
         "diagnostic lacks file:line:column, got: " + parse_error.err);
}

}  // namespace

int main() {
  run(1, "reliability constraint weaves the golden replica topology",
      golden_reliability_weave);
  run(2, "platform constraint weaves the glueing component",
      golden_platform_weave);
  run(3, std::to_string(kRoundTripModels) + " random models round-trip",
      random_round_trips);
  run(4, std::to_string(kWeavePairs) + " random weave pairs refine cleanly",
      random_weave_pairs);
  run(5, "weaving is idempotent on both golden models", weave_idempotence);
  run(6, std::to_string(kPlannerInstances) +
             " random deployments match the brute-force oracle",
      planner_matches_brute_force);
  run(7, "woven gateway emits 6 manifests, 1 connector, 1 index, bytewise "
         "stable",
      manifest_emission);
  run(8, "style gate separates conforming and violating models",
      style_gate_exit_codes);
  run(9, "CLI exit codes distinguish unmatched, infeasible and parse errors",
      cli_failure_codes);

  if (failures != 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
