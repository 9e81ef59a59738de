// End-to-end coverage of the gforge command line: every subcommand,
// every exit code.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gforge/parser.hpp"
#include "gforge/printer.hpp"
#include "support/paths.hpp"
#include "support/subprocess.hpp"

using namespace gforge;
using namespace gforge::testing;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) {
  return fixture_path(name);
}

std::string library_dir() { return constructs_dir(); }

CommandResult run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> argv{cli_path()};
  argv.insert(argv.end(), args.begin(), args.end());
  return run_command(argv);
}

// Weaves a fixture into a scratch file and returns the woven path.
std::filesystem::path woven_fixture(const std::string& name,
                                    const std::string& tag) {
  const auto dir = make_scratch_dir(tag);
  const auto out = dir / ("woven-" + name);
  const CommandResult result =
      run_cli({"weave", fixture(name), "--library", library_dir(), "-o",
              out.string()});
  REQUIRE(result.exit_code == 0);
  return out;
}

}  // namespace

TEST_CASE("parse reprints a model in canonical form") {
  const CommandResult result = run_cli({"parse", fixture("mammogrid.gdsl")});
  CHECK(result.exit_code == 0);
  const std::string expected = pretty_print(parse_model(
      read_text_file(fixture_path("mammogrid.gdsl")), "mammogrid.gdsl"));
  CHECK(result.out == expected);
  CHECK(result.err.empty());
}

TEST_CASE("parse dispatches on the file extension") {
  SUBCASE("construct files reprint as constructs") {
    const CommandResult result =
        run_cli({"parse", (std::filesystem::path(constructs_dir()) / "ft_reliability.gcon").string()});
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("FT_reliability is qualityOfServiceProperty {") !=
          std::string::npos);
  }
  SUBCASE("infrastructure files report their shape") {
    const CommandResult result = run_cli({"parse", fixture("two-node.germ")});
    CHECK(result.exit_code == 0);
    CHECK(result.out == "infrastructure miniTestbed: 2 nodes, 1 links\n");
  }
}

TEST_CASE("parse --emit-ast dumps a syntax tree") {
  const CommandResult result =
      run_cli({"parse", fixture("mammogrid.gdsl"), "--emit-ast"});
  CHECK(result.exit_code == 0);
  CHECK_FALSE(result.out.empty());
  CHECK(result.out.find("mammogridGateway") != std::string::npos);
}

TEST_CASE("parse failures exit 1 with a positioned diagnostic") {
  const CommandResult result = run_cli({"parse", fixture("parse_error.gdsl")});
  CHECK(result.exit_code == 1);
  CHECK(result.err.find("parse_error.gdsl:3:24: error:") != std::string::npos);
}

TEST_CASE("missing input files exit 5") {
  const CommandResult result = run_cli({"parse", "/nonexistent/model.gdsl"});
  CHECK(result.exit_code == 5);
  CHECK(result.err.find("cannot read") != std::string::npos);
}

TEST_CASE("check accepts the conforming gateway") {
  const CommandResult result = run_cli({"check", fixture("mammogrid.gdsl")});
  CHECK(result.exit_code == 0);
  CHECK(result.out ==
        "ok: model mammogridGateway satisfies the gateway style\n");
}

TEST_CASE("check exits 2 on violations") {
  SUBCASE("dangling attachments") {
    const CommandResult result = run_cli({"check", fixture("malformed.gdsl")});
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("DanglingAttachment") != std::string::npos);
  }
  SUBCASE("a stateless composite") {
    const CommandResult result = run_cli({"check", fixture("style_bad.gdsl")});
    CHECK(result.exit_code == 2);
    CHECK(result.err.find("StatefulnessViolation") != std::string::npos);
  }
}

TEST_CASE("weave applies the library and writes its artifacts") {
  const auto dir = make_scratch_dir("cli-weave");
  const auto out = dir / "woven.gdsl";
  const auto report = dir / "report.txt";
  const CommandResult result =
      run_cli({"weave", fixture("mammogrid.gdsl"), "--library", library_dir(),
              "-o", out.string(), "--report", report.string()});
  CHECK(result.exit_code == 0);
  CHECK(result.err.find(
            "applied 1 construct(s), 0 unmatched, 0 refinement finding(s)") !=
        std::string::npos);

  const std::string woven_text = read_text_file(out);
  CHECK(woven_text.find("mammogridDataProxyClone0") != std::string::npos);
  CHECK(woven_text.find("stage is WOVEN_QOS") != std::string::npos);

  const std::string report_text = read_text_file(report);
  CHECK(report_text.find("status = ok\n") != std::string::npos);
  CHECK(report_text.find("applied.count = 1\n") != std::string::npos);

  // The woven output is valid input again.
  const CommandResult reparse = run_cli({"parse", out.string()});
  CHECK(reparse.exit_code == 0);
  CHECK(reparse.out == woven_text);
}

TEST_CASE("weave without an output option prints the woven model") {
  const CommandResult result = run_cli(
      {"weave", fixture("healthechild.gdsl"), "--library", library_dir()});
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("gLiteGlueing") != std::string::npos);
  CHECK(result.out.find("stage is WOVEN_PLATFORM") != std::string::npos);
}

TEST_CASE("weave picks up the library from the environment") {
  const CommandResult result = run_command_env(
      {"GFORGE_LIBRARY=" + library_dir()},
      {cli_path(), "weave", fixture("healthechild.gdsl")});
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("gLiteGlueing") != std::string::npos);
}

TEST_CASE("weave requires a library from somewhere") {
  const CommandResult result = run_cli({"weave", fixture("mammogrid.gdsl")});
  CHECK(result.exit_code == 2);
}

TEST_CASE("weave exits 3 when a constraint has no construct") {
  const auto dir = make_scratch_dir("cli-unmatched");
  const auto report = dir / "report.txt";
  const CommandResult result =
      run_cli({"weave", fixture("unmatched.gdsl"), "--library", library_dir(),
              "--report", report.string()});
  CHECK(result.exit_code == 3);
  CHECK(result.err.find("unmatched constraint: RecordStore "
                        "--<privacy::anonymize::full>--") !=
        std::string::npos);
  // The report still landed before the exit.
  CHECK(read_text_file(report).find("unmatched.count = 1\n") !=
        std::string::npos);
}

TEST_CASE("weave --stage leaves the other phase pending, not unmatched") {
  const CommandResult result =
      run_cli({"weave", fixture("mammogrid.gdsl"), "--library", library_dir(),
              "--stage", "platform"});
  CHECK(result.exit_code == 0);
  CHECK(result.err.find(
            "applied 0 construct(s), 0 unmatched, 0 refinement finding(s)") !=
        std::string::npos);
}

TEST_CASE("gen writes manifests and the index") {
  const auto woven = woven_fixture("healthechild.gdsl", "cli-gen");
  const auto out_dir = woven.parent_path() / "artifacts";
  const CommandResult result =
      run_cli({"gen", woven.string(), "--out-dir", out_dir.string()});
  CHECK(result.exit_code == 0);
  // The platform-stage input draws no warning.
  CHECK(result.err.empty());
  CHECK(result.out.find("gesa-index.json") != std::string::npos);
  CHECK(std::filesystem::exists(out_dir / "gLiteGlueing.manifest.json"));
  CHECK(std::filesystem::exists(out_dir / "gesa-index.json"));
}

TEST_CASE("gen warns when platform constraints are still unwoven") {
  const auto dir = make_scratch_dir("cli-gen-warn");
  const CommandResult result = run_cli({"gen", fixture("mammogrid.gdsl"),
                                       "--out-dir", (dir / "out").string()});
  CHECK(result.exit_code == 0);
  CHECK(result.err.find("warning: generating from stage GEIM") !=
        std::string::npos);
}

TEST_CASE("gen --granularity monolith folds the model into one manifest") {
  const auto dir = make_scratch_dir("cli-monolith");
  const CommandResult result =
      run_cli({"gen", fixture("mammogrid.gdsl"), "--granularity", "monolith",
              "--out-dir", (dir / "out").string()});
  CHECK(result.exit_code == 0);
  CHECK(std::filesystem::exists(dir / "out" /
                                "mammogridGateway.manifest.json"));
  CHECK(std::filesystem::exists(dir / "out" / "gesa-index.json"));
}

TEST_CASE("graph prints dot on stdout") {
  const CommandResult result = run_cli({"graph", fixture("mammogrid.gdsl")});
  CHECK(result.exit_code == 0);
  CHECK(result.out.rfind("digraph \"mammogridGateway\" {", 0) == 0);
  CHECK(result.out.find("\"mammogridPortal\" [shape=box];") !=
        std::string::npos);
}

TEST_CASE("plan writes a verified assignment") {
  const auto woven = woven_fixture("mammogrid.gdsl", "cli-plan");
  const auto plan_file = woven.parent_path() / "plan.json";
  const CommandResult result =
      run_cli({"plan", woven.string(), "--infra", fixture("two-node.germ"),
              "-o", plan_file.string()});
  CHECK(result.exit_code == 0);
  const json doc = json::parse(read_text_file(plan_file));
  CHECK(doc["nodes_used"] == 2);
  CHECK(doc["optimal"] == true);
  CHECK(doc["assignment"]["mammogridDataProxy"] !=
        doc["assignment"]["mammogridDataProxyClone0"]);
}

TEST_CASE("plan honours a deployment spec") {
  const auto woven = woven_fixture("mammogrid.gdsl", "cli-plan-spec");
  const auto spec = woven.parent_path() / "deploy.json";
  {
    std::ofstream out(spec, std::ios::binary);
    out << "{\"pins\": {\"mammogridPortal\": \"gridB\"}}\n";
  }
  const CommandResult result =
      run_cli({"plan", woven.string(), "--infra", fixture("two-node.germ"),
              "--deploy", spec.string()});
  CHECK(result.exit_code == 0);
  const json doc = json::parse(result.out);
  CHECK(doc["assignment"]["mammogridPortal"] == "gridB");
}

TEST_CASE("plan rejects a malformed deployment spec") {
  const auto woven = woven_fixture("mammogrid.gdsl", "cli-plan-bad");
  const auto spec = woven.parent_path() / "deploy.json";
  {
    std::ofstream out(spec, std::ios::binary);
    out << "{\"budget\": 3}\n";
  }
  const CommandResult result =
      run_cli({"plan", woven.string(), "--infra", fixture("two-node.germ"),
              "--deploy", spec.string()});
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("unknown deployment spec key \"budget\"") !=
        std::string::npos);
}

TEST_CASE("plan exits 4 when no assignment exists") {
  const auto woven = woven_fixture("mammogrid.gdsl", "cli-plan-infeasible");
  const CommandResult result =
      run_cli({"plan", woven.string(), "--infra", fixture("one-node.germ")});
  CHECK(result.exit_code == 4);
  CHECK(result.err.find("infeasible: an anti-affinity group has 2 replicas "
                        "but only 1 nodes exist") != std::string::npos);
}

TEST_CASE("pipeline chains every step into one output directory") {
  const auto dir = make_scratch_dir("cli-pipeline");
  const auto out_dir = dir / "out";
  const CommandResult result =
      run_cli({"pipeline", fixture("mammogrid.gdsl"), "--library",
              library_dir(), "--infra", fixture("two-node.germ"), "--out-dir",
              out_dir.string()});
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("parse: model mammogridGateway (5 elements)\n") !=
        std::string::npos);
  CHECK(result.out.find("check: ok\n") != std::string::npos);
  CHECK(result.out.find("weave[qos]: applied 1 construct(s)\n") !=
        std::string::npos);
  CHECK(result.out.find("weave[platform]: applied 0 construct(s)\n") !=
        std::string::npos);
  CHECK(result.out.find("gen: 8 artifact(s)\n") != std::string::npos);
  CHECK(result.out.find("plan: nodes_used=2 optimal=true\n") !=
        std::string::npos);

  CHECK(std::filesystem::exists(out_dir /
                                "mammogridGateway.gecm-applied.gdsl"));
  CHECK(std::filesystem::exists(out_dir / "mammogridGateway.gesm.gdsl"));
  CHECK(std::filesystem::exists(out_dir / "FTConnector.connector.json"));
  CHECK(std::filesystem::exists(out_dir / "gesa-index.json"));
  CHECK(std::filesystem::exists(out_dir / "plan.json"));
}

TEST_CASE("pipeline stops with exit 3 on unmatched constraints") {
  const auto dir = make_scratch_dir("cli-pipeline-unmatched");
  const CommandResult result =
      run_cli({"pipeline", fixture("unmatched.gdsl"), "--library",
              library_dir(), "--infra", fixture("two-node.germ"), "--out-dir",
              (dir / "out").string()});
  CHECK(result.exit_code == 3);
  CHECK(result.err.find("unmatched constraint: RecordStore") !=
        std::string::npos);
}

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run_cli({}).exit_code == 2);
  CHECK(run_cli({"frobnicate"}).exit_code == 2);
  CHECK(run_cli({"--help"}).exit_code == 0);
  CHECK(run_cli({"plan", fixture("mammogrid.gdsl")}).exit_code == 2);
}
