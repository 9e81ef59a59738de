// gforge — parse, validate, weave, generate and plan gateway
// architecture descriptions.
//
// Exit codes: 0 success, 1 lexical/parse failure, 2 validation or
// rewrite failure, 3 unmatched constraints, 4 infeasible deployment,
// 5 I/O failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gforge/codegen.hpp"
#include "gforge/deploy.hpp"
#include "gforge/lexer.hpp"
#include "gforge/library.hpp"
#include "gforge/parser.hpp"
#include "gforge/printer.hpp"
#include "gforge/rewrite.hpp"
#include "gforge/style.hpp"

namespace {

using namespace gforge;

// Thrown for outcomes that are not hard errors but still set the
// process exit code (unmatched constraints, infeasible plans).
struct ExitRequest {
  int code;
};

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::LexError:
    case ErrorCode::ParseError:
    case ErrorCode::ElaborationError:
    case ErrorCode::UnknownActionKind:
    case ErrorCode::InvalidIdentifier:
      return 1;
    case ErrorCode::IoError:
      return 5;
    default:
      return 2;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

ArchitectureModel load_model(const std::string& path) {
  return parse_model(read_file(path), path);
}

InfrastructureModel load_infrastructure(const std::string& path) {
  return parse_infrastructure(read_file(path), path);
}

WeaveStage stage_from(const std::string& word) {
  if (word == "qos") return WeaveStage::QoSOnly;
  if (word == "platform") return WeaveStage::PlatformOnly;
  return WeaveStage::All;
}

std::vector<Violation> run_checks(const ArchitectureModel& model) {
  std::vector<Violation> violations = check_well_formed(model);
  for (auto& violation : check_gateway_style(model))
    violations.push_back(std::move(violation));
  for (const auto& element : model.elements)
    for (auto& violation : check_behaviour_refs(element))
      violations.push_back(std::move(violation));
  return violations;
}

void print_violations(const std::vector<Violation>& violations) {
  for (const auto& violation : violations)
    std::cerr << violation.kind << " " << violation.subject << ": "
              << violation.message << '\n';
}

void report_unmatched(const WeaveReport& report) {
  for (const auto& unmatched : report.unmatched)
    std::cerr << "unmatched constraint: "
              << (unmatched.target.empty() ? "<model>" : unmatched.target)
              << " " << unmatched.annotation.to_string() << '\n';
}

// --- subcommand bodies -----------------------------------------------------

void cmd_parse(const std::string& file, bool emit_ast) {
  const std::string source = read_file(file);
  const auto tokens = tokenize(source, file);
  const std::string ext =
      std::filesystem::path(file).extension().string();
  if (ext == ".gcon") {
    const AstNode ast = parse_construct_ast(tokens, file);
    if (emit_ast) {
      dump_ast(ast, std::cout);
      return;
    }
    std::cout << pretty_print(elaborate_construct(ast));
  } else if (ext == ".germ") {
    const AstNode ast = parse_infrastructure_ast(tokens, file);
    if (emit_ast) {
      dump_ast(ast, std::cout);
      return;
    }
    const InfrastructureModel infra = elaborate_infrastructure(ast);
    std::cout << "infrastructure " << infra.name << ": " << infra.nodes.size()
              << " nodes, " << infra.links.size() << " links\n";
  } else {
    const AstNode ast = parse_model_ast(tokens, file);
    if (emit_ast) {
      dump_ast(ast, std::cout);
      return;
    }
    std::cout << pretty_print(elaborate_model(ast));
  }
}

void cmd_check(const std::string& file) {
  const ArchitectureModel model = load_model(file);
  const auto violations = run_checks(model);
  if (!violations.empty()) {
    print_violations(violations);
    throw ExitRequest{2};
  }
  std::cout << "ok: model " << model.name << " satisfies the gateway style\n";
}

void cmd_weave(const std::string& file, const std::string& library_dir,
               const std::string& stage_word, const std::string& out,
               const std::string& report_file) {
  const ArchitectureModel model = load_model(file);
  const Library library = load_library(library_dir);
  WeaveReport report;
  const ArchitectureModel woven =
      weave(model, library, stage_from(stage_word), report);

  if (!report_file.empty()) write_file(report_file, report_text(report));
  if (report.error) {
    std::cerr << "weave failed: " << *report.error << '\n';
    throw ExitRequest{2};
  }

  const std::string text = pretty_print(woven);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);

  std::cerr << "applied " << report.applied.size() << " construct(s), "
            << report.unmatched.size() << " unmatched, "
            << report.violations.size() << " refinement finding(s)\n";
  if (!report.violations.empty()) {
    print_violations(report.violations);
    throw ExitRequest{2};
  }
  if (!report.unmatched.empty()) {
    report_unmatched(report);
    throw ExitRequest{3};
  }
}

void cmd_gen(const std::string& file, const std::string& granularity_word,
             const std::string& out_dir) {
  const ArchitectureModel model = load_model(file);
  if (model.stage != Stage::WOVEN_PLATFORM)
    std::cerr << "warning: generating from stage " << stage_name(model.stage)
              << "; platform constraints may be unwoven\n";
  const Granularity granularity = granularity_word == "monolith"
                                      ? Granularity::Monolith
                                      : Granularity::ComplexObjects;
  const auto artifacts = emit_manifests(model, granularity);
  const auto written = write_artifacts(artifacts, out_dir);
  for (const auto& path : written) std::cout << path.string() << '\n';
}

void cmd_graph(const std::string& file, const std::string& out) {
  const ArchitectureModel model = load_model(file);
  const std::string dot = emit_graph(model);
  if (out.empty())
    std::cout << dot;
  else
    write_file(out, dot);
}

DeploymentSpec load_spec(const std::string& spec_file) {
  DeploymentSpec spec;
  if (!spec_file.empty()) spec = parse_deployment_spec(spec_file);
  return spec;
}

// A plan the independent checker rejects is a planner bug, not user
// error; surface it loudly instead of shipping the plan.
void verify_plan(const ArchitectureModel& model,
                 const InfrastructureModel& infra, DeploymentSpec spec,
                 const DeploymentPlan& plan) {
  for (const auto& group : derive_anti_affinity_groups(model))
    if (std::find(spec.anti_affinity.begin(), spec.anti_affinity.end(),
                  group) == spec.anti_affinity.end())
      spec.anti_affinity.push_back(group);
  const auto violations = validate_plan(model, infra, spec, plan);
  if (violations.empty()) return;
  std::cerr << "internal error: produced plan fails validation\n";
  for (const auto& violation : violations)
    std::cerr << violation.kind << ' ' << violation.subject << ": "
              << violation.message << '\n';
  throw ExitRequest{2};
}

void cmd_plan(const std::string& file, const std::string& infra_file,
              const std::string& spec_file, const std::string& out) {
  const ArchitectureModel model = load_model(file);
  const InfrastructureModel infra = load_infrastructure(infra_file);
  const DeploymentSpec spec = load_spec(spec_file);
  const PlanOutcome outcome = plan_deployment(model, infra, spec);
  if (!outcome.plan) {
    std::cerr << "infeasible: " << outcome.witness << '\n';
    throw ExitRequest{4};
  }
  const std::string text = plan_to_json(outcome);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  verify_plan(model, infra, spec, *outcome.plan);
}

void cmd_pipeline(const std::string& file, const std::string& library_dir,
                  const std::string& infra_file, const std::string& spec_file,
                  const std::string& granularity_word,
                  const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw Error(ErrorCode::IoError,
                "cannot create '" + out_dir + "': " + ec.message());

  const ArchitectureModel model = load_model(file);
  std::cout << "parse: model " << model.name << " (" << model.elements.size()
            << " elements)\n";

  const auto violations = run_checks(model);
  if (!violations.empty()) {
    print_violations(violations);
    throw ExitRequest{2};
  }
  std::cout << "check: ok\n";

  const Library library = load_library(library_dir);
  const auto out_path = [&](const std::string& leaf) {
    return (std::filesystem::path(out_dir) / leaf).string();
  };

  WeaveReport qos_report;
  const ArchitectureModel qos_model =
      weave(model, library, WeaveStage::QoSOnly, qos_report);
  if (qos_report.error) {
    std::cerr << "weave failed: " << *qos_report.error << '\n';
    throw ExitRequest{2};
  }
  write_file(out_path(model.name + ".gecm-applied.gdsl"),
             pretty_print(qos_model));
  std::cout << "weave[qos]: applied " << qos_report.applied.size()
            << " construct(s)\n";

  WeaveReport platform_report;
  const ArchitectureModel woven =
      weave(qos_model, library, WeaveStage::PlatformOnly, platform_report);
  if (platform_report.error) {
    std::cerr << "weave failed: " << *platform_report.error << '\n';
    throw ExitRequest{2};
  }
  write_file(out_path(model.name + ".gesm.gdsl"), pretty_print(woven));
  std::cout << "weave[platform]: applied " << platform_report.applied.size()
            << " construct(s)\n";

  const auto refinement_findings = [&](const WeaveReport& report) {
    if (!report.violations.empty()) {
      print_violations(report.violations);
      throw ExitRequest{2};
    }
  };
  refinement_findings(qos_report);
  refinement_findings(platform_report);

  if (!platform_report.unmatched.empty()) {
    report_unmatched(platform_report);
    throw ExitRequest{3};
  }

  const Granularity granularity = granularity_word == "monolith"
                                      ? Granularity::Monolith
                                      : Granularity::ComplexObjects;
  const auto artifacts = emit_manifests(woven, granularity);
  write_artifacts(artifacts, out_dir);
  std::cout << "gen: " << artifacts.size() << " artifact(s)\n";

  const InfrastructureModel infra = load_infrastructure(infra_file);
  const DeploymentSpec spec = load_spec(spec_file);
  const PlanOutcome outcome = plan_deployment(woven, infra, spec);
  if (!outcome.plan) {
    std::cerr << "infeasible: " << outcome.witness << '\n';
    throw ExitRequest{4};
  }
  write_file(out_path("plan.json"), plan_to_json(outcome));
  std::cout << "plan: nodes_used=" << outcome.plan->nodes_used
            << " optimal=" << (outcome.plan->optimal ? "true" : "false")
            << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gateway architecture forge"};
  app.require_subcommand(1);

  std::string file, library_dir, infra_file, spec_file, out, out_dir;
  std::string report_file;
  std::string stage_word = "all";
  std::string granularity_word = "complex-objects";
  bool emit_ast = false;

  auto* parse_cmd = app.add_subcommand("parse", "parse and reprint a file");
  parse_cmd->add_option("file", file)->required();
  parse_cmd->add_flag("--emit-ast", emit_ast, "dump the syntax tree");

  auto* check_cmd =
      app.add_subcommand("check", "validate a model against the style");
  check_cmd->add_option("file", file)->required();

  auto* weave_cmd =
      app.add_subcommand("weave", "resolve constraints via the library");
  weave_cmd->add_option("file", file)->required();
  weave_cmd->add_option("--library", library_dir, "construct library")
      ->envname("GFORGE_LIBRARY")
      ->required();
  weave_cmd->add_option("--stage", stage_word)
      ->check(CLI::IsMember({"qos", "platform", "all"}));
  weave_cmd->add_option("-o,--output", out, "woven model file");
  weave_cmd->add_option("--report", report_file, "weave report file");

  auto* gen_cmd = app.add_subcommand("gen", "emit service manifests");
  gen_cmd->add_option("file", file)->required();
  gen_cmd->add_option("--granularity", granularity_word)
      ->check(CLI::IsMember({"complex-objects", "monolith"}));
  gen_cmd->add_option("--out-dir", out_dir)->required();

  auto* graph_cmd = app.add_subcommand("graph", "emit a GraphViz view");
  graph_cmd->add_option("file", file)->required();
  graph_cmd->add_option("-o,--output", out, "dot file");

  auto* plan_cmd = app.add_subcommand("plan", "compute a deployment plan");
  plan_cmd->add_option("file", file)->required();
  plan_cmd->add_option("--infra", infra_file)->required();
  plan_cmd->add_option("--deploy", spec_file, "pins/weights JSON");
  plan_cmd->add_option("-o,--output", out, "plan file");

  auto* pipeline_cmd =
      app.add_subcommand("pipeline", "parse, check, weave, gen and plan");
  pipeline_cmd->add_option("file", file)->required();
  pipeline_cmd->add_option("--library", library_dir)
      ->envname("GFORGE_LIBRARY")
      ->required();
  pipeline_cmd->add_option("--infra", infra_file)->required();
  pipeline_cmd->add_option("--deploy", spec_file);
  pipeline_cmd->add_option("--granularity", granularity_word)
      ->check(CLI::IsMember({"complex-objects", "monolith"}));
  pipeline_cmd->add_option("--out-dir", out_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (parse_cmd->parsed()) cmd_parse(file, emit_ast);
    else if (check_cmd->parsed()) cmd_check(file);
    else if (weave_cmd->parsed())
      cmd_weave(file, library_dir, stage_word, out, report_file);
    else if (gen_cmd->parsed()) cmd_gen(file, granularity_word, out_dir);
    else if (graph_cmd->parsed()) cmd_graph(file, out);
    else if (plan_cmd->parsed()) cmd_plan(file, infra_file, spec_file, out);
    else if (pipeline_cmd->parsed())
      cmd_pipeline(file, library_dir, infra_file, spec_file, granularity_word,
                   out_dir);
  } catch (const ExitRequest& request) {
    return request.code;
  } catch (const Error& e) {
    std::cerr << e.diagnostic() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
