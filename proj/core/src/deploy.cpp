#include "gforge/deploy.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gforge {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<const ArchElement*> deployable_components(
    const ArchitectureModel& model) {
  std::vector<const ArchElement*> components;
  for (const auto& element : model.elements)
    if (element.kind == ElementKind::Component &&
        element.metadata.find("parent") == element.metadata.end())
      components.push_back(&element);
  std::sort(components.begin(), components.end(),
            [](const ArchElement* a, const ArchElement* b) {
              return a->name < b->name;
            });
  return components;
}

struct Problem {
  std::vector<Identifier> components;        // lexicographic
  std::vector<int> weight;                   // per component
  std::vector<int> pinned_node;              // node index or -1
  std::vector<int> group;                    // anti-affinity group or -1
  std::vector<Identifier> nodes;             // lexicographic
  std::vector<int> capacity;                 // per node
};

// Merges model-derived replica groups with any extra groups the spec
// carries, dropping exact duplicates.
std::vector<std::vector<Identifier>> effective_groups(
    const ArchitectureModel& model, const DeploymentSpec& spec) {
  std::vector<std::vector<Identifier>> groups =
      derive_anti_affinity_groups(model);
  for (const auto& extra : spec.anti_affinity)
    if (std::find(groups.begin(), groups.end(), extra) == groups.end())
      groups.push_back(extra);
  return groups;
}

Problem build_problem(const ArchitectureModel& model,
                      const InfrastructureModel& infra,
                      const DeploymentSpec& spec) {
  Problem problem;
  for (const auto* component : deployable_components(model))
    problem.components.push_back(component->name);

  auto component_index = [&](const Identifier& name) {
    auto it = std::find(problem.components.begin(), problem.components.end(),
                        name);
    return it == problem.components.end()
               ? -1
               : static_cast<int>(it - problem.components.begin());
  };

  for (const auto& node : infra.nodes) problem.nodes.push_back(node.name);
  std::sort(problem.nodes.begin(), problem.nodes.end());
  for (const auto& name : problem.nodes)
    problem.capacity.push_back(infra.find_node(name)->capacity);
  auto node_index = [&](const Identifier& name) {
    auto it = std::find(problem.nodes.begin(), problem.nodes.end(), name);
    return it == problem.nodes.end()
               ? -1
               : static_cast<int>(it - problem.nodes.begin());
  };

  problem.weight.assign(problem.components.size(), 1);
  for (const auto& [component, weight] : spec.weights) {
    const int index = component_index(component);
    if (index < 0)
      throw Error(ErrorCode::InvalidSpec,
                  "weight given for unknown component '" + component + "'");
    if (weight < 0)
      throw Error(ErrorCode::InvalidSpec,
                  "component '" + component + "' has negative weight");
    problem.weight[index] = weight;
  }

  problem.pinned_node.assign(problem.components.size(), -1);
  for (const auto& [component, node] : spec.pins) {
    const int index = component_index(component);
    if (index < 0)
      throw Error(ErrorCode::InvalidSpec,
                  "pin given for unknown component '" + component + "'");
    const int node_idx = node_index(node);
    if (node_idx < 0)
      throw Error(ErrorCode::InvalidSpec,
                  "component '" + component + "' pinned to unknown node '" +
                      node + "'");
    problem.pinned_node[index] = node_idx;
  }

  problem.group.assign(problem.components.size(), -1);
  const auto groups = effective_groups(model, spec);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const auto& member : groups[g]) {
      const int index = component_index(member);
      if (index < 0)
        throw Error(ErrorCode::InvalidSpec,
                    "anti-affinity group names unknown component '" + member +
                        "'");
      if (problem.group[index] >= 0 &&
          problem.group[index] != static_cast<int>(g))
        throw Error(ErrorCode::InvalidSpec,
                    "component '" + member +
                        "' appears in two anti-affinity groups");
      problem.group[index] = static_cast<int>(g);
    }
  }
  return problem;
}

// Spells out every constraint class a verified plan honours, for the
// plan's satisfied list.
std::vector<std::string> describe_constraints(
    const Problem& problem, const std::vector<std::vector<Identifier>>& groups,
    const DeploymentPlan& plan) {
  std::vector<std::string> out;
  for (std::size_t n = 0; n < problem.nodes.size(); ++n) {
    int load = 0;
    for (std::size_t i = 0; i < problem.components.size(); ++i)
      if (plan.assignment.at(problem.components[i]) == problem.nodes[n])
        load += problem.weight[i];
    if (load > 0)
      out.push_back("capacity: node '" + problem.nodes[n] + "' carries " +
                    std::to_string(load) + " of " +
                    std::to_string(problem.capacity[n]) + " slots");
  }
  for (std::size_t i = 0; i < problem.components.size(); ++i)
    if (problem.pinned_node[i] >= 0)
      out.push_back("pin: component '" + problem.components[i] +
                    "' stays on node '" +
                    problem.nodes[problem.pinned_node[i]] + "'");
  for (const auto& group : groups) {
    std::string members;
    for (const auto& member : group)
      members += (members.empty() ? "" : ", ") + member;
    out.push_back("anti-affinity: {" + members +
                  "} spread over pairwise-distinct nodes");
  }
  return out;
}

// Quick certificates of infeasibility with a pointed witness; the
// search handles everything subtler.
std::optional<std::string> quick_witness(const Problem& problem,
                                         std::size_t group_count) {
  std::vector<int> pinned_load(problem.nodes.size(), 0);
  for (std::size_t i = 0; i < problem.components.size(); ++i)
    if (problem.pinned_node[i] >= 0)
      pinned_load[problem.pinned_node[i]] += problem.weight[i];
  for (std::size_t n = 0; n < problem.nodes.size(); ++n)
    if (pinned_load[n] > problem.capacity[n])
      return "pinned components need " + std::to_string(pinned_load[n]) +
             " slots on node '" + problem.nodes[n] + "' but it has " +
             std::to_string(problem.capacity[n]);

  for (std::size_t g = 0; g < group_count; ++g) {
    std::size_t members = 0;
    std::map<int, Identifier> pinned_at;
    Identifier first, collided;
    for (std::size_t i = 0; i < problem.components.size(); ++i) {
      if (problem.group[i] != static_cast<int>(g)) continue;
      ++members;
      if (problem.pinned_node[i] >= 0) {
        auto [it, fresh] =
            pinned_at.emplace(problem.pinned_node[i], problem.components[i]);
        if (!fresh) {
          first = it->second;
          collided = problem.components[i];
        }
      }
    }
    if (!collided.empty())
      return "replicas '" + first + "' and '" + collided +
             "' are pinned to the same node";
    if (members > problem.nodes.size())
      return "an anti-affinity group has " + std::to_string(members) +
             " replicas but only " + std::to_string(problem.nodes.size()) +
             " nodes exist";
  }

  const int total_weight =
      std::accumulate(problem.weight.begin(), problem.weight.end(), 0);
  const int total_capacity =
      std::accumulate(problem.capacity.begin(), problem.capacity.end(), 0);
  if (total_weight > total_capacity)
    return "components need " + std::to_string(total_weight) +
           " slots but the infrastructure offers " +
           std::to_string(total_capacity);
  return std::nullopt;
}

void check_cancel(const CancellationToken* cancel) {
  if (cancel && cancel->cancelled())
    throw Error(ErrorCode::Cancelled, "deployment planning was cancelled");
}

struct SearchState {
  const Problem& problem;
  const CancellationToken* cancel;
  std::vector<int> assignment;     // component -> node, -1 while open
  std::vector<int> remaining;      // capacity left per node
  std::vector<int> load_count;     // components per node (for distinct count)
  std::vector<std::size_t> order;  // indices of unpinned components
  int distinct = 0;
  int best_distinct = 0;
  std::vector<int> best_assignment;
  bool found = false;
};

bool group_conflict(const SearchState& state, std::size_t component,
                    int node) {
  const int group = state.problem.group[component];
  if (group < 0) return false;
  for (std::size_t other = 0; other < state.assignment.size(); ++other)
    if (other != component && state.problem.group[other] == group &&
        state.assignment[other] == node)
      return true;
  return false;
}

void place(SearchState& state, std::size_t component, int node) {
  state.assignment[component] = node;
  state.remaining[node] -= state.problem.weight[component];
  if (state.load_count[node]++ == 0) ++state.distinct;
}

void unplace(SearchState& state, std::size_t component, int node) {
  state.assignment[component] = -1;
  state.remaining[node] += state.problem.weight[component];
  if (--state.load_count[node] == 0) --state.distinct;
}

// Exhaustive lexicographic branch-and-bound on node count. The first
// completion at any count is the lexicographically smallest with that
// count, and improvements only ever lower the count, so the final
// answer is the lexicographically smallest minimal plan.
void search(SearchState& state, std::size_t depth) {
  check_cancel(state.cancel);
  if (state.found && state.distinct >= state.best_distinct) return;
  if (depth == state.order.size()) {
    state.found = true;
    state.best_distinct = state.distinct;
    state.best_assignment = state.assignment;
    return;
  }
  const std::size_t component = state.order[depth];
  for (int node = 0; node < static_cast<int>(state.problem.nodes.size());
       ++node) {
    if (state.remaining[node] < state.problem.weight[component]) continue;
    if (group_conflict(state, component, node)) continue;
    place(state, component, node);
    search(state, depth + 1);
    unplace(state, component, node);
  }
}

// First-fit-decreasing with backtracking: complete, not optimal.
bool first_fit(SearchState& state, std::size_t depth) {
  check_cancel(state.cancel);
  if (depth == state.order.size()) return true;
  const std::size_t component = state.order[depth];
  for (int node = 0; node < static_cast<int>(state.problem.nodes.size());
       ++node) {
    if (state.remaining[node] < state.problem.weight[component]) continue;
    if (group_conflict(state, component, node)) continue;
    place(state, component, node);
    if (first_fit(state, depth + 1)) return true;
    unplace(state, component, node);
  }
  return false;
}

}  // namespace

std::vector<std::vector<Identifier>> derive_anti_affinity_groups(
    const ArchitectureModel& model) {
  std::map<std::string, std::vector<Identifier>> by_group;
  for (const auto* component : deployable_components(model)) {
    auto it = component->metadata.find("replica-group");
    if (it != component->metadata.end())
      by_group[it->second].push_back(component->name);
  }
  std::vector<std::vector<Identifier>> groups;
  for (auto& [name, members] : by_group)
    if (members.size() >= 2) groups.push_back(std::move(members));
  return groups;
}

DeploymentSpec parse_deployment_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot read '" + file.string() + "'");
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidSpec,
                "deployment spec '" + file.string() +
                    "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object())
    throw Error(ErrorCode::InvalidSpec, "deployment spec must be an object");

  DeploymentSpec spec;
  for (const auto& [key, value] : doc.items()) {
    if (key == "pins") {
      if (!value.is_object())
        throw Error(ErrorCode::InvalidSpec, "\"pins\" must be an object");
      for (const auto& [component, node] : value.items()) {
        if (!node.is_string())
          throw Error(ErrorCode::InvalidSpec,
                      "pin for '" + component + "' must name a node");
        spec.pins[component] = node.get<std::string>();
      }
    } else if (key == "weights") {
      if (!value.is_object())
        throw Error(ErrorCode::InvalidSpec, "\"weights\" must be an object");
      for (const auto& [component, weight] : value.items()) {
        if (!weight.is_number_integer())
          throw Error(ErrorCode::InvalidSpec,
                      "weight for '" + component + "' must be an integer");
        spec.weights[component] = weight.get<int>();
      }
    } else {
      throw Error(ErrorCode::InvalidSpec,
                  "unknown deployment spec key \"" + key + "\"");
    }
  }
  return spec;
}

PlanOutcome plan_deployment(const ArchitectureModel& model,
                            const InfrastructureModel& infra,
                            const DeploymentSpec& spec,
                            const CancellationToken* cancel) {
  const Problem problem = build_problem(model, infra, spec);
  const auto groups = effective_groups(model, spec);

  PlanOutcome outcome;
  if (auto witness = quick_witness(problem, groups.size())) {
    outcome.witness = *witness;
    return outcome;
  }

  SearchState state{problem, cancel};
  state.assignment.assign(problem.components.size(), -1);
  state.remaining = problem.capacity;
  state.load_count.assign(problem.nodes.size(), 0);
  for (std::size_t i = 0; i < problem.components.size(); ++i)
    if (problem.pinned_node[i] >= 0) place(state, i, problem.pinned_node[i]);
  for (std::size_t i = 0; i < problem.components.size(); ++i)
    if (problem.pinned_node[i] < 0) state.order.push_back(i);

  const bool exhaustive = state.order.size() <= 10;
  if (exhaustive) {
    search(state, 0);
    if (state.found) state.assignment = state.best_assignment;
  } else {
    // Heaviest first gives first-fit its classic packing order.
    std::sort(state.order.begin(), state.order.end(),
              [&](std::size_t a, std::size_t b) {
                if (problem.weight[a] != problem.weight[b])
                  return problem.weight[a] > problem.weight[b];
                return problem.components[a] < problem.components[b];
              });
    state.found = first_fit(state, 0);
  }

  if (!state.found) {
    outcome.witness =
        "no node assignment satisfies the capacity and anti-affinity "
        "requirements simultaneously";
    return outcome;
  }

  DeploymentPlan plan;
  std::set<Identifier> used;
  for (std::size_t i = 0; i < problem.components.size(); ++i) {
    const Identifier& node = problem.nodes[state.assignment[i]];
    plan.assignment[problem.components[i]] = node;
    used.insert(node);
  }
  plan.nodes_used = static_cast<int>(used.size());
  plan.optimal = exhaustive;

  DeploymentSpec effective = spec;
  effective.anti_affinity = groups;
  if (validate_plan(model, infra, effective, plan).empty())
    plan.satisfied = describe_constraints(problem, groups, plan);
  outcome.plan = std::move(plan);
  return outcome;
}

std::vector<Violation> validate_plan(const ArchitectureModel& model,
                                     const InfrastructureModel& infra,
                                     const DeploymentSpec& spec,
                                     const DeploymentPlan& plan) {
  std::vector<Violation> out;

  std::set<Identifier> known;
  for (const auto* component : deployable_components(model)) {
    known.insert(component->name);
    if (!plan.assignment.count(component->name))
      out.push_back({"Unassigned", component->name,
                     "component has no node assignment"});
  }
  for (const auto& [component, node] : plan.assignment) {
    if (!known.count(component))
      out.push_back({"UnknownComponent", component,
                     "assignment names a component the model lacks"});
    if (!infra.find_node(node))
      out.push_back({"UnknownNode", component,
                     "component assigned to unknown node '" + node + "'"});
  }

  std::map<Identifier, int> load;
  for (const auto& [component, node] : plan.assignment) {
    auto weight = spec.weights.find(component);
    load[node] += weight == spec.weights.end() ? 1 : weight->second;
  }
  for (const auto& [node, used] : load) {
    const InfraNode* decl = infra.find_node(node);
    if (decl && used > decl->capacity)
      out.push_back({"CapacityExceeded", node,
                     "node '" + node + "' holds " + std::to_string(used) +
                         " slots but offers " +
                         std::to_string(decl->capacity)});
  }

  for (const auto& [component, node] : spec.pins) {
    auto assigned = plan.assignment.find(component);
    if (assigned != plan.assignment.end() && assigned->second != node)
      out.push_back({"PinViolated", component,
                     "component pinned to '" + node + "' but assigned to '" +
                         assigned->second + "'"});
  }

  const auto groups = effective_groups(model, spec);
  for (const auto& group : groups) {
    std::map<Identifier, Identifier> node_of;
    for (const auto& member : group) {
      auto assigned = plan.assignment.find(member);
      if (assigned == plan.assignment.end()) continue;
      auto [it, fresh] = node_of.emplace(assigned->second, member);
      if (!fresh)
        out.push_back({"AntiAffinityViolation", member,
                       "replicas '" + it->second + "' and '" + member +
                           "' share node '" + assigned->second + "'"});
    }
  }

  std::set<Identifier> used;
  for (const auto& [component, node] : plan.assignment) used.insert(node);
  if (plan.nodes_used != static_cast<int>(used.size()))
    out.push_back({"CountMismatch", model.name,
                   "plan claims " + std::to_string(plan.nodes_used) +
                       " nodes but the assignment uses " +
                       std::to_string(used.size())});
  return out;
}

std::string plan_to_json(const PlanOutcome& outcome) {
  ordered_json doc;
  if (outcome.plan) {
    ordered_json assignment = ordered_json::object();
    for (const auto& [component, node] : outcome.plan->assignment)
      assignment[component] = node;
    doc = {{"assignment", std::move(assignment)},
           {"nodes_used", outcome.plan->nodes_used},
           {"optimal", outcome.plan->optimal},
           {"satisfied", outcome.plan->satisfied}};
  } else {
    doc = {{"assignment", nullptr},
           {"nodes_used", 0},
           {"optimal", false},
           {"satisfied", ordered_json::array()},
           {"witness", outcome.witness}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace gforge
