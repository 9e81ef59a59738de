#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gforge/infrastructure.hpp"
#include "gforge/model.hpp"

namespace gforge {

/// Cooperative cancellation for the planner's search.
class CancellationToken {
 public:
  void cancel() { cancelled_.store(true, std::memory_order_relaxed); }
  bool cancelled() const { return cancelled_.load(std::memory_order_relaxed); }

 private:
  std::atomic<bool> cancelled_{false};
};

struct DeploymentSpec {
  std::map<Identifier, Identifier> pins;    // component -> node
  std::map<Identifier, int> weights;        // component -> slots (default 1)
  /// Components that must land on pairwise distinct nodes. Derived
  /// from replica-group metadata; extra groups may be added directly.
  std::vector<std::vector<Identifier>> anti_affinity;

  bool operator==(const DeploymentSpec&) const = default;
};

/// Groups first-order components by their replica-group metadata;
/// only groups of two or more constrain the planner.
std::vector<std::vector<Identifier>> derive_anti_affinity_groups(
    const ArchitectureModel& model);

/// Reads {"pins": {...}, "weights": {...}} JSON. Unknown keys are an
/// InvalidSpec error, as is malformed JSON.
DeploymentSpec parse_deployment_spec(const std::filesystem::path& file);

struct DeploymentPlan {
  std::map<Identifier, Identifier> assignment;  // component -> node
  int nodes_used = 0;
  bool optimal = false;  // true only for the exhaustive search
  /// Human-readable description of every constraint the plan was
  /// verified against (capacity per node, each pin, each group).
  std::vector<std::string> satisfied;

  bool operator==(const DeploymentPlan&) const = default;
};

struct PlanOutcome {
  std::optional<DeploymentPlan> plan;  // empty => infeasible
  /// For infeasible problems: a minimal human-readable witness of the
  /// conflicting requirement set.
  std::string witness;
};

/// Computes a node assignment for every first-order component of the
/// model. Exhaustive branch-and-bound (optimal, lexicographically
/// smallest among minimal-node plans) when at most ten components are
/// unpinned; first-fit-decreasing with backtracking otherwise
/// (optimal=false). Deterministic for equal inputs. Throws
/// Error{InvalidSpec} for pins/weights naming unknown components or
/// nodes and for negative weights; Error{Cancelled} if the token
/// fires mid-search.
PlanOutcome plan_deployment(const ArchitectureModel& model,
                            const InfrastructureModel& infra,
                            const DeploymentSpec& spec,
                            const CancellationToken* cancel = nullptr);

/// Independent checker for a claimed plan: every component assigned
/// to a known node, capacities respected, pins honoured,
/// anti-affinity groups spread. Never consults the planner.
std::vector<Violation> validate_plan(const ArchitectureModel& model,
                                     const InfrastructureModel& infra,
                                     const DeploymentSpec& spec,
                                     const DeploymentPlan& plan);

/// Serializes a plan (or infeasibility) as the stable plan.json form.
std::string plan_to_json(const PlanOutcome& outcome);

}  // namespace gforge
