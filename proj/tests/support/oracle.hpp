#pragma once

#include <map>
#include <string>
#include <vector>

#include "gforge/deploy.hpp"
#include "gforge/infrastructure.hpp"
#include "gforge/model.hpp"

namespace gforge::testing {

/// One deployment instance in plain data form, shared between the
/// brute-force oracle and the production planner bridge.
struct OracleInstance {
  std::vector<std::string> components;
  std::map<std::string, int> weights;          // absent => 1
  std::map<std::string, std::string> pins;     // component -> node
  std::vector<std::vector<std::string>> groups;
  std::vector<std::pair<std::string, int>> nodes;  // name, capacity
};

struct OracleResult {
  bool feasible = false;
  int min_nodes = 0;
};

/// Exhaustively enumerates every component->node assignment and
/// reports feasibility plus the minimum number of distinct nodes.
/// Written independently of the planner.
OracleResult brute_force(const OracleInstance& instance);

ArchitectureModel instance_model(const OracleInstance& instance);
InfrastructureModel instance_infra(const OracleInstance& instance);
DeploymentSpec instance_spec(const OracleInstance& instance);

}  // namespace gforge::testing
