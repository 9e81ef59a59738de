#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gforge/model.hpp"

namespace gforge {

struct InfraNode {
  Identifier name;
  int capacity = 0;  // slots; undeclared capacity means zero
  std::map<std::string, std::string> attributes;

  bool operator==(const InfraNode&) const = default;
};

/// Deployment target description: named nodes plus undirected links
/// (stored with endpoints in lexicographic order, duplicates folded).
struct InfrastructureModel {
  Identifier name;
  std::vector<InfraNode> nodes;
  std::vector<std::pair<Identifier, Identifier>> links;

  const InfraNode* find_node(const Identifier& name) const;
  bool has_link(const Identifier& a, const Identifier& b) const;
  bool operator==(const InfrastructureModel&) const = default;
};

}  // namespace gforge
