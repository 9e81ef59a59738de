#include "gforge/infrastructure.hpp"

#include <algorithm>

namespace gforge {

const InfraNode* InfrastructureModel::find_node(const Identifier& name) const {
  for (const auto& node : nodes)
    if (node.name == name) return &node;
  return nullptr;
}

bool InfrastructureModel::has_link(const Identifier& a,
                                   const Identifier& b) const {
  const auto normalized = std::minmax(a, b);
  return std::find(links.begin(), links.end(),
                   std::make_pair(normalized.first, normalized.second)) !=
         links.end();
}

}  // namespace gforge
