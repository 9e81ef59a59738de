#include "gforge/construct.hpp"

namespace gforge {

const char* construct_kind_keyword(ConstructKind k) {
  return k == ConstructKind::QoS ? "qualityOfServiceProperty"
                                 : "executionPlatformProperty";
}

bool ConstraintPattern::matches(const ConstraintAnnotation& annotation) const {
  return category == annotation.category && name == annotation.name &&
         (is_wildcard() || value == annotation.value);
}

std::string ConstraintPattern::to_string() const {
  return category + "::" + name + "::" + value;
}

const char* action_kind_name(const RewriteAction& action) {
  struct Visitor {
    const char* operator()(const IncludeAction&) const { return "include"; }
    const char* operator()(const ReplicateAction&) const { return "replicate"; }
    const char* operator()(const UnifyAction&) const { return "unify"; }
    const char* operator()(const RemoveAction&) const { return "remove"; }
    const char* operator()(const RenameAction&) const { return "rename"; }
  };
  return std::visit(Visitor{}, action);
}

std::size_t action_count(const Construct& construct) {
  std::size_t count = 0;
  for (const auto& scope : construct.scopes) count += scope.actions.size();
  return count;
}

}  // namespace gforge
