#include "gforge/style.hpp"

#include <set>

namespace gforge {

std::vector<Violation> check_gateway_style(const ArchitectureModel& model) {
  std::vector<Violation> out;

  bool any_component = false;
  for (const auto& element : model.elements) {
    if (element.kind == ElementKind::Component) any_component = true;
    switch (element.service_kind) {
      case ServiceKind::Atomic:
        if (!element.stateless)
          out.push_back({"StatelessViolation", element.name,
                         "atomic service '" + element.name +
                             "' must be stateless"});
        if (!element.idempotent)
          out.push_back({"IdempotencyViolation", element.name,
                         "atomic service '" + element.name +
                             "' must be idempotent"});
        break;
      case ServiceKind::Composite:
        if (element.stateless)
          out.push_back({"StatefulnessViolation", element.name,
                         "composite service '" + element.name +
                             "' must be stateful"});
        if (!element.behaviour || element.behaviour->definitions.empty())
          out.push_back({"MissingBehaviour", element.name,
                         "composite service '" + element.name +
                             "' needs a behaviour block describing its "
                             "orchestration"});
        break;
      case ServiceKind::Unspecified:
        break;
    }
  }

  if (model.style == "SOAScienceGateway" && !any_component)
    out.push_back({"EmptyGateway", model.name,
                   "a gateway needs at least one component"});

  return out;
}

std::vector<Violation> check_behaviour_refs(const ArchElement& element) {
  std::vector<Violation> out;
  if (!element.behaviour) return out;

  std::set<Identifier> defined;
  for (const auto& def : element.behaviour->definitions)
    defined.insert(def.name);

  for (const auto& entry : element.behaviour->composition)
    if (!defined.count(entry))
      out.push_back({"UnknownAbstraction", element.name,
                     "composition references undefined abstraction '" + entry +
                         "'"});
  for (const auto& def : element.behaviour->definitions)
    for (const auto& stmt : def.statements)
      for (const auto& invocation : stmt.invocations)
        if (!defined.count(invocation))
          out.push_back({"UnknownAbstraction",
                         element.name + "." + def.name,
                         "body invokes undefined abstraction '" + invocation +
                             "'"});
  return out;
}

}  // namespace gforge
