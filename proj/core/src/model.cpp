#include "gforge/model.hpp"

#include <algorithm>
#include <set>

namespace gforge {

bool is_valid_identifier(const std::string& text) {
  if (text.empty()) return false;
  auto head = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  auto tail = [&](char c) {
    return head(c) || (c >= '0' && c <= '9') || c == '-';
  };
  if (!head(text[0])) return false;
  return std::all_of(text.begin() + 1, text.end(), tail);
}

const char* direction_name(Direction d) {
  return d == Direction::In ? "in" : "out";
}

const char* element_kind_name(ElementKind k) {
  return k == ElementKind::Component ? "component" : "connector";
}

const char* service_kind_name(ServiceKind k) {
  switch (k) {
    case ServiceKind::Atomic: return "atomic";
    case ServiceKind::Composite: return "composite";
    case ServiceKind::Unspecified: return "unspecified";
  }
  return "unspecified";
}

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::GEIM: return "GEIM";
    case Stage::WOVEN_QOS: return "WOVEN_QOS";
    case Stage::WOVEN_PLATFORM: return "WOVEN_PLATFORM";
  }
  return "GEIM";
}

std::optional<Stage> parse_stage_name(const std::string& word) {
  if (word == "GEIM") return Stage::GEIM;
  if (word == "WOVEN_QOS") return Stage::WOVEN_QOS;
  if (word == "WOVEN_PLATFORM") return Stage::WOVEN_PLATFORM;
  return std::nullopt;
}

const ConnectionPoint* Port::find_point(const Identifier& point) const {
  for (const auto& p : points)
    if (p.name == point) return &p;
  return nullptr;
}

std::string PortPath::to_string() const {
  return element + "::" + port + "::" + point;
}

std::string ConstraintAnnotation::to_string() const {
  std::string out = "--<" + category + "::" + name + "::" + value;
  if (resolved) out += "::resolved";
  out += ">--";
  return out;
}

const Port* ArchElement::find_port(const Identifier& port) const {
  for (const auto& p : ports)
    if (p.name == port) return &p;
  return nullptr;
}

Port* ArchElement::find_port(const Identifier& port) {
  for (auto& p : ports)
    if (p.name == port) return &p;
  return nullptr;
}

const ArchElement* ArchitectureModel::find_element(
    const Identifier& name) const {
  for (const auto& e : elements)
    if (e.name == name) return &e;
  return nullptr;
}

ArchElement* ArchitectureModel::find_element(const Identifier& name) {
  for (auto& e : elements)
    if (e.name == name) return &e;
  return nullptr;
}

std::vector<AnchoredAnnotation> ArchitectureModel::anchored_annotations()
    const {
  std::vector<AnchoredAnnotation> out;
  for (const auto& a : annotations) out.push_back({"", a});
  for (const auto& e : elements)
    for (const auto& a : e.annotations) out.push_back({e.name, a});
  return out;
}

const ConnectionPoint& resolve_path(const ArchitectureModel& model,
                                    const PortPath& path) {
  const ArchElement* element = model.find_element(path.element);
  if (!element)
    throw Error(ErrorCode::UnknownElement,
                "unknown element '" + path.element + "' in path " +
                    path.to_string());
  const Port* port = element->find_port(path.port);
  if (!port)
    throw Error(ErrorCode::UnknownPort,
                "unknown port '" + path.port + "' in path " +
                    path.to_string());
  const ConnectionPoint* point = port->find_point(path.point);
  if (!point)
    throw Error(ErrorCode::UnknownPoint,
                "unknown point '" + path.point + "' in path " +
                    path.to_string());
  return *point;
}

namespace {

void check_unique(std::vector<Violation>& out, const std::string& subject,
                  const std::string& what, const Identifier& name,
                  std::set<Identifier>& seen) {
  if (!seen.insert(name).second)
    out.push_back({"DuplicateName", subject,
                   "duplicate " + what + " '" + name + "'"});
}

}  // namespace

std::vector<Violation> check_well_formed(const ArchitectureModel& model) {
  std::vector<Violation> out;

  std::set<Identifier> element_names;
  for (const auto& element : model.elements) {
    check_unique(out, element.name, "element name", element.name,
                 element_names);
    std::set<Identifier> port_names;
    for (const auto& port : element.ports) {
      check_unique(out, element.name + "::" + port.name, "port name",
                   port.name, port_names);
      std::set<Identifier> point_names;
      for (const auto& point : port.points)
        check_unique(out, element.name + "::" + port.name + "::" + point.name,
                     "connection point name", point.name, point_names);
    }
    if (element.behaviour) {
      std::set<Identifier> def_names;
      for (const auto& def : element.behaviour->definitions)
        check_unique(out, element.name + "." + def.name, "abstraction name",
                     def.name, def_names);
      for (const auto& entry : element.behaviour->composition)
        if (!def_names.count(entry))
          out.push_back({"UnknownAbstraction", element.name,
                         "composition references undefined abstraction '" +
                             entry + "'"});
    }
  }

  std::set<std::pair<std::string, std::string>> seen_attachments;
  for (const auto& attachment : model.attachments) {
    const std::string subject =
        attachment.from.to_string() + " -> " + attachment.to.to_string();
    const ConnectionPoint* from = nullptr;
    const ConnectionPoint* to = nullptr;
    try {
      from = &resolve_path(model, attachment.from);
    } catch (const Error& e) {
      out.push_back({"DanglingAttachment", subject, e.what()});
    }
    try {
      to = &resolve_path(model, attachment.to);
    } catch (const Error& e) {
      out.push_back({"DanglingAttachment", subject, e.what()});
    }
    if (from && from->direction != Direction::Out)
      out.push_back({"DirectionViolation", subject,
                     "attachment source " + attachment.from.to_string() +
                         " is not an out point"});
    if (to && to->direction != Direction::In)
      out.push_back({"DirectionViolation", subject,
                     "attachment target " + attachment.to.to_string() +
                         " is not an in point"});
    if (attachment.from == attachment.to)
      out.push_back({"SelfAttachment", subject,
                     "connection point attached to itself"});
    if (!seen_attachments
             .emplace(attachment.from.to_string(), attachment.to.to_string())
             .second)
      out.push_back({"DuplicateAttachment", subject,
                     "attachment appears more than once"});
  }

  for (const auto& anchored : model.anchored_annotations()) {
    if (!anchored.target.empty() && !model.find_element(anchored.target))
      out.push_back({"DanglingAnnotation", anchored.annotation.to_string(),
                     "annotation target '" + anchored.target +
                         "' does not exist"});
  }

  return out;
}

namespace {

const Identifier& mapped(const std::map<Identifier, Identifier>& rename,
                         const Identifier& name) {
  auto it = rename.find(name);
  return it == rename.end() ? name : it->second;
}

}  // namespace

ArchElement rename_owned_identifiers(
    const ArchElement& element,
    const std::map<Identifier, Identifier>& rename) {
  ArchElement out = element;
  out.name = mapped(rename, element.name);
  for (auto& port : out.ports) {
    port.name = mapped(rename, port.name);
    for (auto& point : port.points) point.name = mapped(rename, point.name);
  }
  if (out.behaviour) {
    for (auto& def : out.behaviour->definitions) {
      def.name = mapped(rename, def.name);
      for (auto& statement : def.statements)
        for (auto& invocation : statement.invocations)
          invocation = mapped(rename, invocation);
    }
    for (auto& entry : out.behaviour->composition)
      entry = mapped(rename, entry);
  }
  return out;
}

bool structurally_isomorphic(const ArchElement& a, const ArchElement& b,
                             const std::map<Identifier, Identifier>& rename) {
  const ArchElement image = rename_owned_identifiers(a, rename);
  if (image.name != b.name) return false;
  if (image.kind != b.kind || image.service_kind != b.service_kind ||
      image.stateless != b.stateless || image.idempotent != b.idempotent)
    return false;
  if (image.ports != b.ports) return false;
  return image.behaviour == b.behaviour;
}

}  // namespace gforge
