#include "gforge/printer.hpp"

#include <sstream>

namespace gforge {

namespace {

std::string ind(int level) { return std::string(2 * level, ' '); }

bool number_shaped(const std::string& text) {
  if (text.empty()) return false;
  std::size_t i = 0;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
  if (i == 0) return false;
  if (i == text.size()) return true;
  if (text[i] != '.') return false;
  std::size_t j = ++i;
  while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
  return j > i && j == text.size();
}

// True when the value relexes to a single bare token (identifier —
// possibly holding ${value} placeholders — number, or the wildcard).
bool prints_bare(const std::string& text) {
  if (text == "*") return true;
  if (number_shaped(text)) return true;
  std::string folded = text;
  for (std::size_t at = folded.find("${value}"); at != std::string::npos;
       at = folded.find("${value}"))
    folded.replace(at, 8, "X");
  return is_valid_identifier(folded);
}

std::string quoted(const std::string& value) {
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string bare_or_quoted(const std::string& value) {
  return prints_bare(value) ? value : quoted(value);
}

std::string annotation_text(const ConstraintAnnotation& annotation) {
  std::string out = "--<" + annotation.category + "::" + annotation.name +
                    "::" + bare_or_quoted(annotation.value);
  if (annotation.resolved) out += "::resolved";
  out += ">--";
  return out;
}

void print_behaviour(std::ostream& out, const BehaviourBlock& block,
                     int level) {
  out << ind(level) << "behaviour is {";
  if (block.definitions.empty() && block.composition.empty()) {
    out << " }\n";
    return;
  }
  out << '\n';
  for (const auto& def : block.definitions) {
    out << ind(level + 1);
    if (def.recursive) out << "recursive ";
    out << "value " << def.name << " is abstraction(";
    for (std::size_t i = 0; i < def.parameters.size(); ++i) {
      if (i > 0) out << ", ";
      out << def.parameters[i];
    }
    out << ");";
    if (!def.statements.empty()) {
      out << " {\n";
      for (const auto& stmt : def.statements)
        out << ind(level + 2) << stmt.text << ";\n";
      out << ind(level + 1) << "};";
    }
    out << '\n';
  }
  if (!block.composition.empty()) {
    out << ind(level + 1) << "compose { ";
    for (std::size_t i = 0; i < block.composition.size(); ++i) {
      if (i > 0) out << " and ";
      out << block.composition[i] << "()";
    }
    out << " }\n";
  }
  out << ind(level) << "}\n";
}

void print_element(std::ostream& out, const ArchElement& element, int level) {
  const bool style_head = element.kind == ElementKind::Component &&
                          element.metadata.count("element-style") > 0;
  const bool archetype_prefix =
      element.metadata.count("archetype") > 0 &&
      element.metadata.at("archetype") == "true";

  out << ind(level);
  if (archetype_prefix) out << "archetype ";
  out << element.name << " is ";
  if (style_head)
    out << "style " << element.metadata.at("element-style") << " where";
  else
    out << element_kind_name(element.kind);

  // Which body lines exist decides between `{ }` and a block.
  const bool default_stateless = element.service_kind == ServiceKind::Atomic;
  const bool print_service = element.service_kind != ServiceKind::Unspecified;
  const bool print_statefulness = element.stateless != default_stateless;
  std::vector<std::pair<std::string, std::string>> metadata;
  for (const auto& [key, value] : element.metadata) {
    if (style_head && key == "element-style") continue;
    if (archetype_prefix && key == "archetype") continue;
    metadata.emplace_back(key, value);
  }
  const bool empty_body = !print_service && !print_statefulness &&
                          !element.idempotent && metadata.empty() &&
                          element.ports.empty() && !element.behaviour &&
                          element.annotations.empty();
  if (empty_body) {
    out << " { }\n";
    return;
  }

  out << " {\n";
  const int body = level + 1;
  if (print_service)
    out << ind(body) << "service is "
        << service_kind_name(element.service_kind) << '\n';
  if (print_statefulness)
    out << ind(body) << (element.stateless ? "stateless" : "stateful") << '\n';
  if (element.idempotent) out << ind(body) << "idempotent\n";
  if (!metadata.empty()) {
    out << ind(body) << "metadata is {\n";
    for (const auto& [key, value] : metadata)
      out << ind(body + 1) << bare_or_quoted(key) << " : "
          << bare_or_quoted(value) << '\n';
    out << ind(body) << "}\n";
  }
  if (!element.ports.empty()) {
    out << ind(body) << "structure is {\n";
    for (const auto& port : element.ports) {
      if (port.points.empty()) {
        out << ind(body + 1) << "port " << port.name << " { }\n";
        continue;
      }
      out << ind(body + 1) << "port " << port.name << " {\n";
      for (const auto& point : port.points)
        out << ind(body + 2) << direction_name(point.direction) << " point "
            << point.name << '\n';
      out << ind(body + 1) << "}\n";
    }
    out << ind(body) << "}\n";
  }
  if (!element.annotations.empty()) {
    out << ind(body) << "constraint is {\n";
    for (const auto& annotation : element.annotations)
      out << ind(body + 1) << annotation_text(annotation) << '\n';
    out << ind(body) << "}\n";
  }
  if (element.behaviour) print_behaviour(out, *element.behaviour, body);
  out << ind(level) << "}\n";
}

}  // namespace

std::string pretty_print(const ArchitectureModel& model) {
  std::ostringstream out;
  out << model.name << " is style " << model.style << " where {\n";
  if (model.stage != Stage::GEIM)
    out << ind(1) << "stage is " << stage_name(model.stage) << '\n';
  if (!model.elements.empty()) {
    out << ind(1) << "structure is {\n";
    for (const auto& element : model.elements)
      print_element(out, element, 2);
    out << ind(1) << "}\n";
  }
  if (!model.attachments.empty()) {
    out << ind(1) << "connection is {\n";
    for (const auto& attachment : model.attachments)
      out << ind(2) << "unify " << attachment.from.to_string() << " with "
          << attachment.to.to_string() << '\n';
    out << ind(1) << "}\n";
  }
  if (!model.annotations.empty()) {
    out << ind(1) << "constraint is {\n";
    for (const auto& annotation : model.annotations)
      out << ind(2) << annotation_text(annotation) << '\n';
    out << ind(1) << "}\n";
  }
  out << "}\n";
  return out.str();
}

std::string pretty_print(const Construct& construct) {
  std::ostringstream out;
  out << construct.name << " is " << construct_kind_keyword(construct.kind)
      << " {\n";
  if (construct.key) {
    out << ind(1) << "constraint is {\n";
    out << ind(2) << "--<" << construct.key->category << "::"
        << construct.key->name << "::" << bare_or_quoted(construct.key->value)
        << ">--\n";
    out << ind(1) << "}\n";
  }
  for (const auto& scope : construct.scopes) {
    out << ind(1) << "on " << scope.target.name << ":"
        << (scope.target.kind == ScopeTarget::Kind::Architecture
                ? "architecture"
                : "architecturalElement")
        << " actions {\n";
    for (const auto& action : scope.actions) {
      if (const auto* include = std::get_if<IncludeAction>(&action)) {
        out << ind(2) << "include ";
        std::ostringstream element;
        print_element(element, include->element, 2);
        // Splice the element text after the include keyword.
        out << element.str().substr(ind(2).size());
      } else if (const auto* replicate =
                     std::get_if<ReplicateAction>(&action)) {
        out << ind(2) << "replicate " << replicate->source << " to "
            << replicate->target << '\n';
      } else if (const auto* unify = std::get_if<UnifyAction>(&action)) {
        out << ind(2) << "unify " << unify->from.to_string() << " with "
            << unify->to.to_string() << '\n';
      } else if (const auto* remove = std::get_if<RemoveAction>(&action)) {
        out << ind(2) << "remove " << remove->element << '\n';
      } else {
        const auto& rename = std::get<RenameAction>(action);
        out << ind(2) << "rename " << rename.old_name << " to "
            << rename.new_name << '\n';
      }
    }
    out << ind(1) << "}\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace gforge
