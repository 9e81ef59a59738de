#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gforge/diagnostics.hpp"

namespace gforge {

/// Names follow [A-Za-z_][A-Za-z0-9_-]*.
using Identifier = std::string;

bool is_valid_identifier(const std::string& text);

enum class Direction { In, Out };
enum class ElementKind { Component, Connector };
enum class ServiceKind { Atomic, Composite, Unspecified };
enum class Stage { GEIM, WOVEN_QOS, WOVEN_PLATFORM };

const char* direction_name(Direction d);
const char* element_kind_name(ElementKind k);
const char* service_kind_name(ServiceKind k);
const char* stage_name(Stage s);
std::optional<Stage> parse_stage_name(const std::string& word);

struct ConnectionPoint {
  Identifier name;
  Direction direction = Direction::In;

  bool operator==(const ConnectionPoint&) const = default;
};

struct Port {
  Identifier name;
  std::vector<ConnectionPoint> points;

  const ConnectionPoint* find_point(const Identifier& point) const;
  bool operator==(const Port&) const = default;
};

/// Fully qualified connection point, e.g. portal::ComsP0::ComsOutC0.
struct PortPath {
  Identifier element;
  Identifier port;
  Identifier point;

  std::string to_string() const;
  bool operator==(const PortPath&) const = default;
  auto operator<=>(const PortPath&) const = default;
};

/// Directed wiring between an Out point and an In point.
struct Attachment {
  PortPath from;
  PortPath to;

  bool operator==(const Attachment&) const = default;
};

struct ConstraintAnnotation {
  Identifier category;
  Identifier name;
  std::string value;
  bool resolved = false;

  /// Renders the --<category::name::value>-- form.
  std::string to_string() const;
  bool operator==(const ConstraintAnnotation&) const = default;
};

/// One named abstraction inside a behaviour block. Statement bodies
/// are kept as canonical text plus the invocations referenced, which
/// is all the composition check needs.
struct BehaviourStatement {
  std::string text;
  std::vector<Identifier> invocations;

  bool operator==(const BehaviourStatement&) const = default;
};

struct AbstractionDef {
  Identifier name;
  bool recursive = false;
  std::vector<Identifier> parameters;
  std::vector<BehaviourStatement> statements;

  bool operator==(const AbstractionDef&) const = default;
};

struct BehaviourBlock {
  std::vector<AbstractionDef> definitions;
  std::vector<Identifier> composition;

  bool operator==(const BehaviourBlock&) const = default;
};

struct ArchElement {
  Identifier name;
  ElementKind kind = ElementKind::Component;
  ServiceKind service_kind = ServiceKind::Unspecified;
  bool stateless = false;
  bool idempotent = false;
  std::vector<Port> ports;
  std::optional<BehaviourBlock> behaviour;
  std::vector<ConstraintAnnotation> annotations;
  std::map<std::string, std::string> metadata;

  const Port* find_port(const Identifier& port) const;
  Port* find_port(const Identifier& port);
  bool operator==(const ArchElement&) const = default;
};

/// Annotation anchored either at the model itself (empty target) or
/// at a named element. Model-level annotations come first in
/// resolution order.
struct AnchoredAnnotation {
  Identifier target;  // empty => model-level
  ConstraintAnnotation annotation;

  bool operator==(const AnchoredAnnotation&) const = default;
};

struct ArchitectureModel {
  Identifier name;
  Identifier style;
  Stage stage = Stage::GEIM;
  std::vector<ArchElement> elements;  // insertion order is the contract
  std::vector<Attachment> attachments;
  std::vector<ConstraintAnnotation> annotations;  // model-level

  const ArchElement* find_element(const Identifier& name) const;
  ArchElement* find_element(const Identifier& name);

  /// All annotations in resolution order: model-level first, then per
  /// element in insertion order.
  std::vector<AnchoredAnnotation> anchored_annotations() const;

  bool operator==(const ArchitectureModel&) const = default;
};

/// Resolves a textual path against the model; throws Error with code
/// UnknownElement / UnknownPort / UnknownPoint on the first segment
/// that fails.
const ConnectionPoint& resolve_path(const ArchitectureModel& model,
                                    const PortPath& path);

/// Structural well-formedness: name uniqueness at every level,
/// attachment endpoints resolvable, Out->In orientation, no
/// self-attachment of a point, behaviour composition references
/// defined abstractions.
std::vector<Violation> check_well_formed(const ArchitectureModel& model);

/// Copy of the element with the rename map applied to every
/// identifier the element owns: its name, port and point names,
/// abstraction names and the invocation/composition entries that
/// reference them. Raw statement text, metadata and annotations are
/// untouched.
ArchElement rename_owned_identifiers(
    const ArchElement& element,
    const std::map<Identifier, Identifier>& rename);

/// True when b equals a-after-rename on kind, service properties,
/// port/point structure and behaviour. A clone compares equal to its
/// source under {source -> clone}. Annotations and metadata are
/// ignored — the comparison is structural.
bool structurally_isomorphic(const ArchElement& a, const ArchElement& b,
                             const std::map<Identifier, Identifier>& rename);

}  // namespace gforge
