#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gforge/model.hpp"

namespace gforge {

enum class ConstructKind { QoS, Platform };

const char* construct_kind_keyword(ConstructKind k);

/// Constraint key a construct resolves. value "*" matches any value.
struct ConstraintPattern {
  Identifier category;
  Identifier name;
  std::string value;

  bool matches(const ConstraintAnnotation& annotation) const;
  bool is_wildcard() const { return value == "*"; }
  std::string to_string() const;
  bool operator==(const ConstraintPattern&) const = default;
};

struct ScopeTarget {
  enum class Kind { Architecture, Element };
  Kind kind = Kind::Architecture;
  Identifier name;

  bool operator==(const ScopeTarget&) const = default;
};

struct IncludeAction {
  ArchElement element;
  bool operator==(const IncludeAction&) const = default;
};

struct ReplicateAction {
  Identifier source;
  Identifier target;
  bool operator==(const ReplicateAction&) const = default;
};

struct UnifyAction {
  PortPath from;
  PortPath to;
  bool operator==(const UnifyAction&) const = default;
};

struct RemoveAction {
  Identifier element;
  bool operator==(const RemoveAction&) const = default;
};

struct RenameAction {
  Identifier old_name;
  Identifier new_name;
  bool operator==(const RenameAction&) const = default;
};

using RewriteAction = std::variant<IncludeAction, ReplicateAction, UnifyAction,
                                   RemoveAction, RenameAction>;

const char* action_kind_name(const RewriteAction& action);

struct Scope {
  ScopeTarget target;
  std::vector<RewriteAction> actions;

  bool operator==(const Scope&) const = default;
};

/// A reusable rewrite script. `key` is optional at parse time but a
/// library refuses to load keyless constructs.
struct Construct {
  Identifier name;
  ConstructKind kind = ConstructKind::QoS;
  std::optional<ConstraintPattern> key;
  std::vector<Scope> scopes;
  std::string provenance;  // file the construct was loaded from, "" if inline

  /// Provenance is bookkeeping, not identity.
  bool operator==(const Construct& other) const {
    return name == other.name && kind == other.kind && key == other.key &&
           scopes == other.scopes;
  }
};

std::size_t action_count(const Construct& construct);

}  // namespace gforge
