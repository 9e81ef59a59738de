#include "gforge/rewrite.hpp"

#include <algorithm>
#include <sstream>

namespace gforge {

namespace {

void replace_placeholder(std::string& text, const std::string& value) {
  for (std::size_t at = text.find("${value}"); at != std::string::npos;
       at = text.find("${value}", at + value.size()))
    text.replace(at, 8, value);
}

void substitute_element(ArchElement& element, const std::string& value) {
  replace_placeholder(element.name, value);
  for (auto& port : element.ports) {
    replace_placeholder(port.name, value);
    for (auto& point : port.points) replace_placeholder(point.name, value);
  }
  for (auto& annotation : element.annotations) {
    replace_placeholder(annotation.category, value);
    replace_placeholder(annotation.name, value);
    replace_placeholder(annotation.value, value);
  }
  std::map<std::string, std::string> metadata;
  for (const auto& [key, entry] : element.metadata) {
    std::string new_key = key;
    std::string new_entry = entry;
    replace_placeholder(new_key, value);
    replace_placeholder(new_entry, value);
    metadata[new_key] = new_entry;
  }
  element.metadata = std::move(metadata);
  if (element.behaviour) {
    for (auto& def : element.behaviour->definitions) {
      replace_placeholder(def.name, value);
      for (auto& param : def.parameters) replace_placeholder(param, value);
      for (auto& stmt : def.statements) {
        replace_placeholder(stmt.text, value);
        for (auto& invocation : stmt.invocations)
          replace_placeholder(invocation, value);
      }
    }
    for (auto& entry : element.behaviour->composition)
      replace_placeholder(entry, value);
  }
}

void substitute_path(PortPath& path, const std::string& value) {
  replace_placeholder(path.element, value);
  replace_placeholder(path.port, value);
  replace_placeholder(path.point, value);
}

Construct substitute_placeholders(const Construct& construct,
                                  const std::string& value) {
  Construct out = construct;
  for (auto& scope : out.scopes) {
    replace_placeholder(scope.target.name, value);
    for (auto& action : scope.actions) {
      if (auto* include = std::get_if<IncludeAction>(&action)) {
        substitute_element(include->element, value);
      } else if (auto* replicate = std::get_if<ReplicateAction>(&action)) {
        replace_placeholder(replicate->source, value);
        replace_placeholder(replicate->target, value);
      } else if (auto* unify = std::get_if<UnifyAction>(&action)) {
        substitute_path(unify->from, value);
        substitute_path(unify->to, value);
      } else if (auto* remove = std::get_if<RemoveAction>(&action)) {
        replace_placeholder(remove->element, value);
      } else if (auto* rename = std::get_if<RenameAction>(&action)) {
        replace_placeholder(rename->old_name, value);
        replace_placeholder(rename->new_name, value);
      }
    }
  }
  return out;
}

void require_identifier(const Identifier& name, const std::string& role) {
  if (!is_valid_identifier(name))
    throw Error(ErrorCode::InvalidIdentifier,
                role + " '" + name + "' is not a valid identifier");
}

void validate_included_element(const ArchElement& element) {
  require_identifier(element.name, "included element name");
  for (const auto& port : element.ports) {
    require_identifier(port.name, "port name");
    for (const auto& point : port.points)
      require_identifier(point.name, "connection point name");
  }
  if (element.behaviour)
    for (const auto& def : element.behaviour->definitions)
      require_identifier(def.name, "abstraction name");
}

void apply_include(ArchitectureModel& model, const IncludeAction& action) {
  validate_included_element(action.element);
  if (model.find_element(action.element.name))
    throw Error(ErrorCode::NameCollision,
                "include would redefine element '" + action.element.name +
                    "'");
  model.elements.push_back(action.element);
}

void apply_replicate(ArchitectureModel& model, const ReplicateAction& action) {
  ArchElement* source = model.find_element(action.source);
  if (!source)
    throw Error(ErrorCode::UnknownElement,
                "replicate source '" + action.source + "' does not exist");
  require_identifier(action.target, "replicate target");
  if (model.find_element(action.target))
    throw Error(ErrorCode::NameCollision,
                "replicate target '" + action.target + "' already exists");

  // Clone and source share a replica group; annotations stay behind
  // so the clone cannot re-trigger the construct that created it.
  const auto group_it = source->metadata.find("replica-group");
  const std::string group =
      group_it == source->metadata.end() ? source->name : group_it->second;
  source->metadata["replica-group"] = group;

  // Owned identifiers that repeat the source name follow the clone's
  // name, which keeps clone and source structurally isomorphic.
  ArchElement clone =
      rename_owned_identifiers(*source, {{action.source, action.target}});
  clone.annotations.clear();
  model.elements.push_back(std::move(clone));
}

Attachment normalized_attachment(const ArchitectureModel& model,
                                 const UnifyAction& action) {
  if (action.from == action.to)
    throw Error(ErrorCode::SelfUnify,
                "cannot unify " + action.from.to_string() + " with itself");
  const ConnectionPoint& from = resolve_path(model, action.from);
  const ConnectionPoint& to = resolve_path(model, action.to);
  if (from.direction == to.direction)
    throw Error(ErrorCode::DirectionConflict,
                "unify needs one out point and one in point, got two " +
                    std::string(direction_name(from.direction)) +
                    " points (" + action.from.to_string() + ", " +
                    action.to.to_string() + ")");
  Attachment attachment{action.from, action.to};
  if (from.direction == Direction::In) std::swap(attachment.from, attachment.to);
  return attachment;
}

void apply_unify(ArchitectureModel& model, const UnifyAction& action) {
  Attachment attachment = normalized_attachment(model, action);
  if (std::find(model.attachments.begin(), model.attachments.end(),
                attachment) != model.attachments.end())
    throw Error(ErrorCode::DuplicateAttachment,
                "attachment " + attachment.from.to_string() + " -> " +
                    attachment.to.to_string() + " already exists");
  model.attachments.push_back(std::move(attachment));
}

void apply_remove(ArchitectureModel& model, const RemoveAction& action) {
  if (!model.find_element(action.element))
    throw Error(ErrorCode::UnknownElement,
                "remove target '" + action.element + "' does not exist");
  model.elements.erase(
      std::remove_if(model.elements.begin(), model.elements.end(),
                     [&](const ArchElement& e) {
                       return e.name == action.element;
                     }),
      model.elements.end());
  model.attachments.erase(
      std::remove_if(model.attachments.begin(), model.attachments.end(),
                     [&](const Attachment& a) {
                       return a.from.element == action.element ||
                              a.to.element == action.element;
                     }),
      model.attachments.end());
}

void apply_rename(ArchitectureModel& model, const RenameAction& action) {
  if (!model.find_element(action.old_name))
    throw Error(ErrorCode::UnknownElement,
                "rename target '" + action.old_name + "' does not exist");
  require_identifier(action.new_name, "rename target");
  if (model.find_element(action.new_name))
    throw Error(ErrorCode::NameCollision,
                "rename to '" + action.new_name +
                    "' collides with an existing element");
  for (auto& element : model.elements) {
    if (element.name == action.old_name) element.name = action.new_name;
    for (const char* key : {"parent", "replica-group"}) {
      auto it = element.metadata.find(key);
      if (it != element.metadata.end() && it->second == action.old_name)
        it->second = action.new_name;
    }
  }
  for (auto& attachment : model.attachments) {
    if (attachment.from.element == action.old_name)
      attachment.from.element = action.new_name;
    if (attachment.to.element == action.old_name)
      attachment.to.element = action.new_name;
  }
}

int stage_rank(Stage stage) {
  switch (stage) {
    case Stage::GEIM: return 0;
    case Stage::WOVEN_QOS: return 1;
    case Stage::WOVEN_PLATFORM: return 2;
  }
  return 0;
}

void advance_stage(ArchitectureModel& model, ConstructKind kind) {
  const Stage reached = kind == ConstructKind::QoS ? Stage::WOVEN_QOS
                                                   : Stage::WOVEN_PLATFORM;
  if (stage_rank(reached) > stage_rank(model.stage)) model.stage = reached;
}

bool stage_admits(WeaveStage stage, ConstructKind kind) {
  switch (stage) {
    case WeaveStage::QoSOnly: return kind == ConstructKind::QoS;
    case WeaveStage::PlatformOnly: return kind == ConstructKind::Platform;
    case WeaveStage::All: return true;
  }
  return false;
}

}  // namespace

ModelSummary summarize(const ArchitectureModel& model) {
  ModelSummary summary;
  summary.elements = model.elements.size();
  summary.attachments = model.attachments.size();
  for (const auto& anchored : model.anchored_annotations())
    if (!anchored.annotation.resolved) ++summary.unresolved_annotations;
  return summary;
}

void apply_action(ArchitectureModel& model, const RewriteAction& action,
                  const ScopeTarget& scope) {
  if (scope.kind == ScopeTarget::Kind::Element &&
      !model.find_element(scope.name))
    throw Error(ErrorCode::ScopeTargetMissing,
                "scope target '" + scope.name + "' does not exist");
  if (const auto* include = std::get_if<IncludeAction>(&action))
    apply_include(model, *include);
  else if (const auto* replicate = std::get_if<ReplicateAction>(&action))
    apply_replicate(model, *replicate);
  else if (const auto* unify = std::get_if<UnifyAction>(&action))
    apply_unify(model, *unify);
  else if (const auto* remove = std::get_if<RemoveAction>(&action))
    apply_remove(model, *remove);
  else
    apply_rename(model, std::get<RenameAction>(action));
}

ArchitectureModel apply_construct(const ArchitectureModel& model,
                                  const Construct& construct,
                                  const Identifier& target,
                                  const ConstraintAnnotation& annotation) {
  ArchitectureModel working = model;

  // Find and mark the anchor annotation up front; a construct that
  // cannot name its trigger has nothing to resolve.
  ConstraintAnnotation* anchor = nullptr;
  if (target.empty()) {
    for (auto& candidate : working.annotations)
      if (!candidate.resolved && candidate == annotation) anchor = &candidate;
  } else {
    ArchElement* element = working.find_element(target);
    if (element)
      for (auto& candidate : element->annotations)
        if (!candidate.resolved && candidate == annotation)
          anchor = &candidate;
  }
  if (!anchor)
    throw Error(ErrorCode::UnknownAnnotation,
                "construct '" + construct.name +
                    "' has no unresolved annotation " +
                    annotation.to_string() +
                    (target.empty() ? " at model level"
                                    : " on element '" + target + "'"));
  anchor->resolved = true;

  const Construct script =
      substitute_placeholders(construct, annotation.value);
  for (const auto& scope : script.scopes) {
    for (std::size_t i = 0; i < scope.actions.size(); ++i) {
      RewriteAction action = scope.actions[i];
      if (auto* include = std::get_if<IncludeAction>(&action))
        include->element.metadata["origin-construct"] = construct.name;
      try {
        apply_action(working, action, scope.target);
      } catch (const Error& e) {
        throw Error(e.code(),
                    "construct '" + construct.name + "', scope on '" +
                        scope.target.name + "', action " + std::to_string(i) +
                        " (" + action_kind_name(action) + "): " + e.what(),
                    e.span());
      }
    }
  }
  return working;
}

std::vector<ResolutionEntry> resolve_constraints(
    const ArchitectureModel& model, const Library& library, WeaveStage stage) {
  std::vector<ResolutionEntry> plan;
  for (const auto& anchored : model.anchored_annotations()) {
    if (anchored.annotation.resolved) continue;
    const Construct* construct = lookup(library, anchored.annotation);
    if (construct && !stage_admits(stage, construct->kind))
      continue;  // another pass's business, neither matched nor missed
    plan.push_back({anchored.target, anchored.annotation, construct});
  }
  return plan;
}

namespace {

struct PassResult {
  std::vector<AppliedConstruct> applied;
  std::optional<std::string> error;
};

PassResult run_pass(ArchitectureModel& working, const Library& library,
                    WeaveStage stage) {
  PassResult result;
  const auto plan = resolve_constraints(working, library, stage);
  for (const auto& entry : plan) {
    if (!entry.construct) continue;  // reported from the final model
    try {
      working = apply_construct(working, *entry.construct, entry.target,
                                entry.annotation);
    } catch (const Error& e) {
      result.error = e.diagnostic();
      return result;
    }
    advance_stage(working, entry.construct->kind);
    result.applied.push_back({entry.construct->name, entry.target,
                              entry.annotation,
                              action_count(*entry.construct)});
  }
  return result;
}

}  // namespace

ArchitectureModel weave(const ArchitectureModel& model, const Library& library,
                        WeaveStage stage, WeaveReport& report) {
  report = WeaveReport{};
  report.before = summarize(model);
  ArchitectureModel working = model;

  // All = the QoS pass followed by the platform pass, so platform
  // scripts see the QoS-rewritten model.
  const std::vector<WeaveStage> phases =
      stage == WeaveStage::All
          ? std::vector<WeaveStage>{WeaveStage::QoSOnly,
                                    WeaveStage::PlatformOnly}
          : std::vector<WeaveStage>{stage};
  for (const WeaveStage phase : phases) {
    PassResult result = run_pass(working, library, phase);
    report.applied.insert(report.applied.end(), result.applied.begin(),
                          result.applied.end());
    if (result.error) {
      report.error = result.error;
      break;
    }
  }

  for (const auto& anchored : working.anchored_annotations())
    if (!anchored.annotation.resolved &&
        lookup(library, anchored.annotation) == nullptr)
      report.unmatched.push_back({anchored.target, anchored.annotation});

  report.after = summarize(working);
  if (!report.error) report.violations = check_refinement(model, working);
  return working;
}

std::vector<Violation> check_refinement(const ArchitectureModel& before,
                                        const ArchitectureModel& after) {
  std::vector<Violation> out;

  for (const auto& element : before.elements) {
    const ArchElement* successor = after.find_element(element.name);
    if (!successor) {
      out.push_back({"MissingElement", element.name,
                     "element '" + element.name +
                         "' is missing from the woven model"});
      continue;
    }
    for (const auto& port : element.ports) {
      const Port* port_after = successor->find_port(port.name);
      if (!port_after) {
        out.push_back({"MissingPort", element.name + "::" + port.name,
                       "port disappeared during weaving"});
        continue;
      }
      for (const auto& point : port.points) {
        const ConnectionPoint* point_after = port_after->find_point(point.name);
        if (!point_after)
          out.push_back({"MissingPoint",
                         element.name + "::" + port.name + "::" + point.name,
                         "connection point disappeared during weaving"});
        else if (point_after->direction != point.direction)
          out.push_back({"DirectionChanged",
                         element.name + "::" + port.name + "::" + point.name,
                         "connection point flipped direction during weaving"});
      }
    }
  }

  for (const auto& attachment : before.attachments) {
    if (std::find(after.attachments.begin(), after.attachments.end(),
                  attachment) == after.attachments.end())
      out.push_back({"MissingAttachment",
                     attachment.from.to_string() + " -> " +
                         attachment.to.to_string(),
                     "attachment is missing from the woven model"});
  }

  // Resolved annotations cannot appear out of thin air.
  auto existed_before = [&](const Identifier& target,
                            const ConstraintAnnotation& annotation) {
    for (const auto& anchored : before.anchored_annotations()) {
      if (anchored.target != target) continue;
      const auto& prior = anchored.annotation;
      if (prior.category == annotation.category &&
          prior.name == annotation.name && prior.value == annotation.value)
        return true;
    }
    return false;
  };
  for (const auto& anchored : after.anchored_annotations())
    if (anchored.annotation.resolved &&
        !existed_before(anchored.target, anchored.annotation))
      out.push_back({"PhantomResolution", anchored.annotation.to_string(),
                     "resolved annotation did not exist before weaving"});

  for (auto& violation : check_well_formed(after)) out.push_back(violation);
  return out;
}

std::string report_text(const WeaveReport& report) {
  std::ostringstream out;
  out << "status = " << (report.error ? "error" : "ok") << '\n';
  out << "before.elements = " << report.before.elements << '\n';
  out << "before.attachments = " << report.before.attachments << '\n';
  out << "before.unresolved = " << report.before.unresolved_annotations
      << '\n';
  out << "after.elements = " << report.after.elements << '\n';
  out << "after.attachments = " << report.after.attachments << '\n';
  out << "after.unresolved = " << report.after.unresolved_annotations << '\n';
  out << "applied.count = " << report.applied.size() << '\n';
  for (std::size_t i = 0; i < report.applied.size(); ++i) {
    const auto& applied = report.applied[i];
    out << "applied." << i << " = " << applied.construct << " target="
        << (applied.target.empty() ? "<model>" : applied.target)
        << " annotation=" << applied.annotation.category
        << "::" << applied.annotation.name << "::" << applied.annotation.value
        << " actions=" << applied.actions << '\n';
  }
  out << "unmatched.count = " << report.unmatched.size() << '\n';
  for (std::size_t i = 0; i < report.unmatched.size(); ++i) {
    const auto& unmatched = report.unmatched[i];
    out << "unmatched." << i << " = "
        << (unmatched.target.empty() ? "<model>" : unmatched.target) << " "
        << unmatched.annotation.to_string() << '\n';
  }
  out << "violations.count = " << report.violations.size() << '\n';
  for (std::size_t i = 0; i < report.violations.size(); ++i) {
    const auto& violation = report.violations[i];
    out << "violations." << i << " = " << violation.kind << " "
        << violation.subject << ": " << violation.message << '\n';
  }
  if (report.error) out << "error = " << *report.error << '\n';
  return out.str();
}

}  // namespace gforge
