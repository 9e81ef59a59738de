#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gforge/construct.hpp"
#include "gforge/library.hpp"
#include "gforge/model.hpp"

namespace gforge {

/// Which constraint categories a weave pass resolves.
enum class WeaveStage { QoSOnly, PlatformOnly, All };

/// One constraint that found no construct in the library.
struct UnmatchedConstraint {
  Identifier target;  // empty => model-level
  ConstraintAnnotation annotation;

  bool operator==(const UnmatchedConstraint&) const = default;
};

struct AppliedConstruct {
  Identifier construct;
  Identifier target;  // annotation anchor ("" => model-level)
  ConstraintAnnotation annotation;
  std::size_t actions = 0;

  bool operator==(const AppliedConstruct&) const = default;
};

struct ModelSummary {
  std::size_t elements = 0;
  std::size_t attachments = 0;
  std::size_t unresolved_annotations = 0;

  bool operator==(const ModelSummary&) const = default;
};

ModelSummary summarize(const ArchitectureModel& model);

/// Outcome of a weave pass. `error` is set when a construct failed to
/// apply; `model` then still holds the last good state (the pass is
/// transactional per construct).
struct WeaveReport {
  std::vector<AppliedConstruct> applied;
  std::vector<UnmatchedConstraint> unmatched;
  std::vector<Violation> violations;  // refinement-contract findings
  ModelSummary before;
  ModelSummary after;
  std::optional<std::string> error;

  bool ok() const { return !error.has_value() && violations.empty(); }
};

/// Renders the report as stable `key = value` lines (one applied /
/// unmatched entry per line) suitable for --report files.
std::string report_text(const WeaveReport& report);

/// One unresolved annotation paired with the construct the library
/// resolves it to, or nullptr when the library has no match.
struct ResolutionEntry {
  Identifier target;  // "" => model-level anchor
  ConstraintAnnotation annotation;
  const Construct* construct = nullptr;
};

/// The resolution plan: every unresolved annotation in declaration
/// order (model-level first, then per element). Entries matched by a
/// construct outside the stage filter are omitted; entries with no
/// match at all are kept with construct == nullptr. Pointers borrow
/// from `library`.
std::vector<ResolutionEntry> resolve_constraints(
    const ArchitectureModel& model, const Library& library, WeaveStage stage);

/// Applies one action to the model in place. `scope` provides the
/// element target for element-scoped scripts. Throws Error on any
/// failed precondition; callers that need atomicity apply to a copy.
void apply_action(ArchitectureModel& model, const RewriteAction& action,
                  const ScopeTarget& scope);

/// Applies a whole construct transactionally: on success returns the
/// rewritten model with `annotation` (anchored at `target`) marked
/// resolved and included elements tagged origin-construct; on failure
/// throws and leaves no trace. `value` replaces ${value} placeholders
/// and is normally annotation.value.
ArchitectureModel apply_construct(const ArchitectureModel& model,
                                  const Construct& construct,
                                  const Identifier& target,
                                  const ConstraintAnnotation& annotation);

/// One resolution pass: walks unresolved annotations in resolution
/// order, applying the library construct for each (stage filter by
/// construct kind). Returns the report; report.error set on apply
/// failure (model in report untouched by the failed construct).
ArchitectureModel weave(const ArchitectureModel& model, const Library& library,
                        WeaveStage stage, WeaveReport& report);

/// Refinement contract between a model and its woven successor:
/// prior elements keep their port structure, prior attachments
/// survive, resolved annotations existed before, result well-formed.
std::vector<Violation> check_refinement(const ArchitectureModel& before,
                                        const ArchitectureModel& after);

}  // namespace gforge
