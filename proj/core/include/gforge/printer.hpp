#pragma once

#include <string>

#include "gforge/construct.hpp"
#include "gforge/model.hpp"

namespace gforge {

/// Canonical textual form. Deterministic: equal values print to equal
/// bytes, and parse(pretty_print(x)) == x for well-formed input.
/// Layout notes: two-space indent, metadata sorted by key, resolved
/// annotations rendered with a fourth `resolved` segment, stage
/// printed only once past GEIM, defaults (statefulness, idempotence,
/// unspecified service kind) omitted.
std::string pretty_print(const ArchitectureModel& model);
std::string pretty_print(const Construct& construct);

}  // namespace gforge
