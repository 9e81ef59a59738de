#pragma once

#include <vector>

#include "gforge/model.hpp"

namespace gforge {

/// Gateway architectural style rules: atomic services are stateless
/// and idempotent, composite services are stateful and carry a
/// non-empty behaviour block, and a SOAScienceGateway model has at
/// least one component. Violation kinds: StatelessViolation,
/// IdempotencyViolation, StatefulnessViolation, MissingBehaviour,
/// EmptyGateway.
std::vector<Violation> check_gateway_style(const ArchitectureModel& model);

/// Every behaviour composition entry and every invocation inside a
/// definition body must name a defined abstraction of the same block.
/// Violation kind: UnknownAbstraction.
std::vector<Violation> check_behaviour_refs(const ArchElement& element);

}  // namespace gforge
