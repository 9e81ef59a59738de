#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gforge/model.hpp"

namespace gforge {

/// Service granularity for manifest emission. ComplexObjects maps
/// each first-order element to its own artifact (nested children are
/// inlined as objects); Monolith folds the whole model into one
/// composite manifest.
enum class Granularity { ComplexObjects, Monolith };

struct EmittedArtifact {
  std::filesystem::path path;
  std::string content;

  bool operator==(const EmittedArtifact&) const = default;
};

/// Renders service manifests, connector descriptors and the
/// gesa-index.json (always last) for the model. Pure: nothing is
/// written; callers persist the returned artifacts. Deterministic to
/// the byte for equal models. Throws Error{NameCollision} when two
/// artifact filenames collide case-insensitively.
std::vector<EmittedArtifact> emit_manifests(const ArchitectureModel& model,
                                            Granularity granularity);

/// GraphViz dot view: components as boxes, connectors as diamonds,
/// one labelled edge per attachment, insertion order preserved.
std::string emit_graph(const ArchitectureModel& model);

/// Writes artifacts under out_dir (created if missing). Returns the
/// paths written. Throws Error{IoError} on filesystem failure.
std::vector<std::filesystem::path> write_artifacts(
    const std::vector<EmittedArtifact>& artifacts,
    const std::filesystem::path& out_dir);

}  // namespace gforge
