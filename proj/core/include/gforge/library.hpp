#pragma once

#include <filesystem>
#include <vector>

#include "gforge/construct.hpp"

namespace gforge {

/// Ordered collection of constructs loaded from *.gcon files.
struct Library {
  std::vector<Construct> constructs;  // lexicographic by source filename
};

/// Loads every *.gcon in `dir` (sorted by filename). All files are
/// parsed even after a failure so one aggregated Error can report
/// every bad file; keyless constructs and duplicate exact keys are
/// load errors too. Throws Error{IoError} if dir is unreadable.
Library load_library(const std::filesystem::path& dir);

/// Picks the construct for an annotation: exact value match beats
/// wildcard; ties fall to load order. Returns nullptr when nothing
/// matches.
const Construct* lookup(const Library& library,
                        const ConstraintAnnotation& annotation);

}  // namespace gforge
