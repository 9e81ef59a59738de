#pragma once

#include <string_view>
#include <vector>

#include "gforge/token.hpp"

namespace gforge {

/// Splits source text into tokens. The returned stream carries no
/// end-of-input sentinel; empty input yields an empty vector.
///
/// Conventions worth knowing:
///  - identifiers may contain '-', so infrastructure links must be
///    written with spaced dashes: `link a -- b`;
///  - `--<` ... `>--` bracket constraint annotations;
///  - `${value}` is kept inside identifier lexemes for later
///    substitution by the rewrite engine;
///  - `...` elisions and `//` line comments are skipped.
///
/// Throws Error{LexError} with the offending span on any other
/// unexpected character.
std::vector<Token> tokenize(std::string_view source, const std::string& file);

}  // namespace gforge
