#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace gforge {

/// Half-open source location range, 1-based lines and columns.
struct SourceSpan {
  std::string file;
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;

  std::string to_string() const;
  bool operator==(const SourceSpan&) const = default;
};

enum class ErrorCode {
  LexError,
  ParseError,
  ElaborationError,
  UnknownActionKind,
  InvalidIdentifier,
  UnknownElement,
  UnknownPort,
  UnknownPoint,
  UnknownPath,
  UnknownAnnotation,
  NameCollision,
  DirectionConflict,
  SelfUnify,
  DuplicateAttachment,
  ScopeTargetMissing,
  DuplicateNode,
  UnknownNode,
  DuplicateKey,
  MissingKey,
  InvalidSpec,
  IoError,
  Cancelled,
};

const char* error_code_name(ErrorCode code);

/// Hard failure carrying a machine-readable code and, for frontend
/// errors, the source span the diagnostic points at.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message,
        std::optional<SourceSpan> span = std::nullopt)
      : std::runtime_error(std::move(message)),
        code_(code),
        span_(std::move(span)) {}

  ErrorCode code() const { return code_; }
  const std::optional<SourceSpan>& span() const { return span_; }

  /// "file:line:col: error: message" when a span is known.
  std::string diagnostic() const;

 private:
  ErrorCode code_;
  std::optional<SourceSpan> span_;
};

/// Soft finding returned by the validation passes. Checks report
/// violations as values; they never throw.
struct Violation {
  std::string kind;
  std::string subject;
  std::string message;

  bool operator==(const Violation&) const = default;
};

}  // namespace gforge
