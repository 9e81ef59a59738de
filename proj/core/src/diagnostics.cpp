#include "gforge/diagnostics.hpp"

namespace gforge {

std::string SourceSpan::to_string() const {
  return file + ":" + std::to_string(start_line) + ":" +
         std::to_string(start_col);
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::LexError: return "LexError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ElaborationError: return "ElaborationError";
    case ErrorCode::UnknownActionKind: return "UnknownActionKind";
    case ErrorCode::InvalidIdentifier: return "InvalidIdentifier";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::UnknownPort: return "UnknownPort";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::UnknownPath: return "UnknownPath";
    case ErrorCode::UnknownAnnotation: return "UnknownAnnotation";
    case ErrorCode::NameCollision: return "NameCollision";
    case ErrorCode::DirectionConflict: return "DirectionConflict";
    case ErrorCode::SelfUnify: return "SelfUnify";
    case ErrorCode::DuplicateAttachment: return "DuplicateAttachment";
    case ErrorCode::ScopeTargetMissing: return "ScopeTargetMissing";
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Cancelled: return "Cancelled";
  }
  return "Error";
}

std::string Error::diagnostic() const {
  std::string out;
  if (span_) {
    out += span_->to_string();
    out += ": ";
  }
  out += "error: ";
  out += what();
  out += " [";
  out += error_code_name(code_);
  out += "]";
  return out;
}

}  // namespace gforge
