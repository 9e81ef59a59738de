#pragma once

#include <string>
#include <vector>

#include "gforge/diagnostics.hpp"

namespace gforge {

enum class TokenKind {
  Ident,
  Number,
  String,
  // Keywords. Words with grammatical meaning only in specific
  // positions (port, in, out, point, atomic, ...) stay Ident and are
  // matched by spelling in the parser.
  KwIs,
  KwStyle,
  KwWhere,
  KwStructure,
  KwConnection,
  KwConstraint,
  KwBehaviour,
  KwArchetype,
  KwComponent,
  KwConnector,
  KwOn,
  KwActions,
  KwInclude,
  KwReplicate,
  KwTo,
  KwUnify,
  KwWith,
  KwCompose,
  KwAnd,
  KwRecursive,
  KwValue,
  KwAbstraction,
  KwIf,
  KwQosProperty,       // qualityOfServiceProperty
  KwPlatformProperty,  // executionPlatformProperty
  KwInfrastructure,
  KwNode,
  KwLink,
  // Punctuation.
  LBrace,
  RBrace,
  LParen,
  RParen,
  PathSep,  // ::
  Colon,
  Semi,
  Dot,
  Comma,
  Assign,     // :=
  AnnotOpen,  // --<
  AnnotClose, // >--
  DashDash,   // -- (infrastructure links)
  Star,
  EndOfInput,
};

const char* token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::EndOfInput;
  /// Keyword/punctuation spelling, identifier name, number lexeme, or
  /// decoded string value.
  std::string text;
  SourceSpan span;

  bool operator==(const Token&) const = default;
};

}  // namespace gforge
