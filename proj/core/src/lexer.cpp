#include "gforge/lexer.hpp"

#include <cctype>
#include <map>

namespace gforge {

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::KwIs: return "'is'";
    case TokenKind::KwStyle: return "'style'";
    case TokenKind::KwWhere: return "'where'";
    case TokenKind::KwStructure: return "'structure'";
    case TokenKind::KwConnection: return "'connection'";
    case TokenKind::KwConstraint: return "'constraint'";
    case TokenKind::KwBehaviour: return "'behaviour'";
    case TokenKind::KwArchetype: return "'archetype'";
    case TokenKind::KwComponent: return "'component'";
    case TokenKind::KwConnector: return "'connector'";
    case TokenKind::KwOn: return "'on'";
    case TokenKind::KwActions: return "'actions'";
    case TokenKind::KwInclude: return "'include'";
    case TokenKind::KwReplicate: return "'replicate'";
    case TokenKind::KwTo: return "'to'";
    case TokenKind::KwUnify: return "'unify'";
    case TokenKind::KwWith: return "'with'";
    case TokenKind::KwCompose: return "'compose'";
    case TokenKind::KwAnd: return "'and'";
    case TokenKind::KwRecursive: return "'recursive'";
    case TokenKind::KwValue: return "'value'";
    case TokenKind::KwAbstraction: return "'abstraction'";
    case TokenKind::KwIf: return "'if'";
    case TokenKind::KwQosProperty: return "'qualityOfServiceProperty'";
    case TokenKind::KwPlatformProperty: return "'executionPlatformProperty'";
    case TokenKind::KwInfrastructure: return "'infrastructure'";
    case TokenKind::KwNode: return "'node'";
    case TokenKind::KwLink: return "'link'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::PathSep: return "'::'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Semi: return "';'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Comma: return "','";
    case TokenKind::Assign: return "':='";
    case TokenKind::AnnotOpen: return "'--<'";
    case TokenKind::AnnotClose: return "'>--'";
    case TokenKind::DashDash: return "'--'";
    case TokenKind::Star: return "'*'";
    case TokenKind::EndOfInput: return "end of input";
  }
  return "token";
}

namespace {

const std::map<std::string, TokenKind>& keyword_table() {
  static const std::map<std::string, TokenKind> table = {
      {"is", TokenKind::KwIs},
      {"style", TokenKind::KwStyle},
      {"where", TokenKind::KwWhere},
      {"structure", TokenKind::KwStructure},
      {"connection", TokenKind::KwConnection},
      {"constraint", TokenKind::KwConstraint},
      {"behaviour", TokenKind::KwBehaviour},
      {"archetype", TokenKind::KwArchetype},
      {"component", TokenKind::KwComponent},
      {"connector", TokenKind::KwConnector},
      {"on", TokenKind::KwOn},
      {"actions", TokenKind::KwActions},
      {"include", TokenKind::KwInclude},
      {"replicate", TokenKind::KwReplicate},
      {"to", TokenKind::KwTo},
      {"unify", TokenKind::KwUnify},
      {"with", TokenKind::KwWith},
      {"compose", TokenKind::KwCompose},
      {"and", TokenKind::KwAnd},
      {"recursive", TokenKind::KwRecursive},
      {"value", TokenKind::KwValue},
      {"abstraction", TokenKind::KwAbstraction},
      {"if", TokenKind::KwIf},
      {"qualityOfServiceProperty", TokenKind::KwQosProperty},
      {"executionPlatformProperty", TokenKind::KwPlatformProperty},
      {"infrastructure", TokenKind::KwInfrastructure},
      {"node", TokenKind::KwNode},
      {"link", TokenKind::KwLink},
  };
  return table;
}

class Lexer {
 public:
  Lexer(std::string_view source, std::string file)
      : src_(source), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (at_end()) break;
      out.push_back(next_token());
    }
    return out;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  SourceSpan here() const { return {file_, line_, col_, line_, col_}; }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::LexError, message, here());
  }

  void skip_trivia() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '.' && peek(1) == '.' && peek(2) == '.') {
        // Elision marker in excerpted descriptions; not syntax.
        advance();
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token make(TokenKind kind, std::string text, SourceSpan span) {
    span.end_line = line_;
    span.end_col = col_;
    return Token{kind, std::move(text), std::move(span)};
  }

  Token next_token() {
    SourceSpan span = here();
    char c = peek();

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$')
      return lex_word(span);
    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(span);

    switch (c) {
      case '"': return lex_string(span);
      case '{': advance(); return make(TokenKind::LBrace, "{", span);
      case '}': advance(); return make(TokenKind::RBrace, "}", span);
      case '(': advance(); return make(TokenKind::LParen, "(", span);
      case ')': advance(); return make(TokenKind::RParen, ")", span);
      case ';': advance(); return make(TokenKind::Semi, ";", span);
      case '.': advance(); return make(TokenKind::Dot, ".", span);
      case ',': advance(); return make(TokenKind::Comma, ",", span);
      case '*': advance(); return make(TokenKind::Star, "*", span);
      case ':':
        advance();
        if (peek() == ':') {
          advance();
          return make(TokenKind::PathSep, "::", span);
        }
        if (peek() == '=') {
          advance();
          return make(TokenKind::Assign, ":=", span);
        }
        return make(TokenKind::Colon, ":", span);
      case '-':
        if (peek(1) == '-' && peek(2) == '<') {
          advance();
          advance();
          advance();
          return make(TokenKind::AnnotOpen, "--<", span);
        }
        if (peek(1) == '-') {
          advance();
          advance();
          return make(TokenKind::DashDash, "--", span);
        }
        fail("stray '-'; identifiers may contain '-' but cannot start with it");
      case '>':
        if (peek(1) == '-' && peek(2) == '-') {
          advance();
          advance();
          advance();
          return make(TokenKind::AnnotClose, ">--", span);
        }
        fail("stray '>'");
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }

  // Identifier, keyword, or identifier-with-${value}-placeholder.
  Token lex_word(SourceSpan span) {
    std::string text;
    for (;;) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        text += advance();
      } else if (c == '$') {
        if (src_.compare(pos_, 8, "${value}") != 0)
          fail("'$' is only valid as the ${value} placeholder");
        for (int i = 0; i < 8; ++i) text += advance();
      } else if (c == '-') {
        // A dash continues the identifier unless it opens an
        // annotation (--<) or is a standalone link dash followed by
        // another dash.
        if (peek(1) == '-' && peek(2) == '<') break;
        text += advance();
      } else {
        break;
      }
    }
    if (text.empty() || text == "-") fail("empty identifier");
    auto it = keyword_table().find(text);
    if (it != keyword_table().end()) return make(it->second, text, span);
    return make(TokenKind::Ident, text, span);
  }

  Token lex_number(SourceSpan span) {
    std::string text;
    while (std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
    if (peek() == '.' &&
        std::isdigit(static_cast<unsigned char>(peek(1)))) {
      text += advance();
      while (std::isdigit(static_cast<unsigned char>(peek())))
        text += advance();
    }
    return make(TokenKind::Number, text, span);
  }

  Token lex_string(SourceSpan span) {
    advance();  // opening quote
    std::string text;
    for (;;) {
      if (at_end()) fail("unterminated string literal");
      char c = advance();
      if (c == '"') break;
      if (c == '\n') fail("newline in string literal");
      if (c == '\\') {
        if (at_end()) fail("unterminated string literal");
        char esc = advance();
        switch (esc) {
          case '"': text += '"'; break;
          case '\\': text += '\\'; break;
          case 'n': text += '\n'; break;
          case 't': text += '\t'; break;
          default: fail(std::string("unknown escape '\\") + esc + "'");
        }
      } else {
        text += c;
      }
    }
    return make(TokenKind::String, text, span);
  }

  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, const std::string& file) {
  return Lexer(source, file).run();
}

}  // namespace gforge
