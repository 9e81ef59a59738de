#include "gforge/parser.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gforge/lexer.hpp"

namespace gforge {

namespace {

// ---------------------------------------------------------------------------
// Syntax
// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::string file)
      : tokens_(tokens), file_(std::move(file)) {
    eof_.kind = TokenKind::EndOfInput;
    eof_.text = "";
    eof_.span = tokens_.empty() ? SourceSpan{file_, 1, 1, 1, 1}
                                : tokens_.back().span;
  }

  AstNode parse_model() {
    AstNode model = parse_model_decl();
    expect_end();
    return model;
  }

  AstNode parse_construct() {
    AstNode construct = parse_construct_decl();
    expect_end();
    return construct;
  }

  AstNode parse_infrastructure() {
    AstNode infra = parse_infrastructure_decl();
    expect_end();
    return infra;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : eof_;
  }

  bool at(TokenKind kind) const { return peek().kind == kind; }

  bool at_word(const char* word) const {
    return at(TokenKind::Ident) && peek().text == word;
  }

  const Token& advance() {
    const Token& tok = peek();
    if (pos_ < tokens_.size()) ++pos_;
    return tok;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::ParseError, message, peek().span);
  }

  const Token& expect(TokenKind kind, const char* context) {
    if (!at(kind))
      fail(std::string("expected ") + token_kind_name(kind) + " " + context +
           ", found " + token_kind_name(peek().kind) +
           (peek().text.empty() ? "" : " '" + peek().text + "'"));
    return advance();
  }

  void expect_word(const char* word, const char* context) {
    if (!at_word(word))
      fail(std::string("expected '") + word + "' " + context + ", found " +
           token_kind_name(peek().kind) +
           (peek().text.empty() ? "" : " '" + peek().text + "'"));
    advance();
  }

  void expect_end() {
    if (!at(TokenKind::EndOfInput))
      fail("trailing input after closing '}'");
  }

  std::string expect_name(const char* context) {
    return expect(TokenKind::Ident, context).text;
  }

  // --- shared pieces -------------------------------------------------------

  // element::port::point
  void parse_path_into(AstNode& node, const char* context) {
    node.attrs.push_back(expect_name(context));
    expect(TokenKind::PathSep, context);
    node.attrs.push_back(expect_name(context));
    expect(TokenKind::PathSep, context);
    node.attrs.push_back(expect_name(context));
  }

  AstNode parse_unify(AstNode::Kind kind) {
    AstNode node;
    node.kind = kind;
    node.span = peek().span;
    expect(TokenKind::KwUnify, "to begin a connection");
    parse_path_into(node, "in unify path");
    expect(TokenKind::KwWith, "between unify paths");
    parse_path_into(node, "in unify path");
    return node;
  }

  // --<category::name::value>-- with optional ::resolved marker.
  AstNode parse_annotation() {
    AstNode node;
    node.kind = AstNode::Kind::Annotation;
    node.span = peek().span;
    expect(TokenKind::AnnotOpen, "to begin an annotation");
    node.attrs.push_back(expect_name("as annotation category"));
    expect(TokenKind::PathSep, "in annotation");
    node.attrs.push_back(expect_name("as annotation name"));
    expect(TokenKind::PathSep, "in annotation");
    node.attrs.push_back(parse_annotation_value());
    if (at(TokenKind::PathSep)) {
      advance();
      expect_word("resolved", "after fourth annotation separator");
      node.attrs.push_back("resolved");
    } else {
      node.attrs.push_back("");
    }
    expect(TokenKind::AnnotClose, "to close the annotation");
    return node;
  }

  std::string parse_annotation_value() {
    if (at(TokenKind::Ident) || at(TokenKind::Number) || at(TokenKind::String))
      return advance().text;
    if (at(TokenKind::Star)) {
      advance();
      return "*";
    }
    fail("expected annotation value (identifier, number, string or '*')");
  }

  // key : value entries, comma/semicolon separators optional.
  void parse_kv_entries(AstNode& parent, AstNode::Kind entry_kind) {
    while (!at(TokenKind::RBrace) && !at(TokenKind::EndOfInput)) {
      AstNode entry;
      entry.kind = entry_kind;
      entry.span = peek().span;
      if (at(TokenKind::Ident) || at(TokenKind::String))
        entry.attrs.push_back(advance().text);
      else
        fail("expected metadata key");
      expect(TokenKind::Colon, "after metadata key");
      if (at(TokenKind::Ident) || at(TokenKind::String) ||
          at(TokenKind::Number))
        entry.attrs.push_back(advance().text);
      else
        fail("expected metadata value");
      parent.children.push_back(std::move(entry));
      if (at(TokenKind::Comma) || at(TokenKind::Semi)) advance();
    }
  }

  // --- model ---------------------------------------------------------------

  AstNode parse_model_decl() {
    AstNode model;
    model.kind = AstNode::Kind::Model;
    model.span = peek().span;
    model.attrs.push_back(expect_name("as model name"));
    expect(TokenKind::KwIs, "after model name");
    expect(TokenKind::KwStyle, "after 'is'");
    model.attrs.push_back(expect_name("as style name"));
    expect(TokenKind::KwWhere, "after style name");
    expect(TokenKind::LBrace, "to open the model body");
    while (!at(TokenKind::RBrace)) {
      if (at(TokenKind::Semi)) {
        advance();
      } else if (at_word("stage")) {
        AstNode stage;
        stage.kind = AstNode::Kind::StageDecl;
        stage.span = peek().span;
        advance();
        expect(TokenKind::KwIs, "after 'stage'");
        stage.attrs.push_back(expect_name("as stage"));
        model.children.push_back(std::move(stage));
      } else if (at(TokenKind::KwStructure) || at(TokenKind::KwConnection) ||
                 at(TokenKind::KwConstraint)) {
        model.children.push_back(parse_model_section());
      } else if (at(TokenKind::KwBehaviour)) {
        fail("behaviour sections belong to elements, not the model");
      } else {
        fail("expected structure/connection/constraint section or stage");
      }
    }
    expect(TokenKind::RBrace, "to close the model body");
    return model;
  }

  AstNode parse_model_section() {
    AstNode section;
    section.kind = AstNode::Kind::Section;
    section.span = peek().span;
    const TokenKind kind = peek().kind;
    section.attrs.push_back(advance().text);
    expect(TokenKind::KwIs, "after section keyword");
    expect(TokenKind::LBrace, "to open the section");
    while (!at(TokenKind::RBrace)) {
      switch (kind) {
        case TokenKind::KwStructure:
          section.children.push_back(parse_element());
          break;
        case TokenKind::KwConnection:
          section.children.push_back(parse_unify(AstNode::Kind::Attachment));
          break;
        case TokenKind::KwConstraint:
          section.children.push_back(parse_annotation());
          break;
        default:
          fail("unreachable section kind");
      }
      if (at(TokenKind::Semi) || at(TokenKind::Comma)) advance();
    }
    expect(TokenKind::RBrace, "to close the section");
    return section;
  }

  // name is component|connector|style S [where] { body }
  AstNode parse_element() {
    AstNode element;
    element.kind = AstNode::Kind::Element;
    element.span = peek().span;
    bool archetype = false;
    if (at(TokenKind::KwArchetype)) {
      advance();
      archetype = true;
    }
    element.attrs.push_back(expect_name("as element name"));
    expect(TokenKind::KwIs, "after element name");
    std::string head;
    std::string style_name;
    if (at(TokenKind::KwComponent)) {
      advance();
      head = "component";
    } else if (at(TokenKind::KwConnector)) {
      advance();
      head = "connector";
    } else if (at(TokenKind::KwStyle)) {
      advance();
      head = "style";
      style_name = expect_name("as element style name");
    } else {
      fail("expected 'component', 'connector' or 'style <name>'");
    }
    element.attrs.push_back(head);
    element.attrs.push_back(style_name);
    element.attrs.push_back(archetype ? "archetype" : "");
    if (at(TokenKind::KwWhere)) advance();
    if (at(TokenKind::LBrace)) {
      advance();
      while (!at(TokenKind::RBrace)) {
        if (at(TokenKind::Semi)) {
          advance();
          continue;
        }
        element.children.push_back(parse_element_item());
      }
      expect(TokenKind::RBrace, "to close the element body");
    }
    return element;
  }

  AstNode parse_element_item() {
    if (at_word("service")) {
      AstNode prop;
      prop.kind = AstNode::Kind::Property;
      prop.span = peek().span;
      advance();
      expect(TokenKind::KwIs, "after 'service'");
      prop.attrs = {"service", expect_name("as service kind")};
      return prop;
    }
    if (at_word("stateless") || at_word("stateful") || at_word("idempotent")) {
      AstNode prop;
      prop.kind = AstNode::Kind::Property;
      prop.span = peek().span;
      prop.attrs = {advance().text, ""};
      return prop;
    }
    if (at_word("metadata")) {
      AstNode section;
      section.kind = AstNode::Kind::Section;
      section.span = peek().span;
      section.attrs.push_back(advance().text);
      expect(TokenKind::KwIs, "after 'metadata'");
      expect(TokenKind::LBrace, "to open the metadata section");
      parse_kv_entries(section, AstNode::Kind::MetadataEntry);
      expect(TokenKind::RBrace, "to close the metadata section");
      return section;
    }
    if (at_word("port")) return parse_port_decl();
    if (at(TokenKind::KwStructure)) {
      AstNode section;
      section.kind = AstNode::Kind::Section;
      section.span = peek().span;
      section.attrs.push_back(advance().text);
      expect(TokenKind::KwIs, "after 'structure'");
      expect(TokenKind::LBrace, "to open the structure section");
      while (!at(TokenKind::RBrace)) {
        if (at(TokenKind::Semi)) {
          advance();
          continue;
        }
        if (at_word("port"))
          section.children.push_back(parse_port_decl());
        else
          section.children.push_back(parse_element());
      }
      expect(TokenKind::RBrace, "to close the structure section");
      return section;
    }
    if (at(TokenKind::KwConnection)) {
      AstNode section;
      section.kind = AstNode::Kind::Section;
      section.span = peek().span;
      section.attrs.push_back(advance().text);
      expect(TokenKind::KwIs, "after 'connection'");
      expect(TokenKind::LBrace, "to open the connection section");
      while (!at(TokenKind::RBrace)) {
        section.children.push_back(parse_unify(AstNode::Kind::Attachment));
        if (at(TokenKind::Semi) || at(TokenKind::Comma)) advance();
      }
      expect(TokenKind::RBrace, "to close the connection section");
      return section;
    }
    if (at(TokenKind::KwConstraint)) {
      AstNode section;
      section.kind = AstNode::Kind::Section;
      section.span = peek().span;
      section.attrs.push_back(advance().text);
      expect(TokenKind::KwIs, "after 'constraint'");
      expect(TokenKind::LBrace, "to open the constraint section");
      while (!at(TokenKind::RBrace)) {
        section.children.push_back(parse_annotation());
        if (at(TokenKind::Semi) || at(TokenKind::Comma)) advance();
      }
      expect(TokenKind::RBrace, "to close the constraint section");
      return section;
    }
    if (at(TokenKind::KwBehaviour)) return parse_behaviour();
    fail("expected element property, section, port or behaviour");
  }

  AstNode parse_port_decl() {
    AstNode port;
    port.kind = AstNode::Kind::PortDecl;
    port.span = peek().span;
    expect_word("port", "to begin a port");
    port.attrs.push_back(expect_name("as port name"));
    expect(TokenKind::LBrace, "to open the port body");
    while (!at(TokenKind::RBrace)) {
      AstNode point;
      point.kind = AstNode::Kind::PointDecl;
      point.span = peek().span;
      std::string direction;
      if (at_word("in") || at_word("out"))
        direction = advance().text;
      else
        fail("expected 'in point' or 'out point'");
      expect_word("point", "after connection point direction");
      point.attrs = {expect_name("as connection point name"), direction};
      port.children.push_back(std::move(point));
      if (at(TokenKind::Comma) || at(TokenKind::Semi)) advance();
    }
    expect(TokenKind::RBrace, "to close the port body");
    return port;
  }

  // --- behaviour -----------------------------------------------------------

  AstNode parse_behaviour() {
    AstNode behaviour;
    behaviour.kind = AstNode::Kind::Behaviour;
    behaviour.span = peek().span;
    expect(TokenKind::KwBehaviour, "to begin a behaviour block");
    expect(TokenKind::KwIs, "after 'behaviour'");
    expect(TokenKind::LBrace, "to open the behaviour block");
    while (!at(TokenKind::RBrace)) {
      if (at(TokenKind::Semi)) {
        advance();
        continue;
      }
      if (at(TokenKind::KwCompose))
        behaviour.children.push_back(parse_compose());
      else
        behaviour.children.push_back(parse_abstraction_def());
    }
    expect(TokenKind::RBrace, "to close the behaviour block");
    return behaviour;
  }

  // [recursive] value NAME is abstraction(params); [{ statements };]
  AstNode parse_abstraction_def() {
    AstNode def;
    def.kind = AstNode::Kind::AbstractionDef;
    def.span = peek().span;
    bool recursive = false;
    if (at(TokenKind::KwRecursive)) {
      advance();
      recursive = true;
    }
    expect(TokenKind::KwValue, "to begin an abstraction definition");
    def.attrs.push_back(expect_name("as abstraction name"));
    def.attrs.push_back(recursive ? "recursive" : "");
    expect(TokenKind::KwIs, "after abstraction name");
    expect(TokenKind::KwAbstraction, "after 'is'");
    expect(TokenKind::LParen, "to open the parameter list");
    while (!at(TokenKind::RParen)) {
      def.attrs.push_back(expect_name("as parameter name"));
      if (at(TokenKind::Comma))
        advance();
      else if (!at(TokenKind::RParen))
        fail("expected ',' or ')' in parameter list");
    }
    expect(TokenKind::RParen, "to close the parameter list");
    expect(TokenKind::Semi, "after the abstraction signature");
    if (at(TokenKind::LBrace)) {
      advance();
      parse_statements_into(def);
      expect(TokenKind::RBrace, "to close the abstraction body");
      if (at(TokenKind::Semi)) advance();
    }
    return def;
  }

  // Control-flow words that look like calls when followed by '(' but
  // never name an abstraction.
  static bool is_statement_keyword(const std::string& word) {
    return word == "if" || word == "else" || word == "while" ||
           word == "foreach" || word == "for" || word == "when" ||
           word == "until";
  }

  // Raw statements, split on top-level ';'. Each statement keeps its
  // canonical text plus the invocations (ident followed by '(') it
  // makes.
  void parse_statements_into(AstNode& def) {
    std::vector<Token> current;
    int depth = 0;
    auto flush = [&]() {
      if (current.empty()) return;
      AstNode stmt;
      stmt.kind = AstNode::Kind::Statement;
      stmt.span = current.front().span;
      stmt.attrs.push_back(join_statement(current));
      for (std::size_t i = 0; i + 1 < current.size(); ++i)
        if (current[i].kind == TokenKind::Ident &&
            current[i + 1].kind == TokenKind::LParen &&
            !is_statement_keyword(current[i].text))
          stmt.attrs.push_back(current[i].text);
      def.children.push_back(std::move(stmt));
      current.clear();
    };
    for (;;) {
      if (at(TokenKind::EndOfInput))
        fail("unterminated abstraction body");
      if (depth == 0 && at(TokenKind::RBrace)) break;
      if (at(TokenKind::LBrace)) ++depth;
      if (at(TokenKind::RBrace)) --depth;
      if (depth == 0 && at(TokenKind::Semi)) {
        advance();
        flush();
        continue;
      }
      current.push_back(advance());
    }
    flush();
  }

  static std::string join_statement(const std::vector<Token>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const Token& tok = tokens[i];
      if (i > 0) {
        const TokenKind prev = tokens[i - 1].kind;
        const bool tight_after = prev == TokenKind::LParen ||
                                 prev == TokenKind::PathSep ||
                                 prev == TokenKind::Dot;
        const bool tight_before = tok.kind == TokenKind::RParen ||
                                  tok.kind == TokenKind::Comma ||
                                  tok.kind == TokenKind::PathSep ||
                                  tok.kind == TokenKind::Dot ||
                                  tok.kind == TokenKind::LParen;
        if (!tight_after && !tight_before) out += ' ';
      }
      if (tok.kind == TokenKind::String)
        out += quote_string(tok.text);
      else
        out += tok.text;
    }
    return out;
  }

  static std::string quote_string(const std::string& value) {
    std::string out = "\"";
    for (char c : value) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    out += '"';
    return out;
  }

  // compose { a() and b() }
  AstNode parse_compose() {
    AstNode compose;
    compose.kind = AstNode::Kind::Compose;
    compose.span = peek().span;
    expect(TokenKind::KwCompose, "to begin a composition");
    expect(TokenKind::LBrace, "after 'compose'");
    while (!at(TokenKind::RBrace)) {
      compose.attrs.push_back(expect_name("as composed abstraction"));
      expect(TokenKind::LParen, "after composed abstraction name");
      expect(TokenKind::RParen, "after composed abstraction name");
      if (at(TokenKind::KwAnd))
        advance();
      else if (!at(TokenKind::RBrace))
        fail("expected 'and' or '}' in composition");
    }
    expect(TokenKind::RBrace, "to close the composition");
    return compose;
  }

  // --- construct -----------------------------------------------------------

  AstNode parse_construct_decl() {
    AstNode construct;
    construct.kind = AstNode::Kind::Construct;
    construct.span = peek().span;
    construct.attrs.push_back(expect_name("as construct name"));
    expect(TokenKind::KwIs, "after construct name");
    if (at(TokenKind::KwQosProperty) || at(TokenKind::KwPlatformProperty))
      construct.attrs.push_back(advance().text);
    else
      fail("expected 'qualityOfServiceProperty' or 'executionPlatformProperty'");
    expect(TokenKind::LBrace, "to open the construct body");
    while (!at(TokenKind::RBrace)) {
      if (at(TokenKind::Semi)) {
        advance();
      } else if (at(TokenKind::KwConstraint)) {
        AstNode key;
        key.kind = AstNode::Kind::Section;
        key.span = peek().span;
        key.attrs.push_back(advance().text);
        expect(TokenKind::KwIs, "after 'constraint'");
        expect(TokenKind::LBrace, "to open the constraint key");
        key.children.push_back(parse_annotation());
        if (at(TokenKind::Semi)) advance();
        expect(TokenKind::RBrace, "to close the constraint key");
        construct.children.push_back(std::move(key));
      } else if (at(TokenKind::KwOn)) {
        construct.children.push_back(parse_scope());
      } else {
        fail("expected constraint key or 'on' scope");
      }
    }
    expect(TokenKind::RBrace, "to close the construct body");
    return construct;
  }

  // on target:architecture|architecturalElement actions { ... }
  // Actions inside a block may be separated by ';', '.', or nothing at all
  // (a bare newline between them).
  void skip_action_separator() {
    if (at(TokenKind::Semi) || at(TokenKind::Dot)) advance();
  }

  AstNode parse_scope() {
    AstNode scope;
    scope.kind = AstNode::Kind::ScopeDecl;
    scope.span = peek().span;
    expect(TokenKind::KwOn, "to begin a scope");
    scope.attrs.push_back(expect_name("as scope target"));
    expect(TokenKind::Colon, "after scope target");
    if (at_word("architecture") || at_word("architecturalElement"))
      scope.attrs.push_back(advance().text);
    else
      fail("expected 'architecture' or 'architecturalElement'");
    expect(TokenKind::KwActions, "after scope kind");
    expect(TokenKind::LBrace, "to open the actions block");
    while (!at(TokenKind::RBrace)) scope.children.push_back(parse_action());
    expect(TokenKind::RBrace, "to close the actions block");
    return scope;
  }

  AstNode parse_action() {
    if (at(TokenKind::KwOn)) return parse_scope();
    if (at(TokenKind::KwInclude)) {
      AstNode action;
      action.kind = AstNode::Kind::ActionInclude;
      action.span = peek().span;
      advance();
      action.children.push_back(parse_element());
      skip_action_separator();
      return action;
    }
    if (at(TokenKind::KwReplicate)) {
      AstNode action;
      action.kind = AstNode::Kind::ActionReplicate;
      action.span = peek().span;
      advance();
      action.attrs.push_back(expect_name("as replicate source"));
      expect(TokenKind::KwTo, "between replicate names");
      action.attrs.push_back(expect_name("as replicate target"));
      skip_action_separator();
      return action;
    }
    if (at(TokenKind::KwUnify)) {
      AstNode action = parse_unify(AstNode::Kind::ActionUnify);
      skip_action_separator();
      return action;
    }
    if (at_word("remove")) {
      AstNode action;
      action.kind = AstNode::Kind::ActionRemove;
      action.span = peek().span;
      advance();
      action.attrs.push_back(expect_name("as element to remove"));
      skip_action_separator();
      return action;
    }
    if (at_word("rename")) {
      AstNode action;
      action.kind = AstNode::Kind::ActionRename;
      action.span = peek().span;
      advance();
      action.attrs.push_back(expect_name("as element to rename"));
      expect(TokenKind::KwTo, "between rename names");
      action.attrs.push_back(expect_name("as new element name"));
      skip_action_separator();
      return action;
    }
    if (at(TokenKind::Ident))
      throw Error(ErrorCode::UnknownActionKind,
                  "unknown action kind '" + peek().text + "'", peek().span);
    fail("expected a rewrite action");
  }

  // --- infrastructure ------------------------------------------------------

  AstNode parse_infrastructure_decl() {
    AstNode infra;
    infra.kind = AstNode::Kind::Infrastructure;
    infra.span = peek().span;
    infra.attrs.push_back(expect_name("as infrastructure name"));
    expect(TokenKind::KwIs, "after infrastructure name");
    expect(TokenKind::KwInfrastructure, "after 'is'");
    expect(TokenKind::LBrace, "to open the infrastructure body");
    while (!at(TokenKind::RBrace)) {
      if (at(TokenKind::Semi)) {
        advance();
      } else if (at(TokenKind::KwNode)) {
        AstNode node;
        node.kind = AstNode::Kind::NodeDecl;
        node.span = peek().span;
        advance();
        node.attrs.push_back(expect_name("as node name"));
        expect(TokenKind::LBrace, "to open the node body");
        parse_kv_entries(node, AstNode::Kind::AttrEntry);
        expect(TokenKind::RBrace, "to close the node body");
        infra.children.push_back(std::move(node));
      } else if (at(TokenKind::KwLink)) {
        AstNode link;
        link.kind = AstNode::Kind::LinkDecl;
        link.span = peek().span;
        advance();
        link.attrs.push_back(expect_name("as link endpoint"));
        expect(TokenKind::DashDash, "between link endpoints");
        link.attrs.push_back(expect_name("as link endpoint"));
        infra.children.push_back(std::move(link));
      } else {
        fail("expected 'node' or 'link'");
      }
    }
    expect(TokenKind::RBrace, "to close the infrastructure body");
    return infra;
  }

  const std::vector<Token>& tokens_;
  std::string file_;
  std::size_t pos_ = 0;
  Token eof_;
};

// ---------------------------------------------------------------------------
// Elaboration
// ---------------------------------------------------------------------------

[[noreturn]] void elab_fail(const AstNode& node, ErrorCode code,
                            const std::string& message) {
  throw Error(code, message, node.span);
}

void validate_name(const AstNode& node, const std::string& name,
                   bool allow_placeholder) {
  if (allow_placeholder && name.find("${value}") != std::string::npos) return;
  if (!is_valid_identifier(name))
    elab_fail(node, ErrorCode::InvalidIdentifier,
              "invalid identifier '" + name + "'");
}

ConstraintAnnotation elaborate_annotation(const AstNode& node,
                                          bool allow_placeholder) {
  validate_name(node, node.attrs[0], allow_placeholder);
  validate_name(node, node.attrs[1], allow_placeholder);
  return ConstraintAnnotation{node.attrs[0], node.attrs[1], node.attrs[2],
                              node.attrs[3] == "resolved"};
}

struct PendingAttachment {
  PortPath from;
  PortPath to;
  SourceSpan span;
};

BehaviourBlock elaborate_behaviour(const AstNode& node) {
  BehaviourBlock block;
  for (const auto& child : node.children) {
    if (child.kind == AstNode::Kind::AbstractionDef) {
      AbstractionDef def;
      def.name = child.attrs[0];
      def.recursive = child.attrs[1] == "recursive";
      def.parameters.assign(child.attrs.begin() + 2, child.attrs.end());
      for (const auto& stmt : child.children) {
        BehaviourStatement statement;
        statement.text = stmt.attrs[0];
        statement.invocations.assign(stmt.attrs.begin() + 1, stmt.attrs.end());
        def.statements.push_back(std::move(statement));
      }
      for (const auto& existing : block.definitions)
        if (existing.name == def.name)
          elab_fail(child, ErrorCode::NameCollision,
                    "duplicate abstraction '" + def.name + "'");
      block.definitions.push_back(std::move(def));
    } else {  // Compose
      block.composition.insert(block.composition.end(), child.attrs.begin(),
                               child.attrs.end());
    }
  }
  return block;
}

class ElementBuilder {
 public:
  ElementBuilder(bool allow_placeholder, bool allow_connections,
                 bool allow_nested)
      : allow_placeholder_(allow_placeholder),
        allow_connections_(allow_connections),
        allow_nested_(allow_nested) {}

  // Appends the element (and flattened children, tagged with parent
  // metadata) to `out`; connection items land in `pending`.
  void build(const AstNode& node, const std::string& parent,
             std::vector<ArchElement>& out,
             std::vector<PendingAttachment>& pending) {
    ArchElement element;
    element.name = node.attrs[0];
    validate_name(node, element.name, allow_placeholder_);
    const std::string& head = node.attrs[1];
    element.kind = head == "connector" ? ElementKind::Connector
                                       : ElementKind::Component;
    if (head == "style") {
      validate_name(node, node.attrs[2], allow_placeholder_);
      element.metadata["element-style"] = node.attrs[2];
    }
    if (node.attrs[3] == "archetype") element.metadata["archetype"] = "true";
    if (!parent.empty()) element.metadata["parent"] = parent;

    bool statefulness_set = false;
    std::vector<const AstNode*> nested;
    for (const auto& item : node.children)
      build_item(item, element, statefulness_set, nested, pending);

    if (!statefulness_set)
      element.stateless = element.service_kind == ServiceKind::Atomic;

    out.push_back(std::move(element));
    const std::string& own_name = out.back().name;
    for (const AstNode* child : nested) build(*child, own_name, out, pending);
  }

 private:
  void build_item(const AstNode& item, ArchElement& element,
                  bool& statefulness_set, std::vector<const AstNode*>& nested,
                  std::vector<PendingAttachment>& pending) {
    switch (item.kind) {
      case AstNode::Kind::Property:
        build_property(item, element, statefulness_set);
        return;
      case AstNode::Kind::PortDecl:
        add_port(item, element);
        return;
      case AstNode::Kind::Behaviour:
        if (element.behaviour)
          elab_fail(item, ErrorCode::ElaborationError,
                    "element '" + element.name +
                        "' declares behaviour twice");
        element.behaviour = elaborate_behaviour(item);
        return;
      case AstNode::Kind::Section:
        break;
      default:
        elab_fail(item, ErrorCode::ElaborationError,
                  "unexpected item in element body");
    }

    const std::string& section = item.attrs[0];
    if (section == "structure") {
      for (const auto& child : item.children) {
        if (child.kind == AstNode::Kind::PortDecl) {
          add_port(child, element);
        } else {
          if (!allow_nested_)
            elab_fail(child, ErrorCode::ElaborationError,
                      "nested elements are not allowed here");
          nested.push_back(&child);
        }
      }
    } else if (section == "connection") {
      if (!allow_connections_)
        elab_fail(item, ErrorCode::ElaborationError,
                  "included elements wire up through unify actions, not "
                  "connection sections");
      for (const auto& child : item.children)
        pending.push_back(
            {PortPath{child.attrs[0], child.attrs[1], child.attrs[2]},
             PortPath{child.attrs[3], child.attrs[4], child.attrs[5]},
             child.span});
    } else if (section == "constraint") {
      for (const auto& child : item.children)
        element.annotations.push_back(
            elaborate_annotation(child, allow_placeholder_));
    } else if (section == "metadata") {
      for (const auto& child : item.children) {
        if (!element.metadata.emplace(child.attrs[0], child.attrs[1]).second)
          elab_fail(child, ErrorCode::ElaborationError,
                    "duplicate metadata key '" + child.attrs[0] + "'");
      }
    } else {
      elab_fail(item, ErrorCode::ElaborationError,
                "unexpected section '" + section + "' in element body");
    }
  }

  void build_property(const AstNode& item, ArchElement& element,
                      bool& statefulness_set) {
    const std::string& key = item.attrs[0];
    if (key == "service") {
      if (element.service_kind != ServiceKind::Unspecified)
        elab_fail(item, ErrorCode::ElaborationError,
                  "service kind declared twice");
      if (item.attrs[1] == "atomic")
        element.service_kind = ServiceKind::Atomic;
      else if (item.attrs[1] == "composite")
        element.service_kind = ServiceKind::Composite;
      else
        elab_fail(item, ErrorCode::ElaborationError,
                  "service kind must be 'atomic' or 'composite', got '" +
                      item.attrs[1] + "'");
    } else if (key == "stateless" || key == "stateful") {
      if (statefulness_set)
        elab_fail(item, ErrorCode::ElaborationError,
                  "statefulness declared twice");
      statefulness_set = true;
      element.stateless = key == "stateless";
    } else {  // idempotent
      if (element.idempotent)
        elab_fail(item, ErrorCode::ElaborationError,
                  "idempotence declared twice");
      element.idempotent = true;
    }
  }

  void add_port(const AstNode& node, ArchElement& element) {
    Port port;
    port.name = node.attrs[0];
    validate_name(node, port.name, allow_placeholder_);
    if (element.find_port(port.name))
      elab_fail(node, ErrorCode::NameCollision,
                "duplicate port '" + port.name + "' in element '" +
                    element.name + "'");
    for (const auto& child : node.children) {
      validate_name(child, child.attrs[0], allow_placeholder_);
      ConnectionPoint point{child.attrs[0], child.attrs[1] == "out"
                                                ? Direction::Out
                                                : Direction::In};
      if (port.find_point(point.name))
        elab_fail(child, ErrorCode::NameCollision,
                  "duplicate connection point '" + point.name + "' in port '" +
                      port.name + "'");
      port.points.push_back(std::move(point));
    }
    element.ports.push_back(std::move(port));
  }

  bool allow_placeholder_;
  bool allow_connections_;
  bool allow_nested_;
};

// Direction by naming convention: a point mentioning Out faces out, a
// point mentioning In (or Inc) faces in. Used only when a connection
// references a point the structure never declared.
std::optional<Direction> infer_direction(const Identifier& point) {
  const bool has_out = point.find("Out") != std::string::npos;
  const bool has_in = point.find("In") != std::string::npos;
  if (has_out == has_in) return std::nullopt;
  return has_out ? Direction::Out : Direction::In;
}

// Resolves a pending attachment against the model, materialising
// missing ports/points when the element exists and the direction is
// inferable. A point that must be created but whose name gives no
// direction (or both) is a hard error; endpoints on missing elements
// are kept verbatim for the well-formedness check to report.
void settle_attachment(ArchitectureModel& model,
                       const PendingAttachment& pending) {
  auto materialise = [&](const PortPath& path) -> std::optional<Direction> {
    ArchElement* element = model.find_element(path.element);
    if (!element) return std::nullopt;
    Port* port = element->find_port(path.port);
    if (!port) {
      element->ports.push_back(Port{path.port, {}});
      port = &element->ports.back();
    }
    if (const ConnectionPoint* existing = port->find_point(path.point))
      return existing->direction;
    auto direction = infer_direction(path.point);
    if (!direction)
      throw Error(ErrorCode::ElaborationError,
                  "cannot infer a direction for implicit point '" +
                      path.point + "' on '" + path.element + "::" + path.port +
                      "': the name must mention exactly one of 'In'/'Out'",
                  pending.span);
    port->points.push_back(ConnectionPoint{path.point, *direction});
    return direction;
  };

  const auto from = materialise(pending.from);
  const auto to = materialise(pending.to);
  Attachment attachment{pending.from, pending.to};
  if (from && to && *from == Direction::In && *to == Direction::Out)
    std::swap(attachment.from, attachment.to);
  model.attachments.push_back(std::move(attachment));
}

ScopeTarget::Kind scope_kind_from_word(const std::string& word) {
  return word == "architecture" ? ScopeTarget::Kind::Architecture
                                : ScopeTarget::Kind::Element;
}

RewriteAction elaborate_action(const AstNode& node);

// Nested scopes flatten to a sibling sequence that preserves action
// order; empty slices are dropped unless nothing else survives.
void flatten_scope(const AstNode& node, std::vector<Scope>& out) {
  Scope current;
  validate_name(node, node.attrs[0], true);
  current.target.name = node.attrs[0];
  current.target.kind = scope_kind_from_word(node.attrs[1]);
  bool emitted = false;
  for (const auto& item : node.children) {
    if (item.kind == AstNode::Kind::ScopeDecl) {
      if (!current.actions.empty()) {
        out.push_back(current);
        current.actions.clear();
        emitted = true;
      }
      const std::size_t before = out.size();
      flatten_scope(item, out);
      if (out.size() > before) emitted = true;
    } else {
      current.actions.push_back(elaborate_action(item));
    }
  }
  if (!current.actions.empty() || !emitted) out.push_back(std::move(current));
}

RewriteAction elaborate_action(const AstNode& node) {
  switch (node.kind) {
    case AstNode::Kind::ActionInclude: {
      std::vector<ArchElement> built;
      std::vector<PendingAttachment> pending;
      ElementBuilder builder(/*allow_placeholder=*/true,
                             /*allow_connections=*/false,
                             /*allow_nested=*/false);
      builder.build(node.children[0], "", built, pending);
      return IncludeAction{std::move(built.front())};
    }
    case AstNode::Kind::ActionReplicate:
      validate_name(node, node.attrs[0], true);
      validate_name(node, node.attrs[1], true);
      return ReplicateAction{node.attrs[0], node.attrs[1]};
    case AstNode::Kind::ActionUnify: {
      for (const auto& part : node.attrs) validate_name(node, part, true);
      return UnifyAction{PortPath{node.attrs[0], node.attrs[1], node.attrs[2]},
                         PortPath{node.attrs[3], node.attrs[4], node.attrs[5]}};
    }
    case AstNode::Kind::ActionRemove:
      validate_name(node, node.attrs[0], true);
      return RemoveAction{node.attrs[0]};
    case AstNode::Kind::ActionRename:
      validate_name(node, node.attrs[0], true);
      validate_name(node, node.attrs[1], true);
      return RenameAction{node.attrs[0], node.attrs[1]};
    default:
      elab_fail(node, ErrorCode::ElaborationError, "unexpected action node");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

AstNode parse_model_ast(const std::vector<Token>& tokens,
                        const std::string& file) {
  return Parser(tokens, file).parse_model();
}

AstNode parse_construct_ast(const std::vector<Token>& tokens,
                            const std::string& file) {
  return Parser(tokens, file).parse_construct();
}

AstNode parse_infrastructure_ast(const std::vector<Token>& tokens,
                                 const std::string& file) {
  return Parser(tokens, file).parse_infrastructure();
}

ArchitectureModel elaborate_model(const AstNode& ast) {
  ArchitectureModel model;
  model.name = ast.attrs[0];
  model.style = ast.attrs[1];
  validate_name(ast, model.name, false);
  validate_name(ast, model.style, false);

  bool stage_set = false;
  std::vector<PendingAttachment> pending;
  ElementBuilder builder(/*allow_placeholder=*/false,
                         /*allow_connections=*/true,
                         /*allow_nested=*/true);
  for (const auto& child : ast.children) {
    if (child.kind == AstNode::Kind::StageDecl) {
      if (stage_set)
        elab_fail(child, ErrorCode::ElaborationError, "stage declared twice");
      auto stage = parse_stage_name(child.attrs[0]);
      if (!stage)
        elab_fail(child, ErrorCode::ElaborationError,
                  "unknown stage '" + child.attrs[0] + "'");
      model.stage = *stage;
      stage_set = true;
      continue;
    }
    const std::string& section = child.attrs[0];
    if (section == "structure") {
      for (const auto& element : child.children)
        builder.build(element, "", model.elements, pending);
    } else if (section == "connection") {
      for (const auto& unify : child.children)
        pending.push_back(
            {PortPath{unify.attrs[0], unify.attrs[1], unify.attrs[2]},
             PortPath{unify.attrs[3], unify.attrs[4], unify.attrs[5]},
             unify.span});
    } else {  // constraint
      for (const auto& annotation : child.children)
        model.annotations.push_back(elaborate_annotation(annotation, false));
    }
  }

  for (const auto& name_check : model.elements) {
    std::size_t count = 0;
    for (const auto& other : model.elements)
      if (other.name == name_check.name) ++count;
    if (count > 1)
      throw Error(ErrorCode::NameCollision,
                  "element '" + name_check.name + "' declared more than once",
                  ast.span);
  }

  for (const auto& attachment : pending) settle_attachment(model, attachment);
  return model;
}

Construct elaborate_construct(const AstNode& ast) {
  Construct construct;
  construct.name = ast.attrs[0];
  validate_name(ast, construct.name, false);
  construct.kind = ast.attrs[1] == "executionPlatformProperty"
                       ? ConstructKind::Platform
                       : ConstructKind::QoS;
  for (const auto& child : ast.children) {
    if (child.kind == AstNode::Kind::Section) {
      if (construct.key)
        elab_fail(child, ErrorCode::ParseError,
                  "construct declares its constraint key twice");
      const AstNode& annotation = child.children[0];
      if (annotation.attrs[3] == "resolved")
        elab_fail(annotation, ErrorCode::ElaborationError,
                  "a constraint key cannot be marked resolved");
      validate_name(annotation, annotation.attrs[0], false);
      validate_name(annotation, annotation.attrs[1], false);
      construct.key = ConstraintPattern{annotation.attrs[0],
                                        annotation.attrs[1],
                                        annotation.attrs[2]};
    } else {
      flatten_scope(child, construct.scopes);
    }
  }
  if (construct.scopes.empty())
    elab_fail(ast, ErrorCode::ElaborationError,
              "construct '" + construct.name + "' declares no scopes");
  return construct;
}

InfrastructureModel elaborate_infrastructure(const AstNode& ast) {
  InfrastructureModel infra;
  infra.name = ast.attrs[0];
  validate_name(ast, infra.name, false);
  for (const auto& child : ast.children) {
    if (child.kind == AstNode::Kind::NodeDecl) {
      InfraNode node;
      node.name = child.attrs[0];
      validate_name(child, node.name, false);
      if (infra.find_node(node.name))
        elab_fail(child, ErrorCode::DuplicateNode,
                  "node '" + node.name + "' declared twice");
      for (const auto& attr : child.children) {
        if (attr.attrs[0] == "capacity") {
          const std::string& value = attr.attrs[1];
          if (value.empty() ||
              value.find_first_not_of("0123456789") != std::string::npos)
            elab_fail(attr, ErrorCode::ElaborationError,
                      "capacity must be a non-negative integer, got '" +
                          value + "'");
          node.capacity = std::stoi(value);
        }
        if (!node.attributes.emplace(attr.attrs[0], attr.attrs[1]).second)
          elab_fail(attr, ErrorCode::ElaborationError,
                    "duplicate node attribute '" + attr.attrs[0] + "'");
      }
      infra.nodes.push_back(std::move(node));
    } else {  // LinkDecl
      const std::string& a = child.attrs[0];
      const std::string& b = child.attrs[1];
      if (a == b)
        elab_fail(child, ErrorCode::ElaborationError,
                  "link endpoints must differ, got '" + a + "' twice");
      for (const auto& endpoint : {a, b})
        if (!infra.find_node(endpoint))
          elab_fail(child, ErrorCode::UnknownNode,
                    "link references unknown node '" + endpoint + "'");
      auto link = std::minmax(a, b);
      std::pair<Identifier, Identifier> normalized{link.first, link.second};
      if (std::find(infra.links.begin(), infra.links.end(), normalized) ==
          infra.links.end())
        infra.links.push_back(std::move(normalized));
    }
  }
  return infra;
}

ArchitectureModel parse_model(std::string_view source,
                              const std::string& file) {
  return elaborate_model(parse_model_ast(tokenize(source, file), file));
}

Construct parse_construct(std::string_view source, const std::string& file) {
  return elaborate_construct(parse_construct_ast(tokenize(source, file), file));
}

InfrastructureModel parse_infrastructure(std::string_view source,
                                         const std::string& file) {
  return elaborate_infrastructure(
      parse_infrastructure_ast(tokenize(source, file), file));
}

}  // namespace gforge
