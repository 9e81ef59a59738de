#include "gforge/ast.hpp"

#include <ostream>

namespace gforge {

const char* ast_kind_name(AstNode::Kind kind) {
  switch (kind) {
    case AstNode::Kind::Model: return "model";
    case AstNode::Kind::Section: return "section";
    case AstNode::Kind::Element: return "element";
    case AstNode::Kind::PortDecl: return "port";
    case AstNode::Kind::PointDecl: return "point";
    case AstNode::Kind::Annotation: return "annotation";
    case AstNode::Kind::Attachment: return "attachment";
    case AstNode::Kind::Property: return "property";
    case AstNode::Kind::MetadataEntry: return "metadata-entry";
    case AstNode::Kind::StageDecl: return "stage";
    case AstNode::Kind::Behaviour: return "behaviour";
    case AstNode::Kind::AbstractionDef: return "abstraction-def";
    case AstNode::Kind::Statement: return "statement";
    case AstNode::Kind::Compose: return "compose";
    case AstNode::Kind::Construct: return "construct";
    case AstNode::Kind::ScopeDecl: return "scope";
    case AstNode::Kind::ActionInclude: return "include";
    case AstNode::Kind::ActionReplicate: return "replicate";
    case AstNode::Kind::ActionUnify: return "unify";
    case AstNode::Kind::ActionRemove: return "remove";
    case AstNode::Kind::ActionRename: return "rename";
    case AstNode::Kind::Infrastructure: return "infrastructure";
    case AstNode::Kind::NodeDecl: return "node";
    case AstNode::Kind::AttrEntry: return "attr";
    case AstNode::Kind::LinkDecl: return "link";
  }
  return "node";
}

void dump_ast(const AstNode& node, std::ostream& out, int indent) {
  for (int i = 0; i < indent; ++i) out << "  ";
  out << ast_kind_name(node.kind);
  for (const auto& attr : node.attrs) {
    out << ' ';
    if (attr.empty())
      out << "''";
    else
      out << attr;
  }
  out << '\n';
  for (const auto& child : node.children) dump_ast(child, out, indent + 1);
}

}  // namespace gforge
