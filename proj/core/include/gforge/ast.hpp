#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gforge/diagnostics.hpp"

namespace gforge {

/// Uniform syntax tree produced by the parser before elaboration.
/// Each node keeps its production kind, the strings it captured and
/// its child nodes; the elaborator turns this into the typed model.
struct AstNode {
  enum class Kind {
    Model,
    Section,      // attrs: [structure|connection|constraint|metadata|behaviour]
    Element,      // attrs: [name, component|connector|style, style-name, archetype-flag]
    PortDecl,     // attrs: [name]
    PointDecl,    // attrs: [name, in|out]
    Annotation,   // attrs: [category, name, value, resolved-flag]
    Attachment,   // attrs: [el, port, point, el, port, point]
    Property,     // attrs: [key, value]
    MetadataEntry,// attrs: [key, value]
    StageDecl,    // attrs: [stage word]
    Behaviour,
    AbstractionDef, // attrs: [name, recursive-flag, params...]
    Statement,      // attrs: [text, invocations...]
    Compose,        // attrs: [names...]
    Construct,      // attrs: [name, kind word]
    ScopeDecl,      // attrs: [target, architecture|architecturalElement]
    ActionInclude,
    ActionReplicate, // attrs: [source, target]
    ActionUnify,     // attrs: [el, port, point, el, port, point]
    ActionRemove,    // attrs: [name]
    ActionRename,    // attrs: [old, new]
    Infrastructure,  // attrs: [name]
    NodeDecl,        // attrs: [name]
    AttrEntry,       // attrs: [key, value]
    LinkDecl,        // attrs: [a, b]
  };

  Kind kind = Kind::Model;
  std::vector<std::string> attrs;
  std::vector<AstNode> children;
  SourceSpan span;
};

const char* ast_kind_name(AstNode::Kind kind);

/// Writes an indented one-node-per-line dump (used by `parse --emit-ast`).
void dump_ast(const AstNode& node, std::ostream& out, int indent = 0);

}  // namespace gforge
