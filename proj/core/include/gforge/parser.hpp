#pragma once

#include <string_view>
#include <vector>

#include "gforge/ast.hpp"
#include "gforge/construct.hpp"
#include "gforge/infrastructure.hpp"
#include "gforge/lexer.hpp"
#include "gforge/model.hpp"

namespace gforge {

/// Recursive-descent parses over the token stream. The *_ast entry
/// points stop at the syntax tree; elaborate_* turns a tree into the
/// typed representation (resolving implicit connection points,
/// flattening nested elements and scopes, checking local uniqueness).
/// The plain parse_* helpers run tokenize + parse + elaborate.

AstNode parse_model_ast(const std::vector<Token>& tokens,
                        const std::string& file);
AstNode parse_construct_ast(const std::vector<Token>& tokens,
                            const std::string& file);
AstNode parse_infrastructure_ast(const std::vector<Token>& tokens,
                                 const std::string& file);

ArchitectureModel elaborate_model(const AstNode& ast);
Construct elaborate_construct(const AstNode& ast);
InfrastructureModel elaborate_infrastructure(const AstNode& ast);

ArchitectureModel parse_model(std::string_view source,
                              const std::string& file);
Construct parse_construct(std::string_view source, const std::string& file);
InfrastructureModel parse_infrastructure(std::string_view source,
                                         const std::string& file);

}  // namespace gforge
