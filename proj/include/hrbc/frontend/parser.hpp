#pragma once

#include <string_view>
#include <vector>

#include "hrbc/expr.hpp"
#include "hrbc/frontend/ast.hpp"
#include "hrbc/frontend/lexer.hpp"

namespace hrbc::frontend {

/// Throws DiagnosticError naming the expected tokens on a syntax error.
ModelAST parse(const std::vector<Token>& tokens);

/// tokenize + parse.
ModelAST parse_source(std::string_view source);

/// Parses a standalone expression. `loc()` is accepted, so the same entry
/// point serves forbidden-state predicates and serialized automata.
Expr parse_expression(std::string_view text);

}  // namespace hrbc::frontend
