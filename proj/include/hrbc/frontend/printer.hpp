#pragma once

#include <string>

#include "hrbc/frontend/ast.hpp"

namespace hrbc::frontend {

/// Canonical source text; `parse_source(pretty_print(ast)) == ast`.
std::string pretty_print(const ModelAST& ast);

std::string pretty_print(const Block& block, int indent = 0);

}  // namespace hrbc::frontend
