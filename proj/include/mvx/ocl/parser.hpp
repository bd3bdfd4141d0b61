#pragma once

#include <string>
#include <vector>

#include "mvx/ocl/ast.hpp"

namespace mvx::ocl {

/// Parse a constraint file: concatenated context declarations, `--` line
/// comments ignored. Throws ParseError on the first failure. `@pre` is only
/// accepted inside postcondition bodies, `result` only inside postconditions
/// of operations with a return type.
std::vector<ContextDecl> parse_constraints(const std::string& text);

/// Parse one bare expression (self is the only free object variable).
/// Rejects `@pre`, `result`, and trailing input.
ExprPtr parse_expression(const std::string& text);

/// Canonical source form; reparses to a structurally identical tree.
std::string print(const Expr& expr);
std::string print(const ContextDecl& decl);

/// Structural comparison, ignoring source positions.
bool same_structure(const Expr& a, const Expr& b);

} // namespace mvx::ocl
