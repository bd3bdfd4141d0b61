#pragma once

#include <string>

#include "mvx/navex/ast.hpp"

namespace mvx::navex {

/// Parse one NavEx expression. Throws ParseError with position on the
/// first failure; trailing input is an error. Member names are not
/// checked here; they are data-dependent and resolve at evaluation.
ExprPtr parse_navex(const std::string& text);

/// Canonical source form; reparses to a structurally identical tree.
std::string print(const Expr& expr);

/// Structural comparison, ignoring source positions.
bool same_structure(const Expr& a, const Expr& b);

} // namespace mvx::navex
