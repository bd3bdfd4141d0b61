#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mvx::navex {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class BinOpKind {
    EqStrict, // ===
    NeStrict, // !==
    EqLoose,  // ==
    NeLoose,  // !=
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    And, // &&
    Or,  // ||
};
enum class UnOpKind { Not, Neg };

const char* to_string(BinOpKind op);

struct BoolLit {
    bool value;
};
struct IntLit {
    std::int64_t value;
};
struct RealLit {
    double value;
};
struct StringLit {
    std::string value;
};
/// [e1, e2, ...], evaluates to a Sequence.
struct ArrayLit {
    std::vector<ExprPtr> elements;
};
/// {$id: 'x', $price: 2}; keys keep their `$` prefix; only meaningful as
/// the first argument of addObject.
struct RecordLit {
    std::vector<std::pair<std::string, ExprPtr>> fields;
};
/// Free name: `data` (context binding), lambda parameters, or a class name.
struct VarRef {
    std::string name;
};
/// source.name; dollar marks reflective feature access source.$name.
struct Member {
    ExprPtr source;
    std::string name;
    bool dollar = false;
};
struct Index {
    ExprPtr source;
    ExprPtr index;
};
struct Call {
    ExprPtr callee;
    std::vector<ExprPtr> args;
};
/// a => body | (a, b) => body
struct Lambda {
    std::vector<std::string> params;
    ExprPtr body;
};
struct BinaryOp {
    BinOpKind op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct UnaryOp {
    UnOpKind op;
    ExprPtr operand;
};
struct Conditional {
    ExprPtr cond;
    ExprPtr thenBranch;
    ExprPtr elseBranch;
};

struct Expr {
    std::variant<BoolLit, IntLit, RealLit, StringLit, ArrayLit, RecordLit, VarRef, Member, Index,
                 Call, Lambda, BinaryOp, UnaryOp, Conditional>
        node;
    int line = 0;
    int column = 0;
};

} // namespace mvx::navex
