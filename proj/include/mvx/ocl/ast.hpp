#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mvx/meta.hpp"
#include "mvx/value.hpp"

namespace mvx::ocl {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class BinOpKind { Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or, Xor, Implies };
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
struct CollLit {
    CollKind kind;
    std::vector<ExprPtr> elements;
};
/// Free name: self, result, iterator/let variables, or a class name.
struct VarRef {
    std::string name;
};
/// source.name, optionally marked @pre (postcondition bodies only).
struct PropertyNav {
    ExprPtr source;
    std::string name;
    bool atPre = false;
};
/// Dotted call from the closed operation library, e.g. x.abs(), s.concat(t).
struct OperationCall {
    ExprPtr source;
    std::string name;
    std::vector<ExprPtr> args;
};
/// Non-iterator arrow call, e.g. c->size(), c->includes(x).
struct ArrowCall {
    ExprPtr source;
    std::string name;
    std::vector<ExprPtr> args;
};
/// Iterator with 0, 1, or 2 declared variables, e.g. c->select(v | body).
struct IteratorCall {
    ExprPtr source;
    std::string name;
    std::vector<std::string> vars;
    ExprPtr body;
};
/// c->iterate(v; acc = init | body)
struct IterateCall {
    ExprPtr source;
    std::string var;
    std::string acc;
    ExprPtr init;
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
struct IfExpr {
    ExprPtr cond;
    ExprPtr thenBranch;
    ExprPtr elseBranch;
};
struct LetExpr {
    std::string var;
    ExprPtr init;
    ExprPtr body;
};

struct Expr {
    std::variant<BoolLit, IntLit, RealLit, StringLit, CollLit, VarRef, PropertyNav, OperationCall,
                 ArrowCall, IteratorCall, IterateCall, BinaryOp, UnaryOp, IfExpr, LetExpr>
        node;
    int line = 0;
    int column = 0;
};

struct InvariantClause {
    std::string name; // empty when unnamed
    ExprPtr body;
};

struct ClassContext {
    std::string className;
    std::vector<InvariantClause> invariants;
};

struct ConditionClause {
    std::string name; // empty when unnamed
    ExprPtr body;
};

struct OperationContext {
    std::string className;
    OperationSig sig;
    std::vector<ConditionClause> pres;
    std::vector<ConditionClause> posts;
};

struct DeriveContext {
    std::string className;
    std::string attributeName;
    PrimitiveType declaredType;
    ExprPtr body;
};

using ContextDecl = std::variant<ClassContext, OperationContext, DeriveContext>;

} // namespace mvx::ocl
