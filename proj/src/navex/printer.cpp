#include <variant>

#include "mvx/navex/parser.hpp"
#include "mvx/util.hpp"

namespace mvx::navex {

namespace {

std::string quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\'': out += "\\'"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c; break;
        }
    }
    out += '\'';
    return out;
}

bool needsParens(const Expr& e) {
    return std::holds_alternative<BinaryOp>(e.node) || std::holds_alternative<UnaryOp>(e.node) ||
           std::holds_alternative<Conditional>(e.node) || std::holds_alternative<Lambda>(e.node);
}

std::string printExpr(const Expr& e);

std::string wrapped(const Expr& e) {
    return needsParens(e) ? "(" + printExpr(e) + ")" : printExpr(e);
}

std::string joinArgs(const std::vector<ExprPtr>& args) {
    std::string out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += printExpr(*args[i]);
    }
    return out;
}

std::string printExpr(const Expr& e) {
    struct Visitor {
        std::string operator()(const BoolLit& n) const { return n.value ? "true" : "false"; }
        std::string operator()(const IntLit& n) const { return std::to_string(n.value); }
        std::string operator()(const RealLit& n) const { return format_real(n.value); }
        std::string operator()(const StringLit& n) const { return quote(n.value); }
        std::string operator()(const ArrayLit& n) const { return "[" + joinArgs(n.elements) + "]"; }
        std::string operator()(const RecordLit& n) const {
            std::string out = "{";
            for (std::size_t i = 0; i < n.fields.size(); ++i) {
                if (i) out += ", ";
                out += n.fields[i].first + ": " + printExpr(*n.fields[i].second);
            }
            return out + "}";
        }
        std::string operator()(const VarRef& n) const { return n.name; }
        std::string operator()(const Member& n) const {
            return wrapped(*n.source) + "." + (n.dollar ? "$" : "") + n.name;
        }
        std::string operator()(const Index& n) const {
            return wrapped(*n.source) + "[" + printExpr(*n.index) + "]";
        }
        std::string operator()(const Call& n) const {
            return wrapped(*n.callee) + "(" + joinArgs(n.args) + ")";
        }
        std::string operator()(const Lambda& n) const {
            std::string head;
            if (n.params.size() == 1) {
                head = n.params[0];
            } else {
                head = "(";
                for (std::size_t i = 0; i < n.params.size(); ++i) {
                    if (i) head += ", ";
                    head += n.params[i];
                }
                head += ")";
            }
            return head + " => " + printExpr(*n.body);
        }
        std::string operator()(const BinaryOp& n) const {
            return wrapped(*n.lhs) + " " + to_string(n.op) + " " + wrapped(*n.rhs);
        }
        std::string operator()(const UnaryOp& n) const {
            return n.op == UnOpKind::Not ? "!" + wrapped(*n.operand) : "-" + wrapped(*n.operand);
        }
        std::string operator()(const Conditional& n) const {
            return wrapped(*n.cond) + " ? " + wrapped(*n.thenBranch) + " : " +
                   wrapped(*n.elseBranch);
        }
    };
    return std::visit(Visitor{}, e.node);
}

bool sameExpr(const Expr& a, const Expr& b);

bool sameList(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!sameExpr(*a[i], *b[i])) return false;
    }
    return true;
}

bool sameExpr(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    struct Visitor {
        const Expr& other;
        bool operator()(const BoolLit& n) const { return std::get<BoolLit>(other.node).value == n.value; }
        bool operator()(const IntLit& n) const { return std::get<IntLit>(other.node).value == n.value; }
        bool operator()(const RealLit& n) const { return std::get<RealLit>(other.node).value == n.value; }
        bool operator()(const StringLit& n) const {
            return std::get<StringLit>(other.node).value == n.value;
        }
        bool operator()(const ArrayLit& n) const {
            return sameList(n.elements, std::get<ArrayLit>(other.node).elements);
        }
        bool operator()(const RecordLit& n) const {
            const auto& o = std::get<RecordLit>(other.node);
            if (o.fields.size() != n.fields.size()) return false;
            for (std::size_t i = 0; i < n.fields.size(); ++i) {
                if (n.fields[i].first != o.fields[i].first) return false;
                if (!sameExpr(*n.fields[i].second, *o.fields[i].second)) return false;
            }
            return true;
        }
        bool operator()(const VarRef& n) const { return std::get<VarRef>(other.node).name == n.name; }
        bool operator()(const Member& n) const {
            const auto& o = std::get<Member>(other.node);
            return o.name == n.name && o.dollar == n.dollar && sameExpr(*n.source, *o.source);
        }
        bool operator()(const Index& n) const {
            const auto& o = std::get<Index>(other.node);
            return sameExpr(*n.source, *o.source) && sameExpr(*n.index, *o.index);
        }
        bool operator()(const Call& n) const {
            const auto& o = std::get<Call>(other.node);
            return sameExpr(*n.callee, *o.callee) && sameList(n.args, o.args);
        }
        bool operator()(const Lambda& n) const {
            const auto& o = std::get<Lambda>(other.node);
            return o.params == n.params && sameExpr(*n.body, *o.body);
        }
        bool operator()(const BinaryOp& n) const {
            const auto& o = std::get<BinaryOp>(other.node);
            return o.op == n.op && sameExpr(*n.lhs, *o.lhs) && sameExpr(*n.rhs, *o.rhs);
        }
        bool operator()(const UnaryOp& n) const {
            const auto& o = std::get<UnaryOp>(other.node);
            return o.op == n.op && sameExpr(*n.operand, *o.operand);
        }
        bool operator()(const Conditional& n) const {
            const auto& o = std::get<Conditional>(other.node);
            return sameExpr(*n.cond, *o.cond) && sameExpr(*n.thenBranch, *o.thenBranch) &&
                   sameExpr(*n.elseBranch, *o.elseBranch);
        }
    };
    return std::visit(Visitor{b}, a.node);
}

} // namespace

std::string print(const Expr& expr) { return printExpr(expr); }

bool same_structure(const Expr& a, const Expr& b) { return sameExpr(a, b); }

} // namespace mvx::navex
