#include <variant>

#include "mvx/ocl/parser.hpp"
#include "mvx/util.hpp"

namespace mvx::ocl {

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
           std::holds_alternative<IfExpr>(e.node) || std::holds_alternative<LetExpr>(e.node);
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
        std::string operator()(const CollLit& n) const {
            const char* kind = n.kind == CollKind::Set
                                   ? "Set"
                                   : (n.kind == CollKind::Bag ? "Bag" : "Sequence");
            return std::string(kind) + "{" + joinArgs(n.elements) + "}";
        }
        std::string operator()(const VarRef& n) const { return n.name; }
        std::string operator()(const PropertyNav& n) const {
            return wrapped(*n.source) + "." + n.name + (n.atPre ? "@pre" : "");
        }
        std::string operator()(const OperationCall& n) const {
            return wrapped(*n.source) + "." + n.name + "(" + joinArgs(n.args) + ")";
        }
        std::string operator()(const ArrowCall& n) const {
            return wrapped(*n.source) + "->" + n.name + "(" + joinArgs(n.args) + ")";
        }
        std::string operator()(const IteratorCall& n) const {
            std::string head = wrapped(*n.source) + "->" + n.name + "(";
            for (std::size_t i = 0; i < n.vars.size(); ++i) {
                head += (i ? ", " : "") + n.vars[i];
            }
            if (!n.vars.empty()) head += " | ";
            return head + printExpr(*n.body) + ")";
        }
        std::string operator()(const IterateCall& n) const {
            return wrapped(*n.source) + "->iterate(" + n.var + "; " + n.acc + " = " +
                   printExpr(*n.init) + " | " + printExpr(*n.body) + ")";
        }
        std::string operator()(const BinaryOp& n) const {
            return wrapped(*n.lhs) + " " + to_string(n.op) + " " + wrapped(*n.rhs);
        }
        std::string operator()(const UnaryOp& n) const {
            return n.op == UnOpKind::Not ? "not " + wrapped(*n.operand)
                                         : "-" + wrapped(*n.operand);
        }
        std::string operator()(const IfExpr& n) const {
            return "if " + printExpr(*n.cond) + " then " + printExpr(*n.thenBranch) + " else " +
                   printExpr(*n.elseBranch) + " endif";
        }
        std::string operator()(const LetExpr& n) const {
            return "let " + n.var + " = " + printExpr(*n.init) + " in " + printExpr(*n.body);
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
        bool operator()(const CollLit& n) const {
            const auto& o = std::get<CollLit>(other.node);
            return o.kind == n.kind && sameList(n.elements, o.elements);
        }
        bool operator()(const VarRef& n) const { return std::get<VarRef>(other.node).name == n.name; }
        bool operator()(const PropertyNav& n) const {
            const auto& o = std::get<PropertyNav>(other.node);
            return o.name == n.name && o.atPre == n.atPre && sameExpr(*n.source, *o.source);
        }
        bool operator()(const OperationCall& n) const {
            const auto& o = std::get<OperationCall>(other.node);
            return o.name == n.name && sameExpr(*n.source, *o.source) && sameList(n.args, o.args);
        }
        bool operator()(const ArrowCall& n) const {
            const auto& o = std::get<ArrowCall>(other.node);
            return o.name == n.name && sameExpr(*n.source, *o.source) && sameList(n.args, o.args);
        }
        bool operator()(const IteratorCall& n) const {
            const auto& o = std::get<IteratorCall>(other.node);
            return o.name == n.name && o.vars == n.vars && sameExpr(*n.source, *o.source) &&
                   sameExpr(*n.body, *o.body);
        }
        bool operator()(const IterateCall& n) const {
            const auto& o = std::get<IterateCall>(other.node);
            return o.var == n.var && o.acc == n.acc && sameExpr(*n.source, *o.source) &&
                   sameExpr(*n.init, *o.init) && sameExpr(*n.body, *o.body);
        }
        bool operator()(const BinaryOp& n) const {
            const auto& o = std::get<BinaryOp>(other.node);
            return o.op == n.op && sameExpr(*n.lhs, *o.lhs) && sameExpr(*n.rhs, *o.rhs);
        }
        bool operator()(const UnaryOp& n) const {
            const auto& o = std::get<UnaryOp>(other.node);
            return o.op == n.op && sameExpr(*n.operand, *o.operand);
        }
        bool operator()(const IfExpr& n) const {
            const auto& o = std::get<IfExpr>(other.node);
            return sameExpr(*n.cond, *o.cond) && sameExpr(*n.thenBranch, *o.thenBranch) &&
                   sameExpr(*n.elseBranch, *o.elseBranch);
        }
        bool operator()(const LetExpr& n) const {
            const auto& o = std::get<LetExpr>(other.node);
            return o.var == n.var && sameExpr(*n.init, *o.init) && sameExpr(*n.body, *o.body);
        }
    };
    return std::visit(Visitor{b}, a.node);
}

std::string printSig(const OperationSig& sig) {
    std::string out = sig.name + "(";
    for (std::size_t i = 0; i < sig.params.size(); ++i) {
        if (i) out += ", ";
        out += sig.params[i].name + ": " + to_string(sig.params[i].type);
    }
    out += ")";
    if (sig.returnType) out += std::string(": ") + to_string(*sig.returnType);
    return out;
}

} // namespace

std::string print(const Expr& expr) { return printExpr(expr); }

std::string print(const ContextDecl& decl) {
    struct Visitor {
        std::string operator()(const ClassContext& c) const {
            std::string out = "context " + c.className + "\n";
            for (const auto& inv : c.invariants) {
                out += "inv";
                if (!inv.name.empty()) out += " " + inv.name;
                out += ": " + printExpr(*inv.body) + "\n";
            }
            return out;
        }
        std::string operator()(const OperationContext& c) const {
            std::string out = "context " + c.className + "::" + printSig(c.sig) + "\n";
            for (const auto& pre : c.pres) {
                out += "pre";
                if (!pre.name.empty()) out += " " + pre.name;
                out += ": " + printExpr(*pre.body) + "\n";
            }
            for (const auto& post : c.posts) {
                out += "post";
                if (!post.name.empty()) out += " " + post.name;
                out += ": " + printExpr(*post.body) + "\n";
            }
            return out;
        }
        std::string operator()(const DeriveContext& c) const {
            return "context " + c.className + "::" + c.attributeName + ": " +
                   to_string(c.declaredType) + "\nderive: " + printExpr(*c.body) + "\n";
        }
    };
    return std::visit(Visitor{}, decl);
}

bool same_structure(const Expr& a, const Expr& b) { return sameExpr(a, b); }

} // namespace mvx::ocl
