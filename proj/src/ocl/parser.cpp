#include "mvx/ocl/parser.hpp"

#include <cctype>
#include <charconv>
#include <set>

#include "mvx/errors.hpp"
#include "mvx/token.hpp"

namespace mvx::ocl {

namespace {

const std::set<std::string> kReservedNames = {
    "context", "inv",     "pre", "post", "derive", "if",   "then", "else", "endif",
    "let",     "in",      "not", "and",  "or",     "xor",  "implies", "true", "false",
};

const std::set<std::string> kDottedOps = {
    // strings
    "size", "concat", "substring", "toUpperCase", "toLowerCase", "indexOf",
    // numerics
    "abs", "floor", "round", "max", "min", "div", "mod",
    // OclAny
    "allInstances", "oclIsTypeOf", "oclIsKindOf", "oclAsType", "oclIsUndefined",
};

const std::set<std::string> kArrowOps = {
    "size",     "includes",  "excludes", "includesAll", "excludesAll", "isEmpty",
    "notEmpty", "sum",       "count",    "first",       "last",        "at",
    "indexOf",  "including", "excluding", "union",      "intersection", "append",
    "prepend",  "flatten",   "asSet",    "asBag",       "asSequence",
};

const std::set<std::string> kIteratorOps = {
    "select", "reject", "collect", "forAll", "exists", "one", "any", "isUnique", "sortedBy",
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    int line = 1;
    int column = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
            while (i < text.size() && text[i] != '\n') advance();
            continue;
        }
        Token tok;
        tok.line = line;
        tok.column = column;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_')) {
                advance();
            }
            tok.type = Token::Type::Ident;
            tok.text = text.substr(start, i - start);
            out.push_back(std::move(tok));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) advance();
            bool isReal = false;
            if (i + 1 < text.size() && text[i] == '.' &&
                std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
                isReal = true;
                advance();
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                    advance();
                }
            }
            tok.type = isReal ? Token::Type::Real : Token::Type::Int;
            tok.text = text.substr(start, i - start);
            out.push_back(std::move(tok));
            continue;
        }
        if (c == '\'') {
            advance();
            std::string value;
            bool closed = false;
            while (i < text.size()) {
                char d = text[i];
                if (d == '\\' && i + 1 < text.size()) {
                    char e = text[i + 1];
                    advance(2);
                    switch (e) {
                        case 'n': value += '\n'; break;
                        case 't': value += '\t'; break;
                        default: value += e; break;
                    }
                    continue;
                }
                if (d == '\'') {
                    advance();
                    closed = true;
                    break;
                }
                value += d;
                advance();
            }
            if (!closed) throw ParseError(tok.line, tok.column, "unterminated string literal");
            tok.type = Token::Type::String;
            tok.text = std::move(value);
            out.push_back(std::move(tok));
            continue;
        }
        auto twoChar = [&](const char* p) {
            return i + 1 < text.size() && text[i] == p[0] && text[i + 1] == p[1];
        };
        const char* two[] = {"->", "<=", ">=", "<>", "::"};
        bool matched = false;
        for (const char* p : two) {
            if (twoChar(p)) {
                tok.type = Token::Type::Punct;
                tok.text = p;
                advance(2);
                out.push_back(std::move(tok));
                matched = true;
                break;
            }
        }
        if (matched) continue;
        static const std::string singles = "(){},|;:.@=<>+-*/";
        if (singles.find(c) != std::string::npos) {
            tok.type = Token::Type::Punct;
            tok.text = std::string(1, c);
            advance();
            out.push_back(std::move(tok));
            continue;
        }
        throw ParseError(line, column, std::string("unexpected character '") + c + "'");
    }
    Token end;
    end.type = Token::Type::End;
    end.line = line;
    end.column = column;
    out.push_back(end);
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& text) : tokens_(tokenize(text)) {}

    std::vector<ContextDecl> parseFile() {
        std::vector<ContextDecl> decls;
        while (!peek().is(Token::Type::End, "")) {
            if (peek().type == Token::Type::End) break;
            decls.push_back(parseDecl());
        }
        if (decls.empty()) {
            fail(peek(), "expected a context declaration", {"context"});
        }
        return decls;
    }

    ExprPtr parseBareExpression() {
        ExprPtr e = expression();
        if (peek().type != Token::Type::End) {
            fail(peek(), "trailing input after expression");
        }
        return e;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    bool allowAtPre_ = false;
    bool allowResult_ = false;

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t idx = pos_ + ahead;
        if (idx >= tokens_.size()) idx = tokens_.size() - 1;
        return tokens_[idx];
    }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const Token& at, const std::string& what,
                           std::vector<std::string> expected = {}) {
        throw ParseError(at.line, at.column, what, std::move(expected));
    }

    void expectPunct(const char* p) {
        if (!peek().isPunct(p)) {
            fail(peek(), std::string("expected '") + p + "'", {p});
        }
        next();
    }

    bool acceptPunct(const char* p) {
        if (peek().isPunct(p)) {
            next();
            return true;
        }
        return false;
    }

    bool acceptIdent(const char* kw) {
        if (peek().isIdent(kw)) {
            next();
            return true;
        }
        return false;
    }

    std::string expectName(const char* what) {
        const Token& t = peek();
        if (t.type != Token::Type::Ident || kReservedNames.count(t.text)) {
            fail(t, std::string("expected ") + what, {"identifier"});
        }
        return next().text;
    }

    PrimitiveType expectType() {
        const Token& t = peek();
        if (t.type != Token::Type::Ident) fail(t, "expected a type name", {"type"});
        auto type = primitive_from_string(t.text);
        if (!type) fail(t, "unknown type '" + t.text + "'");
        next();
        return *type;
    }

    ExprPtr make(int line, int column, auto&& node) {
        auto e = std::make_unique<Expr>();
        e->node = std::forward<decltype(node)>(node);
        e->line = line;
        e->column = column;
        return e;
    }

    // ---- declarations ----

    ContextDecl parseDecl() {
        const Token& kw = peek();
        if (!acceptIdent("context")) fail(kw, "expected 'context'", {"context"});
        std::string className = expectName("class name");
        if (acceptPunct("::")) return parseMember(className);

        ClassContext ctx;
        ctx.className = className;
        if (!peek().isIdent("inv")) fail(peek(), "expected 'inv'", {"inv"});
        while (acceptIdent("inv")) {
            InvariantClause clause;
            if (peek().type == Token::Type::Ident && !kReservedNames.count(peek().text)) {
                clause.name = next().text;
            }
            expectPunct(":");
            allowAtPre_ = false;
            allowResult_ = false;
            clause.body = expression();
            ctx.invariants.push_back(std::move(clause));
        }
        return ctx;
    }

    ContextDecl parseMember(std::string className) {
        std::string memberName = expectName("member name");
        if (peek().isPunct("(")) {
            return parseOperationContext(std::move(className), std::move(memberName));
        }
        expectPunct(":");
        PrimitiveType type = expectType();
        if (!acceptIdent("derive")) fail(peek(), "expected 'derive'", {"derive"});
        expectPunct(":");
        allowAtPre_ = false;
        allowResult_ = false;
        DeriveContext ctx;
        ctx.className = std::move(className);
        ctx.attributeName = std::move(memberName);
        ctx.declaredType = type;
        ctx.body = expression();
        return ctx;
    }

    ContextDecl parseOperationContext(std::string className, std::string opName) {
        OperationContext ctx;
        ctx.className = std::move(className);
        ctx.sig.name = std::move(opName);
        expectPunct("(");
        if (!peek().isPunct(")")) {
            while (true) {
                OperationParam param;
                param.name = expectName("parameter name");
                expectPunct(":");
                param.type = expectType();
                ctx.sig.params.push_back(std::move(param));
                if (!acceptPunct(",")) break;
            }
        }
        expectPunct(")");
        if (acceptPunct(":")) ctx.sig.returnType = expectType();

        if (!peek().isIdent("pre") && !peek().isIdent("post")) {
            fail(peek(), "expected 'pre' or 'post'", {"pre", "post"});
        }
        while (peek().isIdent("pre") || peek().isIdent("post")) {
            bool isPost = next().text == "post";
            ConditionClause clause;
            if (peek().type == Token::Type::Ident && !kReservedNames.count(peek().text)) {
                clause.name = next().text;
            }
            expectPunct(":");
            allowAtPre_ = isPost;
            allowResult_ = isPost && ctx.sig.returnType.has_value();
            clause.body = expression();
            (isPost ? ctx.posts : ctx.pres).push_back(std::move(clause));
        }
        return ctx;
    }

    // ---- expressions, loosest to tightest ----

    ExprPtr expression() { return impliesExpr(); }

    ExprPtr impliesExpr() {
        ExprPtr lhs = orExpr();
        while (peek().isIdent("implies")) {
            const Token& op = next();
            ExprPtr rhs = orExpr();
            lhs = make(op.line, op.column,
                       BinaryOp{BinOpKind::Implies, std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprPtr orExpr() {
        ExprPtr lhs = andExpr();
        while (peek().isIdent("or") || peek().isIdent("xor")) {
            const Token& op = next();
            BinOpKind kind = op.text == "or" ? BinOpKind::Or : BinOpKind::Xor;
            ExprPtr rhs = andExpr();
            lhs = make(op.line, op.column, BinaryOp{kind, std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprPtr andExpr() {
        ExprPtr lhs = cmpExpr();
        while (peek().isIdent("and")) {
            const Token& op = next();
            ExprPtr rhs = cmpExpr();
            lhs = make(op.line, op.column, BinaryOp{BinOpKind::And, std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprPtr cmpExpr() {
        ExprPtr lhs = addExpr();
        while (true) {
            BinOpKind kind;
            if (peek().isPunct("=")) kind = BinOpKind::Eq;
            else if (peek().isPunct("<>")) kind = BinOpKind::Ne;
            else if (peek().isPunct("<")) kind = BinOpKind::Lt;
            else if (peek().isPunct("<=")) kind = BinOpKind::Le;
            else if (peek().isPunct(">")) kind = BinOpKind::Gt;
            else if (peek().isPunct(">=")) kind = BinOpKind::Ge;
            else break;
            const Token& op = next();
            ExprPtr rhs = addExpr();
            lhs = make(op.line, op.column, BinaryOp{kind, std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprPtr addExpr() {
        ExprPtr lhs = mulExpr();
        while (peek().isPunct("+") || peek().isPunct("-")) {
            const Token& op = next();
            BinOpKind kind = op.text == "+" ? BinOpKind::Add : BinOpKind::Sub;
            ExprPtr rhs = mulExpr();
            lhs = make(op.line, op.column, BinaryOp{kind, std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprPtr mulExpr() {
        ExprPtr lhs = unaryExpr();
        while (peek().isPunct("*") || peek().isPunct("/")) {
            const Token& op = next();
            BinOpKind kind = op.text == "*" ? BinOpKind::Mul : BinOpKind::Div;
            ExprPtr rhs = unaryExpr();
            lhs = make(op.line, op.column, BinaryOp{kind, std::move(lhs), std::move(rhs)});
        }
        return lhs;
    }

    ExprPtr unaryExpr() {
        if (peek().isIdent("not")) {
            const Token& op = next();
            return make(op.line, op.column, UnaryOp{UnOpKind::Not, unaryExpr()});
        }
        if (peek().isPunct("-")) {
            const Token& op = next();
            return make(op.line, op.column, UnaryOp{UnOpKind::Neg, unaryExpr()});
        }
        return postfixExpr();
    }

    ExprPtr postfixExpr() {
        ExprPtr e = primary();
        while (true) {
            if (peek().isPunct(".")) {
                next();
                const Token& nameTok = peek();
                std::string name = expectName("property or operation name");
                if (peek().isPunct("(")) {
                    if (!kDottedOps.count(name)) {
                        fail(nameTok, "unknown operation '" + name + "'");
                    }
                    std::vector<ExprPtr> args = argList();
                    e = make(nameTok.line, nameTok.column,
                             OperationCall{std::move(e), std::move(name), std::move(args)});
                } else {
                    bool atPre = false;
                    if (peek().isPunct("@")) {
                        const Token& at = next();
                        if (!acceptIdent("pre")) fail(peek(), "expected 'pre' after '@'", {"pre"});
                        if (!allowAtPre_) {
                            fail(at, "@pre is only allowed inside postconditions");
                        }
                        atPre = true;
                    }
                    e = make(nameTok.line, nameTok.column,
                             PropertyNav{std::move(e), std::move(name), atPre});
                }
            } else if (peek().isPunct("->")) {
                next();
                const Token& nameTok = peek();
                std::string name = expectName("collection operation name");
                if (!peek().isPunct("(")) {
                    fail(peek(), "expected '(' after '->" + name + "'", {"("});
                }
                if (name == "iterate") {
                    e = parseIterate(std::move(e), nameTok);
                } else if (kIteratorOps.count(name)) {
                    e = parseIterator(std::move(e), std::move(name), nameTok);
                } else if (kArrowOps.count(name)) {
                    std::vector<ExprPtr> args = argList();
                    e = make(nameTok.line, nameTok.column,
                             ArrowCall{std::move(e), std::move(name), std::move(args)});
                } else {
                    fail(nameTok, "unknown collection operation '" + name + "'");
                }
            } else {
                break;
            }
        }
        return e;
    }

    std::vector<ExprPtr> argList() {
        expectPunct("(");
        std::vector<ExprPtr> args;
        if (!peek().isPunct(")")) {
            while (true) {
                args.push_back(expression());
                if (!acceptPunct(",")) break;
            }
        }
        expectPunct(")");
        return args;
    }

    // c->name(body) | c->name(v | body) | c->name(v1, v2 | body)
    ExprPtr parseIterator(ExprPtr source, std::string name, const Token& nameTok) {
        expectPunct("(");
        std::vector<std::string> vars;
        std::size_t save = pos_;
        if (peek().type == Token::Type::Ident && !kReservedNames.count(peek().text)) {
            std::string first = next().text;
            if (acceptPunct(":")) expectType();
            if (acceptPunct("|")) {
                vars.push_back(std::move(first));
            } else if (peek().isPunct(",")) {
                next();
                std::string second = expectName("iterator variable");
                if (acceptPunct(":")) expectType();
                vars.push_back(std::move(first));
                vars.push_back(std::move(second));
                expectPunct("|");
            } else {
                pos_ = save; // no declared variables; whole content is the body
            }
        }
        std::size_t maxVars = (name == "forAll" || name == "exists") ? 2 : 1;
        if (vars.size() > maxVars) {
            fail(nameTok, "'" + name + "' admits at most " + std::to_string(maxVars) +
                              " iterator variable(s)");
        }
        ExprPtr body = expression();
        expectPunct(")");
        return make(nameTok.line, nameTok.column,
                    IteratorCall{std::move(source), std::move(name), std::move(vars),
                                 std::move(body)});
    }

    // c->iterate(v; acc = init | body)
    ExprPtr parseIterate(ExprPtr source, const Token& nameTok) {
        expectPunct("(");
        IterateCall call;
        call.source = std::move(source);
        call.var = expectName("iterator variable");
        if (acceptPunct(":")) expectType();
        expectPunct(";");
        call.acc = expectName("accumulator name");
        if (acceptPunct(":")) expectType();
        expectPunct("=");
        call.init = expression();
        expectPunct("|");
        call.body = expression();
        expectPunct(")");
        return make(nameTok.line, nameTok.column, std::move(call));
    }

    ExprPtr primary() {
        const Token& t = peek();
        switch (t.type) {
            case Token::Type::Int: {
                next();
                std::int64_t v = 0;
                std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                return make(t.line, t.column, IntLit{v});
            }
            case Token::Type::Real: {
                next();
                double v = 0;
                std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                return make(t.line, t.column, RealLit{v});
            }
            case Token::Type::String: {
                next();
                return make(t.line, t.column, StringLit{t.text});
            }
            case Token::Type::Ident: {
                if (t.text == "true" || t.text == "false") {
                    next();
                    return make(t.line, t.column, BoolLit{t.text == "true"});
                }
                if ((t.text == "Set" || t.text == "Bag" || t.text == "Sequence") &&
                    peek(1).isPunct("{")) {
                    return collectionLiteral();
                }
                if (t.text == "if") return ifExpression();
                if (t.text == "let") return letExpression();
                if (kReservedNames.count(t.text)) {
                    fail(t, "unexpected keyword '" + t.text + "'");
                }
                next();
                if (t.text == "result" && !allowResult_) {
                    fail(t, "'result' is only allowed in postconditions of operations "
                            "with a return type");
                }
                return make(t.line, t.column, VarRef{t.text});
            }
            case Token::Type::Punct:
                if (t.isPunct("(")) {
                    next();
                    ExprPtr e = expression();
                    expectPunct(")");
                    return e;
                }
                break;
            case Token::Type::End:
                break;
        }
        fail(t, "expected an expression", {"expression"});
    }

    ExprPtr collectionLiteral() {
        const Token& kindTok = next();
        CollKind kind = kindTok.text == "Set"
                            ? CollKind::Set
                            : (kindTok.text == "Bag" ? CollKind::Bag : CollKind::Sequence);
        expectPunct("{");
        std::vector<ExprPtr> elements;
        if (!peek().isPunct("}")) {
            while (true) {
                elements.push_back(expression());
                if (!acceptPunct(",")) break;
            }
        }
        expectPunct("}");
        return make(kindTok.line, kindTok.column, CollLit{kind, std::move(elements)});
    }

    ExprPtr ifExpression() {
        const Token& kw = next(); // if
        IfExpr node;
        node.cond = expression();
        if (!acceptIdent("then")) fail(peek(), "expected 'then'", {"then"});
        node.thenBranch = expression();
        if (!acceptIdent("else")) fail(peek(), "expected 'else'", {"else"});
        node.elseBranch = expression();
        if (!acceptIdent("endif")) fail(peek(), "expected 'endif'", {"endif"});
        return make(kw.line, kw.column, std::move(node));
    }

    ExprPtr letExpression() {
        const Token& kw = next(); // let
        LetExpr node;
        node.var = expectName("let variable");
        if (acceptPunct(":")) expectType();
        expectPunct("=");
        node.init = expression();
        if (!acceptIdent("in")) fail(peek(), "expected 'in'", {"in"});
        node.body = expression();
        return make(kw.line, kw.column, std::move(node));
    }
};

} // namespace

const char* to_string(BinOpKind op) {
    switch (op) {
        case BinOpKind::Add: return "+";
        case BinOpKind::Sub: return "-";
        case BinOpKind::Mul: return "*";
        case BinOpKind::Div: return "/";
        case BinOpKind::Lt: return "<";
        case BinOpKind::Le: return "<=";
        case BinOpKind::Gt: return ">";
        case BinOpKind::Ge: return ">=";
        case BinOpKind::Eq: return "=";
        case BinOpKind::Ne: return "<>";
        case BinOpKind::And: return "and";
        case BinOpKind::Or: return "or";
        case BinOpKind::Xor: return "xor";
        case BinOpKind::Implies: return "implies";
    }
    return "?";
}

std::vector<ContextDecl> parse_constraints(const std::string& text) {
    return Parser(text).parseFile();
}

ExprPtr parse_expression(const std::string& text) {
    return Parser(text).parseBareExpression();
}

} // namespace mvx::ocl
