#include "mvx/navex/parser.hpp"

#include <cctype>
#include <charconv>

#include "mvx/errors.hpp"
#include "mvx/token.hpp"

namespace mvx::navex {

namespace {

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
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
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
        if (c == '\'' || c == '"') {
            char quote = c;
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
                if (d == quote) {
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
        auto startsWith = [&](const char* p) {
            std::size_t len = std::char_traits<char>::length(p);
            return text.compare(i, len, p) == 0;
        };
        static const char* multi[] = {"===", "!==", "==", "!=", "<=", ">=", "&&", "||", "=>"};
        bool matched = false;
        for (const char* p : multi) {
            if (startsWith(p)) {
                tok.type = Token::Type::Punct;
                tok.text = p;
                advance(std::char_traits<char>::length(p));
                out.push_back(std::move(tok));
                matched = true;
                break;
            }
        }
        if (matched) continue;
        static const std::string singles = "()[]{},.:?$!<>+-*/%=";
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

    ExprPtr parse() {
        ExprPtr e = expression();
        if (peek().type != Token::Type::End) {
            fail(peek(), "trailing input after expression");
        }
        return e;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;

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
        if (!peek().isPunct(p)) fail(peek(), std::string("expected '") + p + "'", {p});
        next();
    }

    bool acceptPunct(const char* p) {
        if (peek().isPunct(p)) {
            next();
            return true;
        }
        return false;
    }

    std::string expectIdent(const char* what) {
        if (peek().type != Token::Type::Ident) {
            fail(peek(), std::string("expected ") + what, {"identifier"});
        }
        return next().text;
    }

    ExprPtr make(int line, int column, auto&& node) {
        auto e = std::make_unique<Expr>();
        e->node = std::forward<decltype(node)>(node);
        e->line = line;
        e->column = column;
        return e;
    }

    ExprPtr expression() { return conditional(); }

    ExprPtr conditional() {
        ExprPtr cond = orExpr();
        if (!peek().isPunct("?")) return cond;
        const Token& q = next();
        ExprPtr thenB = conditional();
        expectPunct(":");
        ExprPtr elseB = conditional();
        return make(q.line, q.column, Conditional{std::move(cond), std::move(thenB),
                                                  std::move(elseB)});
    }

    ExprPtr orExpr() {
        ExprPtr lhs = andExpr();
        while (peek().isPunct("||")) {
            const Token& op = next();
            lhs = make(op.line, op.column, BinaryOp{BinOpKind::Or, std::move(lhs), andExpr()});
        }
        return lhs;
    }

    ExprPtr andExpr() {
        ExprPtr lhs = eqExpr();
        while (peek().isPunct("&&")) {
            const Token& op = next();
            lhs = make(op.line, op.column, BinaryOp{BinOpKind::And, std::move(lhs), eqExpr()});
        }
        return lhs;
    }

    ExprPtr eqExpr() {
        ExprPtr lhs = relExpr();
        while (true) {
            BinOpKind kind;
            if (peek().isPunct("===")) kind = BinOpKind::EqStrict;
            else if (peek().isPunct("!==")) kind = BinOpKind::NeStrict;
            else if (peek().isPunct("==")) kind = BinOpKind::EqLoose;
            else if (peek().isPunct("!=")) kind = BinOpKind::NeLoose;
            else break;
            const Token& op = next();
            lhs = make(op.line, op.column, BinaryOp{kind, std::move(lhs), relExpr()});
        }
        return lhs;
    }

    ExprPtr relExpr() {
        ExprPtr lhs = addExpr();
        while (true) {
            BinOpKind kind;
            if (peek().isPunct("<=")) kind = BinOpKind::Le;
            else if (peek().isPunct(">=")) kind = BinOpKind::Ge;
            else if (peek().isPunct("<")) kind = BinOpKind::Lt;
            else if (peek().isPunct(">")) kind = BinOpKind::Gt;
            else break;
            const Token& op = next();
            lhs = make(op.line, op.column, BinaryOp{kind, std::move(lhs), addExpr()});
        }
        return lhs;
    }

    ExprPtr addExpr() {
        ExprPtr lhs = mulExpr();
        while (peek().isPunct("+") || peek().isPunct("-")) {
            const Token& op = next();
            BinOpKind kind = op.text == "+" ? BinOpKind::Add : BinOpKind::Sub;
            lhs = make(op.line, op.column, BinaryOp{kind, std::move(lhs), mulExpr()});
        }
        return lhs;
    }

    ExprPtr mulExpr() {
        ExprPtr lhs = unaryExpr();
        while (peek().isPunct("*") || peek().isPunct("/") || peek().isPunct("%")) {
            const Token& op = next();
            BinOpKind kind = op.text == "*" ? BinOpKind::Mul
                                            : (op.text == "/" ? BinOpKind::Div : BinOpKind::Mod);
            lhs = make(op.line, op.column, BinaryOp{kind, std::move(lhs), unaryExpr()});
        }
        return lhs;
    }

    ExprPtr unaryExpr() {
        if (peek().isPunct("!")) {
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
                bool dollar = false;
                if (peek().isPunct("$")) {
                    next();
                    dollar = true;
                    if (peek().type != Token::Type::Ident) {
                        fail(peek(), "expected identifier after '$'", {"identifier"});
                    }
                }
                const Token& nameTok = peek();
                std::string name = expectIdent("member name");
                e = make(nameTok.line, nameTok.column, Member{std::move(e), std::move(name),
                                                              dollar});
            } else if (peek().isPunct("(")) {
                const Token& open = peek();
                std::vector<ExprPtr> args = argList();
                e = make(open.line, open.column, Call{std::move(e), std::move(args)});
            } else if (peek().isPunct("[")) {
                const Token& open = next();
                ExprPtr index = expression();
                expectPunct("]");
                e = make(open.line, open.column, Index{std::move(e), std::move(index)});
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

    bool lambdaAhead() const {
        // IDENT =>  |  ( IDENT ) =>  |  ( IDENT , IDENT ) =>
        if (peek().type == Token::Type::Ident) return peek(1).isPunct("=>");
        if (!peek().isPunct("(")) return false;
        if (peek(1).type != Token::Type::Ident) return false;
        if (peek(2).isPunct(")")) return peek(3).isPunct("=>");
        if (peek(2).isPunct(",") && peek(3).type == Token::Type::Ident &&
            peek(4).isPunct(")")) {
            return peek(5).isPunct("=>");
        }
        return false;
    }

    ExprPtr lambda() {
        const Token& start = peek();
        Lambda node;
        if (start.isPunct("(")) {
            next();
            node.params.push_back(expectIdent("parameter name"));
            if (acceptPunct(",")) node.params.push_back(expectIdent("parameter name"));
            expectPunct(")");
        } else {
            node.params.push_back(expectIdent("parameter name"));
        }
        expectPunct("=>");
        node.body = expression();
        return make(start.line, start.column, std::move(node));
    }

    ExprPtr primary() {
        if (lambdaAhead()) return lambda();
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
                next();
                if (t.text == "true" || t.text == "false") {
                    return make(t.line, t.column, BoolLit{t.text == "true"});
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
                if (t.isPunct("[")) {
                    next();
                    ArrayLit node;
                    if (!peek().isPunct("]")) {
                        while (true) {
                            node.elements.push_back(expression());
                            if (!acceptPunct(",")) break;
                        }
                    }
                    expectPunct("]");
                    return make(t.line, t.column, std::move(node));
                }
                if (t.isPunct("{")) {
                    next();
                    RecordLit node;
                    if (!peek().isPunct("}")) {
                        while (true) {
                            const Token& keyStart = peek();
                            if (!acceptPunct("$")) {
                                fail(keyStart, "expected '$'-prefixed record key", {"$"});
                            }
                            std::string key = "$" + expectIdent("record key");
                            expectPunct(":");
                            node.fields.emplace_back(std::move(key), expression());
                            if (!acceptPunct(",")) break;
                        }
                    }
                    expectPunct("}");
                    return make(t.line, t.column, std::move(node));
                }
                break;
            case Token::Type::End:
                break;
        }
        fail(t, "expected an expression", {"expression"});
    }
};

} // namespace

const char* to_string(BinOpKind op) {
    switch (op) {
        case BinOpKind::EqStrict: return "===";
        case BinOpKind::NeStrict: return "!==";
        case BinOpKind::EqLoose: return "==";
        case BinOpKind::NeLoose: return "!=";
        case BinOpKind::Lt: return "<";
        case BinOpKind::Le: return "<=";
        case BinOpKind::Gt: return ">";
        case BinOpKind::Ge: return ">=";
        case BinOpKind::Add: return "+";
        case BinOpKind::Sub: return "-";
        case BinOpKind::Mul: return "*";
        case BinOpKind::Div: return "/";
        case BinOpKind::Mod: return "%";
        case BinOpKind::And: return "&&";
        case BinOpKind::Or: return "||";
    }
    return "?";
}

ExprPtr parse_navex(const std::string& text) { return Parser(text).parse(); }

} // namespace mvx::navex
