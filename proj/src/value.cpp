#include "mvx/value.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "mvx/errors.hpp"
#include "mvx/util.hpp"

namespace mvx {

const char* to_string(CollKind kind) {
    switch (kind) {
        case CollKind::Set: return "Set";
        case CollKind::Bag: return "Bag";
        case CollKind::Sequence: return "Sequence";
    }
    return "?";
}

RtValue RtValue::coll(CollKind kind, std::vector<RtValue> elements) {
    if (kind == CollKind::Set) {
        std::vector<RtValue> unique;
        unique.reserve(elements.size());
        for (auto& e : elements) {
            bool dup = false;
            for (const auto& u : unique) {
                if (equals_coercing(u, e)) {
                    dup = true;
                    break;
                }
            }
            if (!dup) unique.push_back(std::move(e));
        }
        elements = std::move(unique);
    }
    Collection c;
    c.kind = kind;
    c.elements = std::make_shared<const std::vector<RtValue>>(std::move(elements));
    return RtValue(std::move(c));
}

namespace {

using EqFn = bool (*)(const RtValue&, const RtValue&);

bool sequences_equal(const std::vector<RtValue>& a, const std::vector<RtValue>& b, EqFn eq) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!eq(a[i], b[i])) return false;
    }
    return true;
}

bool multisets_equal(const std::vector<RtValue>& a, const std::vector<RtValue>& b, EqFn eq) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& x : a) {
        bool found = false;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (!used[j] && eq(x, b[j])) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

bool scalar_equal(const RtValue& a, const RtValue& b, bool coerce) {
    switch (a.kind()) {
        case RtValue::Kind::Invalid:
        case RtValue::Kind::Null:
        case RtValue::Kind::StoreRef:
            return a.kind() == b.kind();
        case RtValue::Kind::Bool:
            return b.isBool() && a.asBool() == b.asBool();
        case RtValue::Kind::Int:
            if (b.isInt()) return a.asInt() == b.asInt();
            if (coerce && b.isReal()) return static_cast<double>(a.asInt()) == b.asReal();
            return false;
        case RtValue::Kind::Real:
            if (b.isReal()) return a.asReal() == b.asReal();
            if (coerce && b.isInt()) return a.asReal() == static_cast<double>(b.asInt());
            return false;
        case RtValue::Kind::Str:
            return b.isStr() && a.asStr() == b.asStr();
        case RtValue::Kind::ObjRef:
            return b.isObjRef() && a.asObjRef().id == b.asObjRef().id;
        case RtValue::Kind::ClassRef:
            return b.isClassRef() && a.asClassRef().name == b.asClassRef().name;
        case RtValue::Kind::SlotHandle:
            return b.isSlotHandle() && a.asSlotHandle().objectId == b.asSlotHandle().objectId &&
                   a.asSlotHandle().feature == b.asSlotHandle().feature;
        case RtValue::Kind::Closure:
            return false;
        case RtValue::Kind::Coll:
            return false; // handled by callers
    }
    return false;
}

} // namespace

bool equals_strict(const RtValue& a, const RtValue& b) {
    if (a.isColl() || b.isColl()) {
        if (!a.isColl() || !b.isColl()) return false;
        if (a.asColl().kind != b.asColl().kind) return false;
        if (a.asColl().kind == CollKind::Sequence) {
            return sequences_equal(a.elements(), b.elements(), &equals_strict);
        }
        return multisets_equal(a.elements(), b.elements(), &equals_strict);
    }
    return scalar_equal(a, b, /*coerce=*/false);
}

bool equals_coercing(const RtValue& a, const RtValue& b) {
    if (a.isColl() || b.isColl()) {
        if (!a.isColl() || !b.isColl()) return false;
        if (a.asColl().kind != b.asColl().kind) return false;
        if (a.asColl().kind == CollKind::Sequence) {
            return sequences_equal(a.elements(), b.elements(), &equals_coercing);
        }
        return multisets_equal(a.elements(), b.elements(), &equals_coercing);
    }
    return scalar_equal(a, b, /*coerce=*/true);
}

bool equals_normalized(const RtValue& a, const RtValue& b) {
    if (a.isColl() || b.isColl()) {
        if (!a.isColl() || !b.isColl()) return false;
        CollKind ka = a.asColl().kind;
        CollKind kb = b.asColl().kind;
        bool orderedPair = ka == CollKind::Sequence && kb == CollKind::Sequence;
        bool comparable = ka == kb || (ka != CollKind::Set && kb != CollKind::Set);
        if (!comparable) return false;
        if (orderedPair) {
            return sequences_equal(a.elements(), b.elements(), &equals_normalized);
        }
        return multisets_equal(a.elements(), b.elements(), &equals_normalized);
    }
    return scalar_equal(a, b, /*coerce=*/true);
}

namespace {

std::string quote_string(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    out += '\'';
    return out;
}

} // namespace

std::string render_value(const RtValue& value) {
    switch (value.kind()) {
        case RtValue::Kind::Invalid: return "invalid";
        case RtValue::Kind::Null: return "null";
        case RtValue::Kind::Bool: return value.asBool() ? "true" : "false";
        case RtValue::Kind::Int: return std::to_string(value.asInt());
        case RtValue::Kind::Real: return format_real(value.asReal());
        case RtValue::Kind::Str: return quote_string(value.asStr());
        case RtValue::Kind::Coll: {
            std::string out = to_string(value.asColl().kind);
            out += '{';
            bool first = true;
            for (const auto& e : value.elements()) {
                if (!first) out += ", ";
                first = false;
                out += render_value(e);
            }
            out += '}';
            return out;
        }
        case RtValue::Kind::ObjRef: return "@" + value.asObjRef().id;
        case RtValue::Kind::ClassRef: return "#" + value.asClassRef().name;
        case RtValue::Kind::SlotHandle:
            return "$" + value.asSlotHandle().objectId + "." + value.asSlotHandle().feature;
        case RtValue::Kind::StoreRef: return "store";
        case RtValue::Kind::Closure: return "closure";
    }
    return "invalid";
}

namespace {

class LiteralParser {
public:
    explicit LiteralParser(const std::string& text) : text_(text) {}

    RtValue parse() {
        RtValue v = value();
        skipWs();
        if (pos_ != text_.size()) fail("trailing input after literal");
        return v;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError(1, static_cast<int>(pos_) + 1, what);
    }

    void skipWs() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool eatWord(const char* w) {
        std::size_t n = std::char_traits<char>::length(w);
        if (text_.compare(pos_, n, w) == 0) {
            std::size_t end = pos_ + n;
            if (end < text_.size() &&
                (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
                return false;
            }
            pos_ = end;
            return true;
        }
        return false;
    }

    std::string identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) fail("expected an identifier");
        return text_.substr(start, pos_ - start);
    }

    RtValue value() {
        skipWs();
        if (pos_ >= text_.size()) fail("expected a value literal");
        if (eatWord("invalid")) return RtValue::invalid();
        if (eatWord("null")) return RtValue::null();
        if (eatWord("true")) return RtValue::boolean(true);
        if (eatWord("false")) return RtValue::boolean(false);
        if (eatWord("Set")) return collection(CollKind::Set);
        if (eatWord("Bag")) return collection(CollKind::Bag);
        if (eatWord("Sequence")) return collection(CollKind::Sequence);
        char c = text_[pos_];
        if (c == '@') {
            ++pos_;
            return RtValue::objRef(identifier());
        }
        if (c == '#') {
            ++pos_;
            return RtValue::classRef(identifier());
        }
        if (c == '\'') return stringLiteral();
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return number();
        fail("unexpected character in literal");
    }

    RtValue collection(CollKind kind) {
        skipWs();
        if (!eat('{')) fail("expected '{'");
        std::vector<RtValue> elements;
        skipWs();
        if (!eat('}')) {
            while (true) {
                elements.push_back(value());
                skipWs();
                if (eat('}')) break;
                if (!eat(',')) fail("expected ',' or '}'");
            }
        }
        return RtValue::coll(kind, std::move(elements));
    }

    RtValue stringLiteral() {
        ++pos_; // opening quote
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '\'') {
            char c = text_[pos_++];
            if (c == '\\' && pos_ < text_.size()) {
                out += text_[pos_++];
            } else {
                out += c;
            }
        }
        if (pos_ >= text_.size()) fail("unterminated string literal");
        ++pos_; // closing quote
        return RtValue::str(out);
    }

    RtValue number() {
        std::size_t start = pos_;
        if (eat('-')) skipWs();
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        bool isReal = false;
        if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            isReal = true;
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        }
        std::string_view token(text_.data() + start, pos_ - start);
        if (isReal) {
            double d = 0;
            auto res = std::from_chars(token.data(), token.data() + token.size(), d);
            if (res.ec != std::errc{}) fail("malformed real literal");
            return RtValue::real(d);
        }
        std::int64_t i = 0;
        auto res = std::from_chars(token.data(), token.data() + token.size(), i);
        if (res.ec != std::errc{}) fail("malformed integer literal");
        return RtValue::integer(i);
    }
};

} // namespace

RtValue parse_value_literal(const std::string& text) {
    return LiteralParser(text).parse();
}

} // namespace mvx
