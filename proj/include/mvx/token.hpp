#pragma once

#include <string>
#include <vector>

namespace mvx {

struct Token {
    enum class Type { Ident, Int, Real, String, Punct, End };

    Type type = Type::End;
    std::string text;
    int line = 1;
    int column = 1;

    bool is(Type t, const char* s) const { return type == t && text == s; }
    bool isPunct(const char* s) const { return is(Type::Punct, s); }
    bool isIdent(const char* s) const { return is(Type::Ident, s); }
};

} // namespace mvx
