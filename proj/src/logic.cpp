#include "mvx/logic.hpp"

namespace mvx {

const char* to_string(Truth t) {
    switch (t) {
        case Truth::True: return "true";
        case Truth::False: return "false";
        case Truth::Null: return "null";
        case Truth::Invalid: return "invalid";
    }
    return "?";
}

Truth truth_of(const RtValue& value) {
    switch (value.kind()) {
        case RtValue::Kind::Bool: return value.asBool() ? Truth::True : Truth::False;
        case RtValue::Kind::Null: return Truth::Null;
        default: return Truth::Invalid;
    }
}

RtValue truth_to_value(Truth t) {
    switch (t) {
        case Truth::True: return RtValue::boolean(true);
        case Truth::False: return RtValue::boolean(false);
        case Truth::Null: return RtValue::null();
        case Truth::Invalid: return RtValue::invalid();
    }
    return RtValue::invalid();
}

Truth logic_and(Truth a, Truth b) {
    if (a == Truth::False || b == Truth::False) return Truth::False;
    if (a == Truth::Invalid || b == Truth::Invalid) return Truth::Invalid;
    if (a == Truth::Null || b == Truth::Null) return Truth::Null;
    return Truth::True;
}

Truth logic_or(Truth a, Truth b) {
    if (a == Truth::True || b == Truth::True) return Truth::True;
    if (a == Truth::Invalid || b == Truth::Invalid) return Truth::Invalid;
    if (a == Truth::Null || b == Truth::Null) return Truth::Null;
    return Truth::False;
}

Truth logic_xor(Truth a, Truth b) {
    if (a == Truth::Invalid || b == Truth::Invalid) return Truth::Invalid;
    if (a == Truth::Null || b == Truth::Null) return Truth::Null;
    return (a == b) ? Truth::False : Truth::True;
}

Truth logic_implies(Truth a, Truth b) { return logic_or(logic_not(a), b); }

Truth logic_not(Truth a) {
    switch (a) {
        case Truth::True: return Truth::False;
        case Truth::False: return Truth::True;
        case Truth::Null: return Truth::Null;
        case Truth::Invalid: return Truth::Invalid;
    }
    return Truth::Invalid;
}

} // namespace mvx
