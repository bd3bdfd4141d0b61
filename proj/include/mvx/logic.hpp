#pragma once

#include "mvx/value.hpp"

namespace mvx {

/// Four-valued logic domain. Truth tables follow the standard OCL annex:
/// and/or/implies have determining operands (False and x = False,
/// True or x = True, False implies x = True); xor is strict in Null and
/// Invalid; not maps Null to Null and Invalid to Invalid.
enum class Truth { True, False, Null, Invalid };

const char* to_string(Truth t);

/// Folds an arbitrary RtValue into the logic domain: Bool keeps its truth,
/// Null and Invalid keep their tag, anything else is Invalid.
Truth truth_of(const RtValue& value);
RtValue truth_to_value(Truth t);

Truth logic_and(Truth a, Truth b);
Truth logic_or(Truth a, Truth b);
Truth logic_xor(Truth a, Truth b);
Truth logic_implies(Truth a, Truth b);
Truth logic_not(Truth a);

} // namespace mvx
