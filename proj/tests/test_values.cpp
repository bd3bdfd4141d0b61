#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvx/value.hpp"

using namespace mvx;

namespace {

RtValue seq(std::vector<RtValue> elems) { return RtValue::coll(CollKind::Sequence, std::move(elems)); }

} // namespace

TEST_CASE("factories produce the advertised kinds") {
    CHECK(RtValue::invalid().isInvalid());
    CHECK(RtValue::null().isNull());
    CHECK(RtValue::boolean(true).asBool());
    CHECK(RtValue::integer(-3).asInt() == -3);
    CHECK(RtValue::real(2.5).asReal() == 2.5);
    CHECK(RtValue::str("hi").asStr() == "hi");
    CHECK(RtValue::objRef("o1").asObjRef().id == "o1");
    CHECK(RtValue::classRef("Order").asClassRef().name == "Order");
    CHECK(RtValue::storeRef().isStoreRef());

    CHECK(RtValue::null().isUndefined());
    CHECK(RtValue::invalid().isUndefined());
    CHECK_FALSE(RtValue::integer(0).isUndefined());
    CHECK(RtValue::integer(1).isNumeric());
    CHECK(RtValue::real(1.0).isNumeric());
    CHECK_FALSE(RtValue::str("1").isNumeric());
}

TEST_CASE("numeric accessor widens integers") {
    CHECK(RtValue::integer(4).numeric() == 4.0);
    CHECK(RtValue::real(4.5).numeric() == 4.5);
}

TEST_CASE("set construction deduplicates, first occurrence wins") {
    auto s = RtValue::coll(CollKind::Set,
                           {RtValue::integer(1), RtValue::integer(2), RtValue::integer(1)});
    CHECK(s.elements().size() == 2);
    CHECK(s.elements()[0].asInt() == 1);
    CHECK(s.elements()[1].asInt() == 2);

    auto b = RtValue::coll(CollKind::Bag,
                           {RtValue::integer(1), RtValue::integer(2), RtValue::integer(1)});
    CHECK(b.elements().size() == 3);
}

TEST_CASE("strict equality separates Int and Real, coercion joins them") {
    CHECK_FALSE(equals_strict(RtValue::integer(1), RtValue::real(1.0)));
    CHECK(equals_coercing(RtValue::integer(1), RtValue::real(1.0)));
    CHECK(equals_strict(RtValue::integer(1), RtValue::integer(1)));
    CHECK_FALSE(equals_coercing(RtValue::integer(1), RtValue::str("1")));
    CHECK_FALSE(equals_coercing(RtValue::boolean(true), RtValue::integer(1)));
}

TEST_CASE("undefined values compare equal to themselves only") {
    CHECK(equals_strict(RtValue::invalid(), RtValue::invalid()));
    CHECK(equals_strict(RtValue::null(), RtValue::null()));
    CHECK_FALSE(equals_strict(RtValue::null(), RtValue::invalid()));
    CHECK_FALSE(equals_coercing(RtValue::null(), RtValue::integer(0)));
}

TEST_CASE("sequence equality is ordered, bag equality is not") {
    auto ab = seq({RtValue::str("a"), RtValue::str("b")});
    auto ba = seq({RtValue::str("b"), RtValue::str("a")});
    CHECK_FALSE(equals_strict(ab, ba));

    auto bagAb = RtValue::coll(CollKind::Bag, {RtValue::str("a"), RtValue::str("b")});
    auto bagBa = RtValue::coll(CollKind::Bag, {RtValue::str("b"), RtValue::str("a")});
    CHECK(equals_strict(bagAb, bagBa));

    CHECK_FALSE(equals_strict(ab, bagAb));
}

TEST_CASE("normalized equality lets sequences and bags agree") {
    auto s = seq({RtValue::integer(1), RtValue::integer(2)});
    auto b = RtValue::coll(CollKind::Bag, {RtValue::integer(2), RtValue::real(1.0)});
    CHECK(equals_normalized(s, b));

    auto set = RtValue::coll(CollKind::Set, {RtValue::integer(1), RtValue::integer(2)});
    CHECK_FALSE(equals_normalized(s, set));
    CHECK(equals_normalized(set, set));

    auto s12 = seq({RtValue::integer(1), RtValue::integer(2)});
    auto s21 = seq({RtValue::integer(2), RtValue::integer(1)});
    CHECK_FALSE(equals_normalized(s12, s21));
}

TEST_CASE("render covers every kind") {
    CHECK(render_value(RtValue::invalid()) == "invalid");
    CHECK(render_value(RtValue::null()) == "null");
    CHECK(render_value(RtValue::boolean(false)) == "false");
    CHECK(render_value(RtValue::integer(42)) == "42");
    CHECK(render_value(RtValue::real(2.5)) == "2.5");
    CHECK(render_value(RtValue::real(7.0)) == "7.0");
    CHECK(render_value(RtValue::str("it's")) == "'it\\'s'");
    CHECK(render_value(RtValue::objRef("O0001")) == "@O0001");
    CHECK(render_value(RtValue::classRef("Order")) == "#Order");
    CHECK(render_value(seq({RtValue::integer(1), RtValue::str("x")})) == "Sequence{1, 'x'}");
    CHECK(render_value(RtValue::coll(CollKind::Set, {})) == "Set{}");
}

TEST_CASE("literal parsing inverts rendering") {
    std::vector<RtValue> samples = {
        RtValue::invalid(),
        RtValue::null(),
        RtValue::boolean(true),
        RtValue::boolean(false),
        RtValue::integer(0),
        RtValue::integer(-17),
        RtValue::real(0.25),
        RtValue::real(-3.5),
        RtValue::str(""),
        RtValue::str("hello world"),
        RtValue::str("quote ' inside"),
        RtValue::objRef("o12"),
        RtValue::classRef("Person"),
        seq({RtValue::integer(1), RtValue::integer(2), RtValue::integer(3)}),
        RtValue::coll(CollKind::Bag, {RtValue::str("a"), RtValue::str("a")}),
        RtValue::coll(CollKind::Set, {RtValue::objRef("i1"), RtValue::objRef("i2")}),
        seq({seq({RtValue::integer(1)}), seq({})}),
    };
    for (const auto& v : samples) {
        CAPTURE(render_value(v));
        CHECK(equals_strict(parse_value_literal(render_value(v)), v));
    }
}

TEST_CASE("literal parsing accepts surrounding whitespace and rejects garbage") {
    CHECK(parse_value_literal("  42 ").asInt() == 42);
    CHECK(parse_value_literal("Sequence{ 1 , 2 }").elements().size() == 2);
    CHECK_THROWS(parse_value_literal(""));
    CHECK_THROWS(parse_value_literal("fortytwo"));
    CHECK_THROWS(parse_value_literal("Sequence{1,"));
    CHECK_THROWS(parse_value_literal("'unterminated"));
    CHECK_THROWS(parse_value_literal("1 2"));
}
