#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <variant>

#include "mvx/errors.hpp"
#include "mvx/navex/parser.hpp"

using namespace mvx;
using namespace mvx::navex;

namespace {

bool equivalent(const char* a, const char* b) {
    return same_structure(*parse_navex(a), *parse_navex(b));
}

void checkRoundTrip(const char* text) {
    auto ast = parse_navex(text);
    std::string printed = print(*ast);
    CAPTURE(text);
    CAPTURE(printed);
    CHECK(same_structure(*parse_navex(printed), *ast));
}

} // namespace

TEST_CASE("the five tutorial navigation expressions parse") {
    for (const char* text : {
             "data.$ownedAttributes.values.map(a => a.name)",
             "data.$ownedFeatures.values.filter(f => f.instanceof.name === 'Attribute')",
             "data.$items.values.length > 0",
             "data.$totalPrice.value === data.$items.values.reduce((a, i) => a + i.$price.value, 0)",
             "data.$price.value > 0",
         }) {
        CAPTURE(text);
        CHECK_NOTHROW(parse_navex(text));
        checkRoundTrip(text);
    }
}

TEST_CASE("dollar members are marked reflective") {
    auto ast = parse_navex("data.$items.values");
    const auto& values = std::get<Member>(ast->node);
    CHECK(values.name == "values");
    CHECK_FALSE(values.dollar);
    const auto& items = std::get<Member>(values.source->node);
    CHECK(items.name == "items");
    CHECK(items.dollar);
}

TEST_CASE("operator precedence matches JavaScript") {
    CHECK(equivalent("1 + 2 * 3", "1 + (2 * 3)"));
    CHECK(equivalent("a || b && c", "a || (b && c)"));
    CHECK(equivalent("a === b || c", "(a === b) || c"));
    CHECK(equivalent("1 + 2 > 2 === true", "((1 + 2) > 2) === true"));
    CHECK(equivalent("!a === b", "(!a) === b"));
    CHECK(equivalent("a ? b : c ? d : e", "a ? b : (c ? d : e)"));
    CHECK(equivalent("17 - 17 % 5", "17 - (17 % 5)"));
}

TEST_CASE("loose and strict equality are distinct operators") {
    CHECK(std::get<BinaryOp>(parse_navex("a === b")->node).op == BinOpKind::EqStrict);
    CHECK(std::get<BinaryOp>(parse_navex("a == b")->node).op == BinOpKind::EqLoose);
    CHECK(std::get<BinaryOp>(parse_navex("a !== b")->node).op == BinOpKind::NeStrict);
    CHECK(std::get<BinaryOp>(parse_navex("a != b")->node).op == BinOpKind::NeLoose);
}

TEST_CASE("lambdas take one or two parameters") {
    auto oneAst = parse_navex("x => x + 1");
    const auto& one = std::get<Lambda>(oneAst->node);
    CHECK(one.params == std::vector<std::string>{"x"});

    auto parenAst = parse_navex("(x) => x");
    const auto& paren = std::get<Lambda>(parenAst->node);
    CHECK(paren.params == std::vector<std::string>{"x"});

    auto twoAst = parse_navex("(a, i) => a + i");
    const auto& two = std::get<Lambda>(twoAst->node);
    CHECK(two.params == std::vector<std::string>{"a", "i"});

    auto grouped = parse_navex("(x)");
    CHECK(std::holds_alternative<VarRef>(grouped->node));
}

TEST_CASE("calls, indexing, and members chain left to right") {
    auto ast = parse_navex("data.$items.values.filter(i => i.$price.value > 2.5).length");
    const auto& length = std::get<Member>(ast->node);
    CHECK(length.name == "length");
    const auto& call = std::get<Call>(length.source->node);
    CHECK(call.args.size() == 1);

    auto idx = parse_navex("[\"a\", \"b\"][1]");
    const auto& index = std::get<Index>(idx->node);
    CHECK(std::get<IntLit>(index.index->node).value == 1);
}

TEST_CASE("record literals require dollar keys") {
    auto ast = parse_navex("{$id: \"O0001\", $totalPrice: 0, $items: []}");
    const auto& rec = std::get<RecordLit>(ast->node);
    REQUIRE(rec.fields.size() == 3);
    CHECK(rec.fields[0].first == "$id");
    CHECK(rec.fields[2].first == "$items");
    CHECK_THROWS_AS(parse_navex("{id: 1}"), ParseError);
}

TEST_CASE("string literals accept both quote styles") {
    CHECK(std::get<StringLit>(parse_navex("'Attribute'")->node).value == "Attribute");
    CHECK(std::get<StringLit>(parse_navex("\"Attribute\"")->node).value == "Attribute");
    CHECK(std::get<StringLit>(parse_navex("\"a\\\"b\"")->node).value == "a\"b");
}

TEST_CASE("printing is a parseable canonical form") {
    for (const char* text : {
             "data.parent.addObject({$id: \"O0001\", $totalPrice: 0, $items: []}, 'Order')",
             "[1, 2, 3].reduce((acc, x) => acc + x, 0)",
             "x => x * -2",
             "a ? b + 1 : c[0]",
             "!(data.$totalPrice.value > 100) || data.$items.values.length > 0",
             "[[1, 2], [3]].flat()",
             "Person.allInstances.length",
             "data.parent.executeQuery(\"Order.allInstances\")",
         }) {
        checkRoundTrip(text);
    }
}

TEST_CASE("parse errors carry positions") {
    try {
        parse_navex("data.$items.");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() > 1);
    }
    CHECK_THROWS_AS(parse_navex(""), ParseError);
    CHECK_THROWS_AS(parse_navex("1 2"), ParseError);
    CHECK_THROWS_AS(parse_navex("a ? b"), ParseError);
    CHECK_THROWS_AS(parse_navex("[1, 2"), ParseError);
    CHECK_THROWS_AS(parse_navex("(a, b) => "), ParseError);
    CHECK_THROWS_AS(parse_navex("a => => b"), ParseError);
}
