#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvx/errors.hpp"
#include "mvx/eval.hpp"
#include "mvx/meta.hpp"
#include "mvx/model.hpp"
#include "mvx/navex/parser.hpp"
#include "mvx/value.hpp"

using namespace mvx;

namespace {

StorePtr shopStore() {
    static StorePtr store = [] {
        auto mm = load_metamodel(R"({
          "name": "shop",
          "classes": [
            {"name": "Order",
             "attributes": [{"name": "totalPrice", "type": "Real", "lower": 1, "upper": 1}],
             "references": [{"name": "items", "target": "Item", "lower": 0, "upper": -1, "containment": true}]},
            {"name": "Item",
             "attributes": [
               {"name": "price", "type": "Real", "lower": 1, "upper": 1},
               {"name": "name", "type": "String", "lower": 0, "upper": 1}]}
          ]
        })");
        return load_model(R"({
          "objects": [
            {"id": "O0001", "class": "Order", "slots": {"totalPrice": 0, "items": []}},
            {"id": "O2", "class": "Order", "slots": {"totalPrice": 5.0, "items": ["i1", "i2"]}},
            {"id": "i1", "class": "Item", "slots": {"price": 2.0, "name": "apple"}},
            {"id": "i2", "class": "Item", "slots": {"price": 3.0, "name": "pear"}}
          ]
        })",
                          mm)
            .snapshot();
    }();
    return store;
}

StorePtr diagramStore() {
    static StorePtr store = [] {
        auto mm = load_metamodel(R"({
          "name": "classdiagram",
          "classes": [
            {"name": "Feature", "abstract": true,
             "attributes": [{"name": "name", "type": "String", "lower": 1, "upper": 1}]},
            {"name": "Attribute", "supers": ["Feature"]},
            {"name": "Operation", "supers": ["Feature"]},
            {"name": "Class",
             "attributes": [{"name": "name", "type": "String", "lower": 1, "upper": 1}],
             "references": [
               {"name": "ownedFeatures", "target": "Feature", "lower": 0, "upper": -1, "containment": true},
               {"name": "ownedAttributes", "target": "Attribute", "lower": 0, "upper": -1},
               {"name": "ownedOperations", "target": "Operation", "lower": 0, "upper": -1}]}
          ]
        })");
        return load_model(R"({
          "objects": [
            {"id": "Person", "class": "Class", "slots": {
               "name": "Person",
               "ownedFeatures": ["att_name", "att_surname", "att_age", "op_birthday"],
               "ownedAttributes": ["att_name", "att_surname", "att_age"],
               "ownedOperations": ["op_birthday"]}},
            {"id": "att_name", "class": "Attribute", "slots": {"name": "name"}},
            {"id": "att_surname", "class": "Attribute", "slots": {"name": "surname"}},
            {"id": "att_age", "class": "Attribute", "slots": {"name": "age"}},
            {"id": "op_birthday", "class": "Operation", "slots": {"name": "birthday"}}
          ]
        })",
                          mm)
            .snapshot();
    }();
    return store;
}

std::string ev(const StorePtr& store, const std::string& text, const std::string& ctx = "") {
    Env env;
    env.snapshot = store;
    env.contextBinding = ctx.empty() ? RtValue::storeRef() : RtValue::objRef(ctx);
    auto ast = navex::parse_navex(text);
    return render_value(eval_navex(*ast, env));
}

std::string evShop(const std::string& text, const std::string& ctx = "") {
    return ev(shopStore(), text, ctx);
}

} // namespace

TEST_CASE("arithmetic keeps integer results where JavaScript would show no fraction") {
    CHECK(evShop("1 + 2") == "3");
    CHECK(evShop("2 * 3.5") == "7.0");
    CHECK(evShop("7 - 9") == "-2");
    CHECK(evShop("6 / 3") == "2");
    CHECK(evShop("1 / 4") == "0.25");
    CHECK(evShop("1 / 0") == "invalid");
    CHECK(evShop("17 % 5") == "2");
    CHECK(evShop("7.25 % 1") == "0.25");
    CHECK(evShop("17 % 0") == "invalid");
    CHECK(evShop("-(2 + 3)") == "-5");
    CHECK(evShop("\"a\" + \"b\"") == "'ab'");
    CHECK(evShop("\"a\" + 1") == "invalid");
}

TEST_CASE("strict equality separates kinds, loose equality coerces numerics") {
    CHECK(evShop("0 === 0") == "true");
    CHECK(evShop("0 === 0.0") == "false");
    CHECK(evShop("0 == 0.0") == "true");
    CHECK(evShop("1 !== 2") == "true");
    CHECK(evShop("\"1\" == 1") == "false");
    CHECK(evShop("[1, 2] === [1, 2]") == "true");
    CHECK(evShop("[1, 2] === [2, 1]") == "false");
}

TEST_CASE("logical connectives follow the four-valued tables") {
    CHECK(evShop("true && false || true") == "true");
    CHECK(evShop("!(1 > 2)") == "true");
    CHECK(evShop("false && 1 / 0 === 0") == "false");
    CHECK(evShop("true || 1 / 0 === 0") == "true");
    CHECK(evShop("1 / 0 === 0 && true") == "invalid");
    CHECK(evShop("data.$name.value && true", "i2") == "invalid");
}

TEST_CASE("ternary requires a defined boolean test") {
    CHECK(evShop("1 < 2 ? \"yes\" : \"no\"") == "'yes'");
    CHECK(evShop("1 > 2 ? 1 / 0 : \"no\"") == "'no'");
    CHECK(evShop("5 ? 1 : 2") == "invalid");
}

TEST_CASE("dollar access yields slot handles with value and values") {
    CHECK(evShop("data.$totalPrice.value", "O2") == "5.0");
    CHECK(evShop("data.$items.values", "O2") == "Sequence{@i1, @i2}");
    CHECK(evShop("data.$items.values.length", "O0001") == "0");
    CHECK(evShop("data.$items.value", "O2") == "invalid");
    CHECK(evShop("data.$name.value", "O2") == "invalid");
    CHECK(evShop("data.$nothing", "O2") == "invalid");
}

TEST_CASE("an unset single-valued slot reads as null") {
    auto mm = shopStore()->metamodelPtr();
    auto store = load_model(R"({"objects": [
        {"id": "i9", "class": "Item", "slots": {"price": 1.0}}]})",
                            mm);
    CHECK(ev(store.snapshot(), "data.$name.value", "i9") == "null");
    CHECK(ev(store.snapshot(), "data.$name.values.length", "i9") == "0");
}

TEST_CASE("plain members read features and built-in object properties") {
    CHECK(evShop("data.id", "O2") == "'O2'");
    CHECK(evShop("data.instanceof", "O2") == "#Order");
    CHECK(evShop("data.instanceof.name", "O2") == "'Order'");
    CHECK(evShop("data.totalPrice", "O2") == "5.0");
    CHECK(evShop("data.items", "O2") == "Sequence{@i1, @i2}");
    CHECK(evShop("data.mystery", "O2") == "invalid");
}

TEST_CASE("parent walks containment up to the store") {
    CHECK(evShop("data.parent", "i1") == "@O2");
    CHECK(evShop("data.parent.id", "i1") == "'O2'");
    CHECK(evShop("data.parent.objects.length", "O2") == "4");
}

TEST_CASE("allInstances is reachable from instances and class names") {
    CHECK(evShop("Order.allInstances.length") == "2");
    CHECK(evShop("data.allInstances.length", "i1") == "2");
    CHECK(evShop("Order.allInstances", "") == "Set{@O0001, @O2}");
    CHECK(evShop("Order.name") == "'Order'");
}

TEST_CASE("indexing is zero-based and forgiving out of range") {
    CHECK(evShop("[\"a\", \"b\", \"c\"][1]") == "'b'");
    CHECK(evShop("[\"a\"][5]") == "null");
    CHECK(evShop("[\"a\"][0 - 1]") == "null");
    CHECK(evShop("\"abc\"[1]") == "'b'");
    CHECK(evShop("[\"a\"][\"x\"]") == "invalid");
}

TEST_CASE("collection methods mirror their JavaScript counterparts") {
    CHECK(evShop("data.$items.values.map(i => i.$price.value)", "O2") == "Sequence{2.0, 3.0}");
    CHECK(evShop("data.$items.values.filter(i => i.$price.value > 2.5)", "O2") == "Sequence{@i2}");
    CHECK(evShop("data.$items.values.find(i => i.$price.value > 2.5)", "O2") == "@i2");
    CHECK(evShop("data.$items.values.find(i => i.$price.value > 9)", "O2") == "null");
    CHECK(evShop("data.$items.values.some(i => i.$price.value > 2.5)", "O2") == "true");
    CHECK(evShop("data.$items.values.every(i => i.$price.value > 0)", "O2") == "true");
    CHECK(evShop("[1, 2, 3].reduce((a, b) => a + b, 0)") == "6");
    CHECK(evShop("[1, 2, 3].reduce((a, b) => a + b, 100)") == "106");
    CHECK(evShop("[1, 2, 3].includes(2)") == "true");
    CHECK(evShop("[1, 2, 3].includes(2.0)") == "false");
    CHECK(evShop("[\"a\", \"b\", \"c\"].indexOf(\"c\")") == "2");
    CHECK(evShop("[\"a\"].indexOf(\"z\")") == "-1");
    CHECK(evShop("[1, 2].concat([3])") == "Sequence{1, 2, 3}");
    CHECK(evShop("[1, 2].concat(3)") == "Sequence{1, 2, 3}");
    CHECK(evShop("[1, 2, 3, 4].slice(1, 3)") == "Sequence{2, 3}");
    CHECK(evShop("[1, 2, 3, 4].slice(0 - 2)") == "Sequence{3, 4}");
    CHECK(evShop("[[1, 2], [3]].flat()") == "Sequence{1, 2, 3}");
    CHECK(evShop("[[[1]]].flat()") == "Sequence{Sequence{1}}");
}

TEST_CASE("set-producing sources become sequences under transformation") {
    CHECK(evShop("Order.allInstances.filter(o => o.$totalPrice.value > 0)") == "Sequence{@O2}");
    CHECK(evShop("Order.allInstances.filter(o => o.$totalPrice.value > 0).length") == "1");
    CHECK(evShop("Order.allInstances.map(o => o.id)") == "Sequence{'O0001', 'O2'}");
}

TEST_CASE("two-parameter callbacks receive the element index") {
    CHECK(evShop("[\"a\", \"b\"].map((x, i) => i)") == "Sequence{0, 1}");
    CHECK(evShop("[10, 20, 30].filter((x, i) => i > 0)") == "Sequence{20, 30}");
    CHECK(evShop("[1, 2, 2, 3].filter((x, i) => [1, 2, 2, 3].indexOf(x) === i)") ==
          "Sequence{1, 2, 3}");
}

TEST_CASE("predicates must stay defined for filter and find") {
    CHECK(evShop("[1, 2].filter(x => 1 / 0 === x)") == "invalid");
    CHECK(evShop("[1, 2].some(x => 1 / 0 === x)") == "invalid");
    CHECK(evShop("[].every(x => 1 / 0 === x)") == "true");
}

TEST_CASE("string methods track the JavaScript surface") {
    CHECK(evShop("\"Hello World\".length") == "11");
    CHECK(evShop("\"héllo\".length") == "5");
    CHECK(evShop("\"Hello World\".includes(\"World\")") == "true");
    CHECK(evShop("\"Hello World\".indexOf(\"World\")") == "6");
    CHECK(evShop("\"Hello\".indexOf(\"x\")") == "-1");
    CHECK(evShop("\"Hello \".concat(\"World\")") == "'Hello World'");
    CHECK(evShop("\"Hello World\".slice(0, 5)") == "'Hello'");
    CHECK(evShop("\"2026-08-15\".slice(0, 4)") == "'2026'");
    CHECK(evShop("\"abcdef\".slice(0 - 2)") == "'ef'");
}

TEST_CASE("lambdas capture their lexical scope") {
    CHECK(evShop("[1, 2].map(x => x + data.$totalPrice.value)", "O2") == "Sequence{6.0, 7.0}");
    CHECK(evShop("[[1, 2], [3, 4]].map(row => row.map(c => c * 10))") ==
          "Sequence{Sequence{10, 20}, Sequence{30, 40}}");
    CHECK(evShop("(x => x)(5)") == "5");
    CHECK(evShop("(x => x)()") == "null");
}

TEST_CASE("addObject creates objects on a private copy of the store") {
    std::string text =
        "data.parent.addObject({$id: \"O9\", $totalPrice: 0, $items: []}, 'Order')";
    CHECK(evShop(text, "O2") == "@O9");
    CHECK(evShop("Order.allInstances.length") == "2");
    CHECK(evShop("data.parent.addObject({$id: \"O2\"}, 'Order')", "O2") == "invalid");
    CHECK(evShop("data.parent.addObject({$id: \"x\"}, 'Ghost')", "O2") == "invalid");
}

TEST_CASE("executeQuery runs a nested query against the same snapshot") {
    CHECK(evShop("data.parent.executeQuery(\"Order.allInstances.length\")", "O2") == "2");
    CHECK(evShop("data.parent.executeQuery(\"1 +\")", "O2") == "invalid");
    CHECK(evShop("data.parent.executeQuery(42)", "O2") == "invalid");
}

TEST_CASE("the tutorial reflection chains work end to end") {
    CHECK(ev(diagramStore(), "data.$ownedAttributes.values.map(a => a.name)", "Person") ==
          "Sequence{'name', 'surname', 'age'}");
    CHECK(ev(diagramStore(),
             "data.$ownedFeatures.values.filter(f => f.instanceof.name === 'Attribute')",
             "Person") == "Sequence{@att_name, @att_surname, @att_age}");
    CHECK(ev(diagramStore(), "data.$ownedFeatures.values.length", "Person") == "4");
}

TEST_CASE("unknown members produce diagnostics, not crashes") {
    Env env;
    env.snapshot = shopStore();
    env.contextBinding = RtValue::objRef("O2");
    EvalTrace trace;
    auto ast = navex::parse_navex("data.$items.values.shuffle()");
    CHECK(eval_navex(*ast, env, &trace).isInvalid());
    REQUIRE_FALSE(trace.diagnostics.empty());
    CHECK(trace.diagnostics[0].find("shuffle") != std::string::npos);
}

TEST_CASE("execute_query handles the navex language at store scope") {
    auto result = execute_query(shopStore(), Language::Navex,
                                "Order.allInstances.filter(o => o.$totalPrice.value > 0)");
    CHECK(render_value(result) == "Sequence{@O2}");
    CHECK_THROWS_AS(execute_query(shopStore(), Language::Navex, "a ? b"), ParseError);
}
