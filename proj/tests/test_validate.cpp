#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvx/errors.hpp"
#include "mvx/meta.hpp"
#include "mvx/model.hpp"
#include "mvx/validate.hpp"

using namespace mvx;

namespace {

StorePtr shopStore(const char* modelJson) {
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
    return load_model(modelJson, mm).snapshot();
}

StorePtr emptyOrderStore() {
    return shopStore(R"({"objects": [
        {"id": "O0001", "class": "Order", "slots": {"totalPrice": 0, "items": []}}]})");
}

StorePtr bothOrdersStore() {
    return shopStore(R"({"objects": [
        {"id": "O0001", "class": "Order", "slots": {"totalPrice": 0, "items": []}},
        {"id": "O2", "class": "Order", "slots": {"totalPrice": 5.0, "items": ["i1", "i2"]}},
        {"id": "i1", "class": "Item", "slots": {"price": 2.0, "name": "apple"}},
        {"id": "i2", "class": "Item", "slots": {"price": 3.0, "name": "pear"}}]})");
}

StorePtr peopleStore() {
    auto mm = load_metamodel(R"({
      "name": "people",
      "classes": [
        {"name": "Person",
         "attributes": [
           {"name": "name", "type": "String", "lower": 1, "upper": 1},
           {"name": "middleName", "type": "String", "lower": 0, "upper": 1},
           {"name": "age", "type": "Integer", "lower": 0, "upper": 1}]},
        {"name": "Student", "supers": ["Person"],
         "attributes": [{"name": "school", "type": "String", "lower": 0, "upper": 1}]}
      ]
    })");
    return load_model(R"({"objects": [
        {"id": "p1", "class": "Person", "slots": {"name": "Ada", "middleName": "K", "age": 36}},
        {"id": "p2", "class": "Person", "slots": {"name": "Grace", "age": 45}},
        {"id": "p3", "class": "Student", "slots": {"name": "Alan", "age": 21, "school": "Sherborne"}}]})",
                      mm)
        .snapshot();
}

Constraint oclC(const StorePtr& store, const std::string& name, const std::string& context,
               const std::string& body, Severity sev = Severity::Error,
               const std::string& applicability = "") {
    return make_constraint(name, Language::Ocl, context, sev, "message for " + name, body,
                           applicability, store->metamodel());
}

Constraint navexC(const StorePtr& store, const std::string& name, const std::string& context,
                  const std::string& body, const std::string& applicability = "") {
    return make_constraint(name, Language::Navex, context, Severity::Error,
                           "message for " + name, body, applicability, store->metamodel());
}

} // namespace

TEST_CASE("verdicts classify evaluation outcomes") {
    CHECK(verdict_of(RtValue::boolean(true)) == Verdict::True);
    CHECK(verdict_of(RtValue::boolean(false)) == Verdict::False);
    CHECK(verdict_of(RtValue::null()) == Verdict::Null);
    CHECK(verdict_of(RtValue::invalid()) == Verdict::Invalid);
    CHECK(verdict_of(RtValue::integer(1)) == Verdict::EvalError);
    CHECK(verdict_of(RtValue::str("true")) == Verdict::EvalError);
}

TEST_CASE("severity and verdict names round trip") {
    CHECK(std::string(to_string(Severity::Error)) == "error");
    CHECK(std::string(to_string(Severity::Warning)) == "warning");
    CHECK(severity_from_string("error") == Severity::Error);
    CHECK(severity_from_string("warning") == Severity::Warning);
    CHECK_FALSE(severity_from_string("fatal").has_value());
    CHECK(std::string(to_string(Verdict::EvalError)) == "eval-error");
    CHECK(std::string(to_string(Verdict::Null)) == "null");
}

TEST_CASE("make_constraint validates context class and expression text") {
    auto store = emptyOrderStore();
    CHECK_THROWS_AS(oclC(store, "x", "Basket", "true"), Error);
    try {
        oclC(store, "x", "Basket", "true");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownClass);
    }
    CHECK_THROWS_AS(oclC(store, "x", "Order", "self.items->"), ParseError);
    CHECK_THROWS_AS(navexC(store, "x", "Order", "data.$items."), ParseError);
    CHECK_THROWS_AS(oclC(store, "x", "Order", "true", Severity::Error, "self.items->"),
                    ParseError);

    auto c = oclC(store, "items-nonempty", "Order", "self.items->size() > 0");
    CHECK(c.oclBody != nullptr);
    CHECK(c.navexBody == nullptr);
    CHECK(c.oclApplicability == nullptr);
    CHECK(c.expressionText == "self.items->size() > 0");
}

TEST_CASE("check_invariant emits one entry per instance in insertion order") {
    auto store = bothOrdersStore();
    auto c = oclC(store, "items-nonempty", "Order", "self.items->size() > 0");
    auto entries = check_invariant(store, c);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].objectId == "O0001");
    CHECK(entries[0].verdict == Verdict::False);
    CHECK(entries[0].constraintName == "items-nonempty");
    CHECK(entries[0].message == "message for items-nonempty");
    CHECK(entries[1].objectId == "O2");
    CHECK(entries[1].verdict == Verdict::True);
}

TEST_CASE("context classes cover their subclasses") {
    auto store = peopleStore();
    auto c = oclC(store, "named", "Person", "self.name->size() > 0");
    auto entries = check_invariant(store, c);
    REQUIRE(entries.size() == 3);
    CHECK(entries[2].objectId == "p3");
    CHECK(entries[2].verdict == Verdict::True);

    auto onlyStudents = oclC(store, "schooled", "Student", "self.school.size() > 0");
    CHECK(check_invariant(store, onlyStudents).size() == 1);
}

TEST_CASE("applicability admits an instance only when strictly true") {
    auto store = peopleStore();
    auto c = oclC(store, "long-name", "Person", "self.name.size() > 3", Severity::Error,
                 "self.age > 30");
    auto entries = check_invariant(store, c);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].objectId == "p1");
    CHECK(entries[0].verdict == Verdict::False);
    CHECK(entries[1].objectId == "p2");
    CHECK(entries[1].verdict == Verdict::True);

    auto undef = oclC(store, "middle", "Person", "true", Severity::Error,
                     "self.middleName.size() > 0");
    auto filtered = check_invariant(store, undef);
    REQUIRE(filtered.size() == 1);
    CHECK(filtered[0].objectId == "p1");
}

TEST_CASE("non-boolean constraint bodies are reported, not hidden") {
    auto store = peopleStore();
    auto c = oclC(store, "odd", "Person", "self.middleName");
    auto entries = check_invariant(store, c);
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].verdict == Verdict::EvalError);
    CHECK(entries[1].verdict == Verdict::Null);
    CHECK(entries[2].verdict == Verdict::Null);

    auto inv = oclC(store, "div", "Person", "1 / 0 = 1");
    CHECK(check_invariant(store, inv)[0].verdict == Verdict::Invalid);
}

TEST_CASE("navex constraints validate through the same pipeline") {
    auto store = bothOrdersStore();
    auto c = navexC(store, "items-nonempty-js", "Order", "data.$items.values.length > 0");
    auto entries = check_invariant(store, c);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].verdict == Verdict::False);
    CHECK(entries[1].verdict == Verdict::True);

    auto gated = navexC(store, "gated", "Order", "data.$items.values.length > 0",
                        "data.$totalPrice.value > 0");
    auto filtered = check_invariant(store, gated);
    REQUIRE(filtered.size() == 1);
    CHECK(filtered[0].objectId == "O2");
    CHECK(filtered[0].verdict == Verdict::True);
}

TEST_CASE("validate_model concatenates in registry order and derives the overall flag") {
    auto store = emptyOrderStore();
    std::vector<Constraint> registry;
    registry.push_back(oclC(store, "items-nonempty", "Order", "self.items->size() > 0"));
    registry.push_back(oclC(store, "total-consistent", "Order",
                           "self.totalPrice = self.items->collect(i | i.price)->sum()"));
    registry.push_back(oclC(store, "price-positive", "Item", "self.price > 0"));

    auto report = validate_model(store, registry);
    REQUIRE(report.entries.size() == 2);
    CHECK(report.entries[0].constraintName == "items-nonempty");
    CHECK(report.entries[0].verdict == Verdict::False);
    CHECK(report.entries[1].constraintName == "total-consistent");
    CHECK(report.entries[1].verdict == Verdict::True);
    CHECK_FALSE(report.overall);

    int falseCount = 0;
    for (const auto& e : report.entries) {
        if (e.verdict == Verdict::False) ++falseCount;
    }
    CHECK(falseCount == 1);
}

TEST_CASE("warnings never flip the overall outcome") {
    auto store = emptyOrderStore();
    std::vector<Constraint> registry;
    registry.push_back(
        oclC(store, "soft", "Order", "self.items->size() > 0", Severity::Warning));
    auto report = validate_model(store, registry);
    REQUIRE(report.entries.size() == 1);
    CHECK(report.entries[0].verdict == Verdict::False);
    CHECK(report.entries[0].severity == Severity::Warning);
    CHECK(report.overall);

    registry.push_back(oclC(store, "hard", "Order", "self.items->size() > 0"));
    CHECK_FALSE(validate_model(store, registry).overall);
}

TEST_CASE("undefined verdicts on error constraints fail the model") {
    auto store = peopleStore();
    std::vector<Constraint> registry;
    registry.push_back(oclC(store, "null-check", "Person", "self.middleName.size() > 0"));
    auto report = validate_model(store, registry);
    CHECK_FALSE(report.overall);
    CHECK(report.entries[1].verdict == Verdict::Invalid);
}

TEST_CASE("an empty registry and an empty extent both pass") {
    auto store = emptyOrderStore();
    CHECK(validate_model(store, {}).overall);
    auto c = oclC(store, "price-positive", "Item", "self.price > 0");
    CHECK(check_invariant(store, c).empty());
}
