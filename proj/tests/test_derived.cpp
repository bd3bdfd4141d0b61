#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvx/derived.hpp"
#include "mvx/errors.hpp"
#include "mvx/meta.hpp"
#include "mvx/model.hpp"
#include "mvx/navex/parser.hpp"
#include "mvx/ocl/parser.hpp"
#include "mvx/registry.hpp"

using namespace mvx;

namespace {

MetaModelPtr payrollMeta() {
    static MetaModelPtr mm = load_metamodel(R"({
      "name": "payroll",
      "classes": [
        {"name": "Employee",
         "attributes": [
           {"name": "name", "type": "String", "lower": 0, "upper": 1},
           {"name": "grossSalary", "type": "Real", "lower": 1, "upper": 1},
           {"name": "tax", "type": "Real", "lower": 1, "upper": 1},
           {"name": "taxed", "type": "Real", "lower": 0, "upper": 1},
           {"name": "netSalary", "type": "Real", "lower": 0, "upper": 1},
           {"name": "bonus", "type": "Real", "lower": 0, "upper": 1}]}
      ]
    })");
    return mm;
}

ModelStore payrollStore() {
    return load_model(R"({"objects": [
        {"id": "e1", "class": "Employee",
         "slots": {"name": "Eve", "grossSalary": 1000.0, "tax": 200.0}}]})",
                      payrollMeta());
}

DerivedRule oclRule(const std::string& context, const std::string& target,
                    std::vector<std::string> deps, const std::string& body) {
    DerivedRule rule;
    rule.contextClass = context;
    rule.targetAttribute = target;
    rule.dependencies = std::move(deps);
    rule.language = Language::Ocl;
    rule.expressionText = body;
    rule.oclBody = ocl::parse_expression(body);
    return rule;
}

DerivedRule netSalaryRule() {
    return oclRule("Employee", "netSalary", {"grossSalary", "tax"},
                   "self.grossSalary - self.tax");
}

double readReal(const ModelStore& store, const std::string& id, const std::string& feature) {
    auto h = store.getFeature(id, feature);
    REQUIRE(h.values.size() == 1);
    REQUIRE(h.values[0].isReal());
    return h.values[0].asReal();
}

} // namespace

TEST_CASE("registration validates classes, targets, and dependencies") {
    const auto& mm = *payrollMeta();
    CHECK_THROWS_AS(register_derived({oclRule("Ghost", "netSalary", {}, "1")}, mm), Error);
    try {
        register_derived({oclRule("Employee", "ghost", {}, "1")}, mm);
        FAIL("unknown target accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownFeature);
    }
    try {
        register_derived({oclRule("Employee", "netSalary", {"ghost"}, "1")}, mm);
        FAIL("unknown dependency accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownFeature);
    }
}

TEST_CASE("cyclic rules are rejected with the offending targets") {
    const auto& mm = *payrollMeta();
    auto a = oclRule("Employee", "taxed", {"netSalary"}, "self.netSalary");
    auto b = oclRule("Employee", "netSalary", {"taxed"}, "self.taxed");
    try {
        register_derived({a, b}, mm);
        FAIL("cycle accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CycleDetected);
        CHECK(std::string(e.what()).find("taxed") != std::string::npos);
        CHECK(std::string(e.what()).find("netSalary") != std::string::npos);
    }
    CHECK_THROWS_AS(
        register_derived({oclRule("Employee", "taxed", {"taxed"}, "self.taxed")}, mm), Error);
}

TEST_CASE("plans order producers before consumers regardless of registration order") {
    const auto& mm = *payrollMeta();
    auto downstream =
        oclRule("Employee", "netSalary", {"grossSalary", "taxed"}, "self.grossSalary - self.taxed");
    auto upstream = oclRule("Employee", "taxed", {"grossSalary"},
                            "self.grossSalary * 0.2");
    auto plan = register_derived({downstream, upstream}, mm);
    REQUIRE(plan.rules.size() == 2);
    CHECK(plan.rules[0].targetAttribute == "taxed");
    CHECK(plan.rules[1].targetAttribute == "netSalary");
}

TEST_CASE("recompute_all fills derived slots and is idempotent") {
    auto store = payrollStore();
    auto plan = register_derived({netSalaryRule()}, *payrollMeta());

    auto events = recompute_all(store, plan);
    REQUIRE(events.size() == 1);
    CHECK(events[0].objectId == "e1");
    CHECK(events[0].featureName == "netSalary");
    CHECK(events[0].oldValues.empty());
    REQUIRE(events[0].newValues.size() == 1);
    CHECK(readReal(store, "e1", "netSalary") == 800.0);

    CHECK(recompute_all(store, plan).empty());
}

TEST_CASE("a dependency change triggers exactly one recomputation") {
    auto store = payrollStore();
    auto plan = register_derived({netSalaryRule()}, *payrollMeta());
    recompute_all(store, plan);

    auto change = store.setValue("e1", "tax", {Scalar{300.0}});
    REQUIRE(change.has_value());
    auto secondary = apply_update(store, *change, plan);
    REQUIRE(secondary.size() == 1);
    CHECK(secondary[0].featureName == "netSalary");
    CHECK(readReal(store, "e1", "netSalary") == 700.0);
}

TEST_CASE("non-dependency changes trigger nothing") {
    auto store = payrollStore();
    auto plan = register_derived({netSalaryRule()}, *payrollMeta());
    recompute_all(store, plan);

    auto change = store.setValue("e1", "name", {Scalar{std::string("Evelyn")}});
    REQUIRE(change.has_value());
    CHECK(apply_update(store, *change, plan).empty());
    CHECK(readReal(store, "e1", "netSalary") == 800.0);
}

TEST_CASE("updates cascade through chains of derived attributes") {
    auto store = payrollStore();
    auto taxedRule = oclRule("Employee", "taxed", {"grossSalary"}, "self.grossSalary * 0.5");
    auto netRule = oclRule("Employee", "netSalary", {"grossSalary", "taxed"},
                           "self.grossSalary - self.taxed");
    auto plan = register_derived({netRule, taxedRule}, *payrollMeta());
    recompute_all(store, plan);
    CHECK(readReal(store, "e1", "taxed") == 500.0);
    CHECK(readReal(store, "e1", "netSalary") == 500.0);

    auto change = store.setValue("e1", "grossSalary", {Scalar{2000.0}});
    auto secondary = apply_update(store, *change, plan);
    CHECK(secondary.size() == 2);
    CHECK(readReal(store, "e1", "taxed") == 1000.0);
    CHECK(readReal(store, "e1", "netSalary") == 1000.0);
}

TEST_CASE("derived rules work in the navigation language too") {
    auto store = payrollStore();
    DerivedRule rule;
    rule.contextClass = "Employee";
    rule.targetAttribute = "netSalary";
    rule.dependencies = {"grossSalary", "tax"};
    rule.language = Language::Navex;
    rule.expressionText = "data.$grossSalary.value - data.$tax.value";
    rule.navexBody = navex::parse_navex(rule.expressionText);

    auto plan = register_derived({rule}, *payrollMeta());
    recompute_all(store, plan);
    CHECK(readReal(store, "e1", "netSalary") == 800.0);

    auto change = store.setValue("e1", "tax", {Scalar{300.0}});
    auto secondary = apply_update(store, *change, plan);
    REQUIRE(secondary.size() == 1);
    CHECK(readReal(store, "e1", "netSalary") == 700.0);
}

TEST_CASE("a null result clears the derived slot") {
    auto store = payrollStore();
    store.setValue("e1", "netSalary", {Scalar{5.0}});
    auto plan = register_derived(
        {oclRule("Employee", "netSalary", {"bonus"}, "self.bonus")}, *payrollMeta());
    auto events = recompute_all(store, plan);
    REQUIRE(events.size() == 1);
    CHECK(events[0].newValues.empty());
    CHECK(store.getFeature("e1", "netSalary").values.empty());
}

TEST_CASE("non-storable results leave the slot alone and explain why") {
    auto store = payrollStore();
    auto plan = register_derived(
        {oclRule("Employee", "netSalary", {"grossSalary"}, "Sequence{1, 2}")}, *payrollMeta());
    EvalTrace trace;
    auto events = recompute_all(store, plan, &trace);
    CHECK(events.empty());
    CHECK(store.getFeature("e1", "netSalary").values.empty());
    REQUIRE_FALSE(trace.diagnostics.empty());
    CHECK(trace.diagnostics.back().find("storable") != std::string::npos);
}

TEST_CASE("registry text declares derivations with inferred dependencies") {
    auto reg = load_registry(
        "context Employee::netSalary: Number derive: self.grossSalary - self.tax\n",
        payrollMeta());
    REQUIRE(reg.derived.size() == 1);
    const auto& rule = reg.derived.front();
    CHECK(rule.contextClass == "Employee");
    CHECK(rule.targetAttribute == "netSalary");
    REQUIRE(rule.dependencies.size() == 2);
    CHECK(rule.dependencies[0] == "grossSalary");
    CHECK(rule.dependencies[1] == "tax");

    auto store = payrollStore();
    auto plan = register_derived(reg.derived, *payrollMeta());
    recompute_all(store, plan);
    CHECK(readReal(store, "e1", "netSalary") == 800.0);
}

TEST_CASE("dependency inference sees only direct self navigations") {
    auto body = ocl::parse_expression(
        "self.grossSalary - self.tax + self.grossSalary.abs() + self.items->collect(i | i.price)->sum()");
    auto deps = infer_self_dependencies(*body);
    REQUIRE(deps.size() == 3);
    CHECK(deps[0] == "grossSalary");
    CHECK(deps[1] == "tax");
    CHECK(deps[2] == "items");
}
