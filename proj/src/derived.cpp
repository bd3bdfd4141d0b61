#include "mvx/derived.hpp"

#include <algorithm>
#include <deque>

#include "mvx/errors.hpp"

namespace mvx {

namespace {

void validateRule(const DerivedRule& rule, const MetaModel& mm) {
    const MetaClass* cls = mm.findClass(rule.contextClass);
    if (!cls) {
        throw Error(ErrorKind::UnknownClass,
                    "derived rule targets unknown class '" + rule.contextClass + "'");
    }
    auto target = mm.findFeature(rule.contextClass, rule.targetAttribute);
    if (!target || !target->isAttribute()) {
        throw Error(ErrorKind::UnknownFeature,
                    "derived target '" + rule.contextClass + "." + rule.targetAttribute +
                        "' is not a declared attribute");
    }
    for (const auto& dep : rule.dependencies) {
        if (!mm.findFeature(rule.contextClass, dep)) {
            throw Error(ErrorKind::UnknownFeature,
                        "derived dependency '" + dep + "' is not a feature of " +
                            rule.contextClass);
        }
    }
}

/// Edge producer -> consumer when the producer's target feeds the
/// consumer's dependencies on a related class.
bool feeds(const DerivedRule& producer, const DerivedRule& consumer, const MetaModel& mm) {
    if (!mm.isKindOf(producer.contextClass, consumer.contextClass) &&
        !mm.isKindOf(consumer.contextClass, producer.contextClass)) {
        return false;
    }
    for (const auto& dep : consumer.dependencies) {
        if (dep == producer.targetAttribute) return true;
    }
    return false;
}

RtValue evalRule(const DerivedRule& rule, const Env& env, EvalTrace* trace) {
    if (rule.language == Language::Ocl) return eval_ocl(*rule.oclBody, env, trace);
    return eval_navex(*rule.navexBody, env, trace);
}

std::optional<Scalar> toScalar(const RtValue& v) {
    switch (v.kind()) {
        case RtValue::Kind::Bool: return Scalar{v.asBool()};
        case RtValue::Kind::Int: return Scalar{v.asInt()};
        case RtValue::Kind::Real: return Scalar{v.asReal()};
        case RtValue::Kind::Str: return Scalar{v.asStr()};
        default: return std::nullopt;
    }
}

/// Recomputes one rule for one object; returns the change event when the
/// recomputed value differs from the stored one.
std::optional<ChangeEvent> recompute(ModelStore& store, const DerivedRule& rule,
                                     const std::string& objectId, EvalTrace* trace) {
    Env env;
    env.snapshot = store.snapshot();
    env.contextBinding = RtValue::objRef(objectId);
    RtValue value = evalRule(rule, env, trace);
    std::vector<Scalar> values;
    if (!value.isNull()) {
        auto scalar = toScalar(value);
        if (!scalar) {
            if (trace) {
                trace->diagnostics.push_back("derived '" + rule.contextClass + "." +
                                             rule.targetAttribute +
                                             "' did not produce a storable value");
            }
            return std::nullopt;
        }
        values.push_back(std::move(*scalar));
    }
    return store.setValue(objectId, rule.targetAttribute, std::move(values));
}

} // namespace

DerivedPlan register_derived(std::vector<DerivedRule> rules, const MetaModel& mm) {
    for (const auto& rule : rules) validateRule(rule, mm);

    std::size_t n = rules.size();
    std::vector<std::vector<std::size_t>> consumers(n);
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t c = 0; c < n; ++c) {
            if (p != c && feeds(rules[p], rules[c], mm)) {
                consumers[p].push_back(c);
                ++indegree[c];
            }
        }
        // a rule depending on its own target is a self-cycle
        if (feeds(rules[p], rules[p], mm)) {
            throw Error(ErrorKind::CycleDetected,
                        "derived-rule cycle: [" + rules[p].targetAttribute + "]");
        }
    }

    DerivedPlan plan;
    std::vector<bool> emitted(n, false);
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!emitted[i] && indegree[i] == 0) {
                pick = i;
                break;
            }
        }
        if (pick == n) break;
        emitted[pick] = true;
        plan.rules.push_back(rules[pick]);
        for (std::size_t c : consumers[pick]) --indegree[c];
    }
    if (plan.rules.size() != n) {
        std::string cycle;
        for (std::size_t i = 0; i < n; ++i) {
            if (!emitted[i]) {
                if (!cycle.empty()) cycle += ", ";
                cycle += rules[i].targetAttribute;
            }
        }
        throw Error(ErrorKind::CycleDetected, "derived-rule cycle: [" + cycle + "]");
    }
    return plan;
}

std::vector<ChangeEvent> apply_update(ModelStore& store, const ChangeEvent& event,
                                      const DerivedPlan& plan, EvalTrace* trace) {
    std::vector<ChangeEvent> secondary;
    std::deque<ChangeEvent> queue{event};
    while (!queue.empty()) {
        ChangeEvent current = std::move(queue.front());
        queue.pop_front();
        const MObject* obj = store.find(current.objectId);
        if (!obj) continue;
        for (const auto& rule : plan.rules) {
            bool depends = std::find(rule.dependencies.begin(), rule.dependencies.end(),
                                     current.featureName) != rule.dependencies.end();
            if (!depends) continue;
            if (!store.metamodel().isKindOf(obj->className, rule.contextClass)) continue;
            auto produced = recompute(store, rule, current.objectId, trace);
            if (produced) {
                secondary.push_back(*produced);
                queue.push_back(std::move(*produced));
            }
        }
    }
    return secondary;
}

std::vector<ChangeEvent> recompute_all(ModelStore& store, const DerivedPlan& plan,
                                       EvalTrace* trace) {
    std::vector<ChangeEvent> events;
    for (const auto& rule : plan.rules) {
        for (const auto& id : store.allInstanceIds(rule.contextClass, true)) {
            auto produced = recompute(store, rule, id, trace);
            if (produced) events.push_back(std::move(*produced));
        }
    }
    return events;
}

} // namespace mvx
