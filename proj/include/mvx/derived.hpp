#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mvx/eval.hpp"

namespace mvx {

/// A derived-attribute rule: recompute contextClass.targetAttribute from
/// the declared dependency features. Exactly one of oclBody/navexBody is
/// set, matching `language`.
struct DerivedRule {
    std::string contextClass;
    std::string targetAttribute;
    std::vector<std::string> dependencies;
    Language language = Language::Ocl;
    std::string expressionText;

    std::shared_ptr<const ocl::Expr> oclBody;
    std::shared_ptr<const navex::Expr> navexBody;
};

/// Topologically ordered recomputation plan; order is stable with respect
/// to registration order among independent rules.
struct DerivedPlan {
    std::vector<DerivedRule> rules;
};

/// Validates rules against the metamodel (target and dependencies must be
/// declared features; Error(UnknownClass/UnknownFeature) otherwise) and
/// orders them; Error(CycleDetected) lists the cycle's target attributes.
DerivedPlan register_derived(std::vector<DerivedRule> rules, const MetaModel& metamodel);

/// Recomputes, in plan order, exactly those rules whose dependency list
/// contains the changed feature, on the changed object, transitively
/// through produced events. Returns the secondary change events.
std::vector<ChangeEvent> apply_update(ModelStore& store, const ChangeEvent& event,
                                      const DerivedPlan& plan, EvalTrace* trace = nullptr);

/// Initial full pass: recomputes every rule for every matching instance.
std::vector<ChangeEvent> recompute_all(ModelStore& store, const DerivedPlan& plan,
                                       EvalTrace* trace = nullptr);

} // namespace mvx
