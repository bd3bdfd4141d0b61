#include "mvx/validate.hpp"

#include "mvx/errors.hpp"
#include "mvx/logic.hpp"
#include "mvx/navex/parser.hpp"
#include "mvx/ocl/parser.hpp"

namespace mvx {

const char* to_string(Severity s) { return s == Severity::Error ? "error" : "warning"; }

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::True: return "true";
        case Verdict::False: return "false";
        case Verdict::Null: return "null";
        case Verdict::Invalid: return "invalid";
        case Verdict::EvalError: return "eval-error";
    }
    return "?";
}

std::optional<Severity> severity_from_string(const std::string& name) {
    if (name == "error") return Severity::Error;
    if (name == "warning") return Severity::Warning;
    return std::nullopt;
}

Verdict verdict_of(const RtValue& value) {
    switch (value.kind()) {
        case RtValue::Kind::Bool: return value.asBool() ? Verdict::True : Verdict::False;
        case RtValue::Kind::Null: return Verdict::Null;
        case RtValue::Kind::Invalid: return Verdict::Invalid;
        default: return Verdict::EvalError;
    }
}

Constraint make_constraint(std::string name, Language language, std::string contextClass,
                           Severity severity, std::string message, std::string expressionText,
                           std::string applicabilityText, const MetaModel& metamodel) {
    if (!metamodel.findClass(contextClass)) {
        throw Error(ErrorKind::UnknownClass,
                    "constraint '" + name + "' names unknown context class '" + contextClass +
                        "'");
    }
    Constraint c;
    c.name = std::move(name);
    c.language = language;
    c.contextClass = std::move(contextClass);
    c.severity = severity;
    c.message = std::move(message);
    c.expressionText = std::move(expressionText);
    c.applicabilityText = std::move(applicabilityText);
    if (language == Language::Ocl) {
        c.oclBody = ocl::parse_expression(c.expressionText);
        if (!c.applicabilityText.empty()) {
            c.oclApplicability = ocl::parse_expression(c.applicabilityText);
        }
    } else {
        c.navexBody = navex::parse_navex(c.expressionText);
        if (!c.applicabilityText.empty()) {
            c.navexApplicability = navex::parse_navex(c.applicabilityText);
        }
    }
    return c;
}

namespace {

RtValue evalConstraintBody(const Constraint& c, const Env& env, EvalTrace* trace) {
    if (c.language == Language::Ocl) return eval_ocl(*c.oclBody, env, trace);
    return eval_navex(*c.navexBody, env, trace);
}

/// Applicability: include the instance iff the predicate is strictly true.
bool applicable(const Constraint& c, const Env& env, EvalTrace* trace) {
    if (c.language == Language::Ocl) {
        if (!c.oclApplicability) return true;
        return truth_of(eval_ocl(*c.oclApplicability, env, trace)) == Truth::True;
    }
    if (!c.navexApplicability) return true;
    return truth_of(eval_navex(*c.navexApplicability, env, trace)) == Truth::True;
}

} // namespace

std::vector<ValidationEntry> check_invariant(const StorePtr& store, const Constraint& constraint,
                                             EvalTrace* trace) {
    std::vector<ValidationEntry> out;
    for (const auto& id : store->allInstanceIds(constraint.contextClass, true)) {
        Env env;
        env.snapshot = store;
        env.contextBinding = RtValue::objRef(id);
        if (!applicable(constraint, env, trace)) continue;
        ValidationEntry entry;
        entry.constraintName = constraint.name;
        entry.objectId = id;
        entry.severity = constraint.severity;
        entry.verdict = verdict_of(evalConstraintBody(constraint, env, trace));
        entry.message = constraint.message;
        out.push_back(std::move(entry));
    }
    return out;
}

ValidationReport validate_model(const StorePtr& store, const std::vector<Constraint>& registry,
                                EvalTrace* trace) {
    ValidationReport report;
    for (const auto& c : registry) {
        auto entries = check_invariant(store, c, trace);
        report.entries.insert(report.entries.end(), std::make_move_iterator(entries.begin()),
                              std::make_move_iterator(entries.end()));
    }
    report.overall = true;
    for (const auto& e : report.entries) {
        if (e.severity == Severity::Error && e.verdict != Verdict::True) {
            report.overall = false;
            break;
        }
    }
    return report;
}

} // namespace mvx
