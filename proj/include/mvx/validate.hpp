#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mvx/eval.hpp"

namespace mvx {

enum class Severity { Error, Warning };
enum class Verdict { True, False, Null, Invalid, EvalError };

const char* to_string(Severity s);
const char* to_string(Verdict v);
std::optional<Severity> severity_from_string(const std::string& name);

/// Classifies an evaluation result: boolean outcomes keep their truth,
/// Null/Invalid keep their tag, any non-boolean value is an EvalError.
Verdict verdict_of(const RtValue& value);

/// A registered invariant. Bodies are parsed at construction; exactly one
/// of oclBody/navexBody is set, matching `language`.
struct Constraint {
    std::string name;
    Language language = Language::Ocl;
    std::string contextClass;
    Severity severity = Severity::Error;
    std::string message;
    std::string expressionText;
    std::string applicabilityText; // empty when always applicable

    std::shared_ptr<const ocl::Expr> oclBody;
    std::shared_ptr<const navex::Expr> navexBody;
    std::shared_ptr<const ocl::Expr> oclApplicability;
    std::shared_ptr<const navex::Expr> navexApplicability;
};

/// Parses and checks a constraint against the metamodel. Throws ParseError
/// on bad expression text and Error(UnknownClass) on a missing context.
Constraint make_constraint(std::string name, Language language, std::string contextClass,
                           Severity severity, std::string message, std::string expressionText,
                           std::string applicabilityText, const MetaModel& metamodel);

struct ValidationEntry {
    std::string constraintName;
    std::string objectId;
    Verdict verdict = Verdict::Invalid;
    Severity severity = Severity::Error;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationEntry> entries;
    bool overall = true; // no severity-Error entry with verdict other than True
};

/// Evaluates one constraint for every instance of its context class
/// (subclasses included) that passes the applicability predicate; one entry
/// per instance in insertion order.
std::vector<ValidationEntry> check_invariant(const StorePtr& store, const Constraint& constraint,
                                             EvalTrace* trace = nullptr);

/// Concatenates check_invariant results in registry order.
ValidationReport validate_model(const StorePtr& store, const std::vector<Constraint>& registry,
                                EvalTrace* trace = nullptr);

} // namespace mvx
