#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mvx/eval.hpp"
#include "mvx/validate.hpp"

namespace mvx {

/// A named pre/post clause; name may be empty for unnamed clauses.
struct ContractClause {
    std::string name;
    std::string text;
    std::shared_ptr<const ocl::Expr> body;
};

struct OperationContract {
    std::string className;
    OperationSig sig;
    std::vector<ContractClause> pres;
    std::vector<ContractClause> posts;
};

struct ClauseVerdict {
    std::string name;
    Verdict verdict = Verdict::Invalid;
};

struct TransitionResult {
    std::vector<ClauseVerdict> preVerdicts;
    std::vector<ClauseVerdict> postVerdicts; // empty when not admissible
    bool admissible = false;                 // all pres True
    bool correct = false;                    // admissible and all posts True
};

/// Two-snapshot harness: preconditions run against preStore; postconditions
/// against postStore with `@pre` navigations reading preStore and `result`
/// bound to resultValue. Throws Error on unknown receiver, missing
/// arguments, or argument type mismatches.
TransitionResult check_transition(const StorePtr& preStore, const StorePtr& postStore,
                                  const OperationContract& contract,
                                  const std::string& receiverId,
                                  const std::map<std::string, RtValue>& argBindings,
                                  const std::optional<RtValue>& resultValue,
                                  EvalTrace* trace = nullptr);

} // namespace mvx
