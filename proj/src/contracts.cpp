#include "mvx/contracts.hpp"

#include "mvx/errors.hpp"

namespace mvx {

namespace {

bool valueConforms(const RtValue& v, PrimitiveType type) {
    switch (type) {
        case PrimitiveType::Boolean: return v.isBool();
        case PrimitiveType::Integer: return v.isInt();
        case PrimitiveType::Real: return v.isNumeric();
        case PrimitiveType::String: return v.isStr();
    }
    return false;
}

void requireReceiver(const ModelStore& store, const OperationContract& contract,
                     const std::string& receiverId, const char* which) {
    const MObject* obj = store.find(receiverId);
    if (!obj) {
        throw Error(ErrorKind::UnknownReceiver,
                    "receiver '" + receiverId + "' not found in " + which + " model");
    }
    if (!store.metamodel().isKindOf(obj->className, contract.className)) {
        throw Error(ErrorKind::UnknownReceiver,
                    "receiver '" + receiverId + "' is a " + obj->className + ", expected " +
                        contract.className);
    }
}

} // namespace

TransitionResult check_transition(const StorePtr& preStore, const StorePtr& postStore,
                                  const OperationContract& contract,
                                  const std::string& receiverId,
                                  const std::map<std::string, RtValue>& argBindings,
                                  const std::optional<RtValue>& resultValue, EvalTrace* trace) {
    requireReceiver(*preStore, contract, receiverId, "pre");
    requireReceiver(*postStore, contract, receiverId, "post");
    for (const auto& param : contract.sig.params) {
        auto bound = argBindings.find(param.name);
        if (bound == argBindings.end()) {
            throw Error(ErrorKind::MissingArgument,
                        "missing argument '" + param.name + "' for " + contract.sig.name);
        }
        if (!valueConforms(bound->second, param.type)) {
            throw Error(ErrorKind::TypeMismatch,
                        "argument '" + param.name + "' does not conform to " +
                            to_string(param.type));
        }
    }

    TransitionResult result;

    Env preEnv;
    preEnv.snapshot = preStore;
    preEnv.contextBinding = RtValue::objRef(receiverId);
    preEnv.vars = argBindings;
    result.admissible = true;
    for (const auto& clause : contract.pres) {
        Verdict v = verdict_of(eval_ocl(*clause.body, preEnv, trace));
        if (v != Verdict::True) result.admissible = false;
        result.preVerdicts.push_back({clause.name, v});
    }
    if (!result.admissible) {
        result.correct = false;
        return result;
    }

    Env postEnv;
    postEnv.snapshot = postStore;
    postEnv.preSnapshot = preStore;
    postEnv.contextBinding = RtValue::objRef(receiverId);
    postEnv.vars = argBindings;
    postEnv.resultValue = resultValue;
    result.correct = true;
    for (const auto& clause : contract.posts) {
        Verdict v = verdict_of(eval_ocl(*clause.body, postEnv, trace));
        if (v != Verdict::True) result.correct = false;
        result.postVerdicts.push_back({clause.name, v});
    }
    return result;
}

} // namespace mvx
