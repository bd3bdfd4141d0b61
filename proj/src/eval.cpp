#include "mvx/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "mvx/errors.hpp"
#include "mvx/logic.hpp"
#include "mvx/navex/parser.hpp"
#include "mvx/ocl/parser.hpp"
#include "mvx/util.hpp"

namespace mvx {

namespace {

const char* kindName(RtValue::Kind k) {
    switch (k) {
        case RtValue::Kind::Invalid: return "invalid";
        case RtValue::Kind::Null: return "null";
        case RtValue::Kind::Bool: return "Boolean";
        case RtValue::Kind::Int: return "Integer";
        case RtValue::Kind::Real: return "Real";
        case RtValue::Kind::Str: return "String";
        case RtValue::Kind::Coll: return "Collection";
        case RtValue::Kind::ObjRef: return "object";
        case RtValue::Kind::ClassRef: return "class";
        case RtValue::Kind::SlotHandle: return "slot handle";
        case RtValue::Kind::StoreRef: return "store";
        case RtValue::Kind::Closure: return "function";
    }
    return "?";
}

/// Lexically scoped bindings; later entries shadow earlier ones. An entry
/// with implicit=true is an OCL implicit iterator element: its features are
/// consulted during bare-name resolution.
struct Binding {
    std::string name;
    RtValue value;
    bool implicit = false;
};

class ScopeGuard {
public:
    ScopeGuard(std::vector<Binding>& scope, std::size_t keep) : scope_(scope), keep_(keep) {}
    ~ScopeGuard() { scope_.resize(keep_); }

private:
    std::vector<Binding>& scope_;
    std::size_t keep_;
};

bool bothNumeric(const RtValue& a, const RtValue& b) { return a.isNumeric() && b.isNumeric(); }

/// Three-way compare for ordered comparisons: numerics coerce, strings are
/// lexicographic by bytes. nullopt when the pair is not comparable.
std::optional<int> compareOrdered(const RtValue& a, const RtValue& b) {
    if (bothNumeric(a, b)) {
        if (a.isInt() && b.isInt()) {
            auto x = a.asInt(), y = b.asInt();
            return x < y ? -1 : (x > y ? 1 : 0);
        }
        double x = a.numeric(), y = b.numeric();
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    if (a.isStr() && b.isStr()) {
        int c = a.asStr().compare(b.asStr());
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    return std::nullopt;
}

RtValue sumElements(const std::vector<RtValue>& elements) {
    bool anyReal = false;
    std::int64_t intSum = 0;
    double realSum = 0.0;
    for (const auto& e : elements) {
        if (e.isInt()) {
            intSum += e.asInt();
            realSum += static_cast<double>(e.asInt());
        } else if (e.isReal()) {
            anyReal = true;
            realSum += e.asReal();
        } else {
            return RtValue::invalid();
        }
    }
    if (elements.empty()) return RtValue::integer(0);
    return anyReal ? RtValue::real(realSum) : RtValue::integer(intSum);
}

std::vector<RtValue> flattenOneLevel(const std::vector<RtValue>& elements) {
    std::vector<RtValue> out;
    for (const auto& e : elements) {
        if (e.isColl()) {
            const auto& inner = e.elements();
            out.insert(out.end(), inner.begin(), inner.end());
        } else {
            out.push_back(e);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// OCL
// ---------------------------------------------------------------------------

class OclEvaluator {
public:
    OclEvaluator(const Env& env, EvalTrace* trace) : env_(env), trace_(trace) {}

    RtValue eval(const ocl::Expr& e) {
        struct Visitor {
            OclEvaluator& ev;
            RtValue operator()(const ocl::BoolLit& n) { return RtValue::boolean(n.value); }
            RtValue operator()(const ocl::IntLit& n) { return RtValue::integer(n.value); }
            RtValue operator()(const ocl::RealLit& n) { return RtValue::real(n.value); }
            RtValue operator()(const ocl::StringLit& n) { return RtValue::str(n.value); }
            RtValue operator()(const ocl::CollLit& n) { return ev.collLit(n); }
            RtValue operator()(const ocl::VarRef& n) { return ev.varRef(n); }
            RtValue operator()(const ocl::PropertyNav& n) { return ev.propertyNav(n); }
            RtValue operator()(const ocl::OperationCall& n) { return ev.operationCall(n); }
            RtValue operator()(const ocl::ArrowCall& n) { return ev.arrowCall(n); }
            RtValue operator()(const ocl::IteratorCall& n) { return ev.iteratorCall(n); }
            RtValue operator()(const ocl::IterateCall& n) { return ev.iterateCall(n); }
            RtValue operator()(const ocl::BinaryOp& n) { return ev.binaryOp(n); }
            RtValue operator()(const ocl::UnaryOp& n) { return ev.unaryOp(n); }
            RtValue operator()(const ocl::IfExpr& n) { return ev.ifExpr(n); }
            RtValue operator()(const ocl::LetExpr& n) { return ev.letExpr(n); }
        };
        return std::visit(Visitor{*this}, e.node);
    }

private:
    const Env& env_;
    EvalTrace* trace_;
    std::vector<Binding> scope_;

    const ModelStore& store() const { return *env_.snapshot; }

    RtValue diag(std::string message) {
        if (trace_) trace_->diagnostics.push_back(std::move(message));
        return RtValue::invalid();
    }

    RtValue collLit(const ocl::CollLit& n) {
        std::vector<RtValue> elements;
        elements.reserve(n.elements.size());
        for (const auto& e : n.elements) {
            RtValue v = eval(*e);
            if (v.isInvalid()) return v;
            elements.push_back(std::move(v));
        }
        return RtValue::coll(n.kind, std::move(elements));
    }

    /// Reads feature `name` of an object in `st`; single-valued slots yield
    /// the value (Null when empty), multi-valued slots yield a Sequence.
    RtValue readFeature(const ModelStore& st, const std::string& id, const std::string& name) {
        const MObject* obj = st.find(id);
        if (!obj) return diag("unknown object '" + id + "'");
        auto feature = st.metamodel().findFeature(obj->className, name);
        if (!feature) {
            return diag("unknown feature '" + name + "' on class " + obj->className);
        }
        FeatureHandle h = st.getFeature(id, name);
        if (h.multi) return RtValue::coll(CollKind::Sequence, std::move(h.values));
        if (h.values.empty()) return RtValue::null();
        return h.values[0];
    }

    RtValue varRef(const ocl::VarRef& n) {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
            if (!it->implicit) {
                if (it->name == n.name) return it->value;
                continue;
            }
            // implicit iterator element: bare names may be its features
            if (it->value.isObjRef()) {
                const MObject* obj = store().find(it->value.asObjRef().id);
                if (obj && store().metamodel().findFeature(obj->className, n.name)) {
                    return readFeature(store(), obj->id, n.name);
                }
            }
        }
        auto bound = env_.vars.find(n.name);
        if (bound != env_.vars.end()) return bound->second;
        if (n.name == "self" || n.name == "data") return env_.contextBinding;
        if (n.name == "result") {
            if (env_.resultValue) return *env_.resultValue;
            return diag("'result' is not bound");
        }
        if (store().metamodel().findClass(n.name)) return RtValue::classRef(n.name);
        return diag("unknown name '" + n.name + "'");
    }

    RtValue propertyNav(const ocl::PropertyNav& n) {
        RtValue src = eval(*n.source);
        if (src.isInvalid()) return src;
        if (src.isNull()) return diag("navigation '." + n.name + "' on null");
        const ModelStore* st = env_.snapshot.get();
        if (n.atPre) {
            if (!env_.preSnapshot) return diag("@pre outside a postcondition evaluation");
            st = env_.preSnapshot.get();
        }
        if (src.isObjRef()) return readFeature(*st, src.asObjRef().id, n.name);
        if (src.isColl()) {
            // implicit collect: navigate each element, flatten one level
            std::vector<RtValue> out;
            for (const auto& e : src.elements()) {
                if (e.isNull()) return diag("navigation '." + n.name + "' on null");
                if (!e.isObjRef()) {
                    return diag("cannot navigate '." + n.name + "' from " + kindName(e.kind()));
                }
                RtValue v = readFeature(*st, e.asObjRef().id, n.name);
                if (v.isInvalid()) return v;
                if (v.isColl()) {
                    for (const auto& x : v.elements()) out.push_back(x);
                } else {
                    out.push_back(std::move(v));
                }
            }
            return RtValue::coll(CollKind::Bag, std::move(out));
        }
        return diag("cannot navigate '." + n.name + "' from " + kindName(src.kind()));
    }

    bool checkArity(const ocl::OperationCall& n, std::size_t want, std::size_t got) {
        if (want == got) return true;
        diag("'" + n.name + "' expects " + std::to_string(want) + " argument(s), got " +
             std::to_string(got));
        return false;
    }

    RtValue operationCall(const ocl::OperationCall& n) {
        RtValue src = eval(*n.source);
        std::vector<RtValue> args;
        args.reserve(n.args.size());
        for (const auto& a : n.args) {
            RtValue v = eval(*a);
            if (v.isInvalid() && n.name != "oclIsUndefined") return v;
            args.push_back(std::move(v));
        }

        if (n.name == "oclIsUndefined") {
            if (!checkArity(n, 0, args.size())) return RtValue::invalid();
            return RtValue::boolean(src.isUndefined());
        }
        if (src.isInvalid()) return src;

        if (n.name == "allInstances") {
            if (!checkArity(n, 0, args.size())) return RtValue::invalid();
            if (!src.isClassRef()) {
                return diag("allInstances() applies to a class name, not " +
                            std::string(kindName(src.kind())));
            }
            return RtValue::coll(CollKind::Set,
                                 store().allInstances(src.asClassRef().name, true));
        }
        if (n.name == "oclIsTypeOf" || n.name == "oclIsKindOf" || n.name == "oclAsType") {
            if (!checkArity(n, 1, args.size())) return RtValue::invalid();
            if (!args[0].isClassRef()) return diag("'" + n.name + "' expects a class name");
            if (!src.isObjRef()) {
                return diag("'" + n.name + "' applies to objects, not " +
                            std::string(kindName(src.kind())));
            }
            const MObject* obj = store().find(src.asObjRef().id);
            if (!obj) return diag("unknown object '" + src.asObjRef().id + "'");
            const std::string& target = args[0].asClassRef().name;
            if (n.name == "oclIsTypeOf") return RtValue::boolean(obj->className == target);
            bool kindOf = store().metamodel().isKindOf(obj->className, target);
            if (n.name == "oclIsKindOf") return RtValue::boolean(kindOf);
            return kindOf ? src : diag("cannot cast " + obj->className + " to " + target);
        }

        if (src.isNull()) return diag("'" + n.name + "' on null");

        // ---- string operations ----
        if (n.name == "size" || n.name == "toUpperCase" || n.name == "toLowerCase") {
            if (!checkArity(n, 0, args.size())) return RtValue::invalid();
            if (!src.isStr()) return diag("'" + n.name + "' applies to String");
            if (n.name == "size") {
                return RtValue::integer(static_cast<std::int64_t>(utf8_length(src.asStr())));
            }
            std::string out = src.asStr();
            for (char& c : out) {
                c = n.name == "toUpperCase"
                        ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                        : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            }
            return RtValue::str(std::move(out));
        }
        if (n.name == "concat") {
            if (!checkArity(n, 1, args.size())) return RtValue::invalid();
            if (!src.isStr() || !args[0].isStr()) return diag("'concat' applies to String");
            return RtValue::str(src.asStr() + args[0].asStr());
        }
        if (n.name == "substring") {
            if (!checkArity(n, 2, args.size())) return RtValue::invalid();
            if (!src.isStr() || !args[0].isInt() || !args[1].isInt()) {
                return diag("'substring' expects (Integer, Integer) on String");
            }
            auto offsets = utf8_offsets(src.asStr());
            std::int64_t len = static_cast<std::int64_t>(offsets.size()) - 1;
            std::int64_t lo = args[0].asInt(), hi = args[1].asInt();
            if (lo < 1 || hi < lo || hi > len) {
                return diag("'substring' bounds out of range");
            }
            std::size_t from = offsets[static_cast<std::size_t>(lo - 1)];
            std::size_t to = offsets[static_cast<std::size_t>(hi)];
            return RtValue::str(src.asStr().substr(from, to - from));
        }
        if (n.name == "indexOf") {
            if (!checkArity(n, 1, args.size())) return RtValue::invalid();
            if (!src.isStr() || !args[0].isStr()) return diag("'indexOf' applies to String");
            std::size_t pos = src.asStr().find(args[0].asStr());
            if (pos == std::string::npos) return RtValue::integer(0);
            return RtValue::integer(static_cast<std::int64_t>(
                utf8_length(std::string_view(src.asStr()).substr(0, pos)) + 1));
        }

        // ---- numeric operations ----
        if (n.name == "abs" || n.name == "floor" || n.name == "round") {
            if (!checkArity(n, 0, args.size())) return RtValue::invalid();
            if (!src.isNumeric()) return diag("'" + n.name + "' applies to numbers");
            if (n.name == "abs") {
                if (src.isInt()) return RtValue::integer(std::abs(src.asInt()));
                return RtValue::real(std::fabs(src.asReal()));
            }
            if (src.isInt()) return src;
            if (n.name == "floor") {
                return RtValue::integer(static_cast<std::int64_t>(std::floor(src.asReal())));
            }
            return RtValue::integer(std::llround(src.asReal()));
        }
        if (n.name == "max" || n.name == "min") {
            if (!checkArity(n, 1, args.size())) return RtValue::invalid();
            if (!bothNumeric(src, args[0])) return diag("'" + n.name + "' applies to numbers");
            bool takeSrc = n.name == "max" ? src.numeric() >= args[0].numeric()
                                           : src.numeric() <= args[0].numeric();
            if (src.isInt() && args[0].isInt()) return takeSrc ? src : args[0];
            return RtValue::real(takeSrc ? src.numeric() : args[0].numeric());
        }
        if (n.name == "div" || n.name == "mod") {
            if (!checkArity(n, 1, args.size())) return RtValue::invalid();
            if (!src.isInt() || !args[0].isInt()) {
                return diag("'" + n.name + "' applies to Integer");
            }
            if (args[0].asInt() == 0) return diag("'" + n.name + "' by zero");
            return RtValue::integer(n.name == "div" ? src.asInt() / args[0].asInt()
                                                    : src.asInt() % args[0].asInt());
        }
        return diag("unknown operation '" + n.name + "'");
    }

    /// Arrow-call receiver conversion: null acts as the empty set, a
    /// non-collection value as the singleton set holding it.
    std::optional<RtValue> asCollection(const RtValue& src) {
        if (src.isInvalid()) return std::nullopt;
        if (src.isColl()) return src;
        if (src.isNull()) return RtValue::coll(CollKind::Set, {});
        return RtValue::coll(CollKind::Set, {src});
    }

    RtValue arrowCall(const ocl::ArrowCall& n) {
        RtValue srcRaw = eval(*n.source);
        auto srcOpt = asCollection(srcRaw);
        if (!srcOpt) return RtValue::invalid();
        const RtValue& src = *srcOpt;
        const auto& elems = src.elements();
        CollKind kind = src.asColl().kind;

        std::vector<RtValue> args;
        args.reserve(n.args.size());
        for (const auto& a : n.args) {
            RtValue v = eval(*a);
            if (v.isInvalid()) return v;
            args.push_back(std::move(v));
        }
        auto arity = [&](std::size_t want) {
            if (want == args.size()) return true;
            diag("'->" + n.name + "' expects " + std::to_string(want) + " argument(s)");
            return false;
        };
        auto needSequence = [&]() {
            if (kind == CollKind::Sequence) return true;
            diag("'->" + n.name + "' requires a Sequence");
            return false;
        };
        auto argAsElems = [&](const RtValue& a) -> std::optional<std::vector<RtValue>> {
            if (a.isColl()) return a.elements();
            if (a.isNull()) return std::vector<RtValue>{};
            diag("'->" + n.name + "' expects a collection argument");
            return std::nullopt;
        };

        if (n.name == "size") {
            if (!arity(0)) return RtValue::invalid();
            return RtValue::integer(static_cast<std::int64_t>(elems.size()));
        }
        if (n.name == "isEmpty" || n.name == "notEmpty") {
            if (!arity(0)) return RtValue::invalid();
            return RtValue::boolean(n.name == "isEmpty" ? elems.empty() : !elems.empty());
        }
        if (n.name == "includes" || n.name == "excludes") {
            if (!arity(1)) return RtValue::invalid();
            bool found = std::any_of(elems.begin(), elems.end(), [&](const RtValue& e) {
                return equals_coercing(e, args[0]);
            });
            return RtValue::boolean(n.name == "includes" ? found : !found);
        }
        if (n.name == "includesAll" || n.name == "excludesAll") {
            if (!arity(1)) return RtValue::invalid();
            auto other = argAsElems(args[0]);
            if (!other) return RtValue::invalid();
            bool all = true;
            for (const auto& x : *other) {
                bool found = std::any_of(elems.begin(), elems.end(), [&](const RtValue& e) {
                    return equals_coercing(e, x);
                });
                if (n.name == "includesAll" ? !found : found) {
                    all = false;
                    break;
                }
            }
            return RtValue::boolean(all);
        }
        if (n.name == "sum") {
            if (!arity(0)) return RtValue::invalid();
            RtValue s = sumElements(elems);
            if (s.isInvalid()) return diag("'->sum' requires numeric elements");
            return s;
        }
        if (n.name == "count") {
            if (!arity(1)) return RtValue::invalid();
            std::int64_t c = 0;
            for (const auto& e : elems) {
                if (equals_coercing(e, args[0])) ++c;
            }
            return RtValue::integer(c);
        }
        if (n.name == "first" || n.name == "last") {
            if (!arity(0) || !needSequence()) return RtValue::invalid();
            if (elems.empty()) return diag("'->" + n.name + "' on empty Sequence");
            return n.name == "first" ? elems.front() : elems.back();
        }
        if (n.name == "at") {
            if (!arity(1) || !needSequence()) return RtValue::invalid();
            if (!args[0].isInt()) return diag("'->at' expects an Integer");
            std::int64_t i = args[0].asInt();
            if (i < 1 || i > static_cast<std::int64_t>(elems.size())) {
                return diag("'->at' index out of range");
            }
            return elems[static_cast<std::size_t>(i - 1)];
        }
        if (n.name == "indexOf") {
            if (!arity(1) || !needSequence()) return RtValue::invalid();
            for (std::size_t i = 0; i < elems.size(); ++i) {
                if (equals_coercing(elems[i], args[0])) {
                    return RtValue::integer(static_cast<std::int64_t>(i + 1));
                }
            }
            return RtValue::integer(0);
        }
        if (n.name == "including" || n.name == "append") {
            if (!arity(1)) return RtValue::invalid();
            if (n.name == "append" && !needSequence()) return RtValue::invalid();
            std::vector<RtValue> out = elems;
            out.push_back(args[0]);
            return RtValue::coll(kind, std::move(out));
        }
        if (n.name == "prepend") {
            if (!arity(1) || !needSequence()) return RtValue::invalid();
            std::vector<RtValue> out;
            out.reserve(elems.size() + 1);
            out.push_back(args[0]);
            out.insert(out.end(), elems.begin(), elems.end());
            return RtValue::coll(kind, std::move(out));
        }
        if (n.name == "excluding") {
            if (!arity(1)) return RtValue::invalid();
            std::vector<RtValue> out;
            for (const auto& e : elems) {
                if (!equals_coercing(e, args[0])) out.push_back(e);
            }
            return RtValue::coll(kind, std::move(out));
        }
        if (n.name == "union") {
            if (!arity(1)) return RtValue::invalid();
            auto other = argAsElems(args[0]);
            if (!other) return RtValue::invalid();
            std::vector<RtValue> out = elems;
            out.insert(out.end(), other->begin(), other->end());
            return RtValue::coll(kind, std::move(out));
        }
        if (n.name == "intersection") {
            if (!arity(1)) return RtValue::invalid();
            if (kind == CollKind::Sequence) {
                return diag("'->intersection' applies to Set and Bag");
            }
            auto other = argAsElems(args[0]);
            if (!other) return RtValue::invalid();
            std::vector<RtValue> remaining = *other;
            std::vector<RtValue> out;
            for (const auto& e : elems) {
                auto hit = std::find_if(remaining.begin(), remaining.end(),
                                        [&](const RtValue& x) { return equals_coercing(e, x); });
                if (hit != remaining.end()) {
                    remaining.erase(hit);
                    out.push_back(e);
                }
            }
            return RtValue::coll(kind, std::move(out));
        }
        if (n.name == "flatten") {
            if (!arity(0)) return RtValue::invalid();
            return RtValue::coll(kind, flattenOneLevel(elems));
        }
        if (n.name == "asSet" || n.name == "asBag" || n.name == "asSequence") {
            if (!arity(0)) return RtValue::invalid();
            CollKind to = n.name == "asSet" ? CollKind::Set
                                            : (n.name == "asBag" ? CollKind::Bag
                                                                 : CollKind::Sequence);
            return RtValue::coll(to, elems);
        }
        return diag("unknown collection operation '" + n.name + "'");
    }

    RtValue evalBodyWith(const ocl::Expr& body, const std::vector<std::string>& vars,
                         const RtValue& element, const RtValue* second = nullptr) {
        ScopeGuard guard(scope_, scope_.size());
        if (vars.empty()) {
            scope_.push_back({"", element, true});
        } else {
            scope_.push_back({vars[0], element, false});
            if (vars.size() > 1) scope_.push_back({vars[1], second ? *second : element, false});
        }
        return eval(body);
    }

    RtValue iteratorCall(const ocl::IteratorCall& n) {
        RtValue srcRaw = eval(*n.source);
        auto srcOpt = asCollection(srcRaw);
        if (!srcOpt) return RtValue::invalid();
        const auto& elems = srcOpt->elements();
        CollKind kind = srcOpt->asColl().kind;

        if ((n.name == "forAll" || n.name == "exists") && n.vars.size() == 2) {
            Truth acc = n.name == "forAll" ? Truth::True : Truth::False;
            for (const auto& a : elems) {
                for (const auto& b : elems) {
                    Truth t = truth_of(evalBodyWith(*n.body, n.vars, a, &b));
                    acc = n.name == "forAll" ? logic_and(acc, t) : logic_or(acc, t);
                }
            }
            return truth_to_value(acc);
        }
        if (n.name == "forAll" || n.name == "exists") {
            Truth acc = n.name == "forAll" ? Truth::True : Truth::False;
            for (const auto& e : elems) {
                Truth t = truth_of(evalBodyWith(*n.body, n.vars, e));
                acc = n.name == "forAll" ? logic_and(acc, t) : logic_or(acc, t);
            }
            return truth_to_value(acc);
        }
        if (n.name == "select" || n.name == "reject") {
            std::vector<RtValue> out;
            for (const auto& e : elems) {
                Truth t = truth_of(evalBodyWith(*n.body, n.vars, e));
                if (t == Truth::Null || t == Truth::Invalid) {
                    return diag("'->" + n.name + "' condition is undefined");
                }
                if ((t == Truth::True) == (n.name == "select")) out.push_back(e);
            }
            return RtValue::coll(kind, std::move(out));
        }
        if (n.name == "collect") {
            std::vector<RtValue> out;
            for (const auto& e : elems) {
                RtValue v = evalBodyWith(*n.body, n.vars, e);
                if (v.isInvalid()) return v;
                if (v.isColl()) {
                    for (const auto& x : v.elements()) out.push_back(x);
                } else {
                    out.push_back(std::move(v));
                }
            }
            return RtValue::coll(CollKind::Bag, std::move(out));
        }
        if (n.name == "one") {
            std::size_t hits = 0;
            for (const auto& e : elems) {
                Truth t = truth_of(evalBodyWith(*n.body, n.vars, e));
                if (t == Truth::Null || t == Truth::Invalid) {
                    return diag("'->one' condition is undefined");
                }
                if (t == Truth::True) ++hits;
            }
            return RtValue::boolean(hits == 1);
        }
        if (n.name == "any") {
            for (const auto& e : elems) {
                Truth t = truth_of(evalBodyWith(*n.body, n.vars, e));
                if (t == Truth::Null || t == Truth::Invalid) {
                    return diag("'->any' condition is undefined");
                }
                if (t == Truth::True) return e;
            }
            return diag("'->any' found no matching element");
        }
        if (n.name == "isUnique") {
            std::vector<RtValue> keys;
            for (const auto& e : elems) {
                RtValue k = evalBodyWith(*n.body, n.vars, e);
                if (k.isInvalid()) return k;
                for (const auto& seen : keys) {
                    if (equals_coercing(seen, k)) return RtValue::boolean(false);
                }
                keys.push_back(std::move(k));
            }
            return RtValue::boolean(true);
        }
        if (n.name == "sortedBy") {
            std::vector<std::pair<RtValue, RtValue>> keyed; // (key, element)
            for (const auto& e : elems) {
                RtValue k = evalBodyWith(*n.body, n.vars, e);
                if (k.isUndefined()) return diag("'->sortedBy' key is undefined");
                keyed.emplace_back(std::move(k), e);
            }
            bool comparable = true;
            std::stable_sort(keyed.begin(), keyed.end(),
                             [&](const auto& a, const auto& b) {
                                 auto c = compareOrdered(a.first, b.first);
                                 if (!c) {
                                     comparable = false;
                                     return false;
                                 }
                                 return *c < 0;
                             });
            if (!comparable) return diag("'->sortedBy' keys are not comparable");
            std::vector<RtValue> out;
            out.reserve(keyed.size());
            for (auto& kv : keyed) out.push_back(std::move(kv.second));
            return RtValue::coll(CollKind::Sequence, std::move(out));
        }
        return diag("unknown iterator '" + n.name + "'");
    }

    RtValue iterateCall(const ocl::IterateCall& n) {
        RtValue srcRaw = eval(*n.source);
        auto srcOpt = asCollection(srcRaw);
        if (!srcOpt) return RtValue::invalid();
        RtValue acc = eval(*n.init);
        for (const auto& e : srcOpt->elements()) {
            ScopeGuard guard(scope_, scope_.size());
            scope_.push_back({n.var, e, false});
            scope_.push_back({n.acc, acc, false});
            acc = eval(*n.body);
        }
        return acc;
    }

    RtValue binaryOp(const ocl::BinaryOp& n) {
        using K = ocl::BinOpKind;
        RtValue a = eval(*n.lhs);
        RtValue b = eval(*n.rhs);
        switch (n.op) {
            case K::And: return truth_to_value(logic_and(truth_of(a), truth_of(b)));
            case K::Or: return truth_to_value(logic_or(truth_of(a), truth_of(b)));
            case K::Xor: return truth_to_value(logic_xor(truth_of(a), truth_of(b)));
            case K::Implies: return truth_to_value(logic_implies(truth_of(a), truth_of(b)));
            case K::Eq:
            case K::Ne: {
                if (a.isInvalid() || b.isInvalid()) return RtValue::invalid();
                bool eq = equals_coercing(a, b);
                return RtValue::boolean(n.op == K::Eq ? eq : !eq);
            }
            case K::Lt:
            case K::Le:
            case K::Gt:
            case K::Ge: {
                if (a.isUndefined() || b.isUndefined()) return RtValue::invalid();
                auto c = compareOrdered(a, b);
                if (!c) {
                    return diag(std::string("'") + ocl::to_string(n.op) +
                                "' is not defined on these operands");
                }
                switch (n.op) {
                    case K::Lt: return RtValue::boolean(*c < 0);
                    case K::Le: return RtValue::boolean(*c <= 0);
                    case K::Gt: return RtValue::boolean(*c > 0);
                    default: return RtValue::boolean(*c >= 0);
                }
            }
            case K::Add:
            case K::Sub:
            case K::Mul: {
                if (a.isUndefined() || b.isUndefined()) return RtValue::invalid();
                if (!bothNumeric(a, b)) {
                    return diag(std::string("'") + ocl::to_string(n.op) +
                                "' applies to numbers");
                }
                if (a.isInt() && b.isInt()) {
                    std::int64_t x = a.asInt(), y = b.asInt();
                    switch (n.op) {
                        case K::Add: return RtValue::integer(x + y);
                        case K::Sub: return RtValue::integer(x - y);
                        default: return RtValue::integer(x * y);
                    }
                }
                double x = a.numeric(), y = b.numeric();
                switch (n.op) {
                    case K::Add: return RtValue::real(x + y);
                    case K::Sub: return RtValue::real(x - y);
                    default: return RtValue::real(x * y);
                }
            }
            case K::Div: {
                if (a.isUndefined() || b.isUndefined()) return RtValue::invalid();
                if (!bothNumeric(a, b)) return diag("'/' applies to numbers");
                if (b.numeric() == 0.0) return diag("division by zero");
                return RtValue::real(a.numeric() / b.numeric());
            }
        }
        return RtValue::invalid();
    }

    RtValue unaryOp(const ocl::UnaryOp& n) {
        RtValue v = eval(*n.operand);
        if (n.op == ocl::UnOpKind::Not) return truth_to_value(logic_not(truth_of(v)));
        if (v.isInt()) return RtValue::integer(-v.asInt());
        if (v.isReal()) return RtValue::real(-v.asReal());
        if (v.isInvalid()) return v;
        return diag("unary '-' applies to numbers");
    }

    RtValue ifExpr(const ocl::IfExpr& n) {
        Truth c = truth_of(eval(*n.cond));
        if (c == Truth::True) return eval(*n.thenBranch);
        if (c == Truth::False) return eval(*n.elseBranch);
        return diag("if-condition is undefined");
    }

    RtValue letExpr(const ocl::LetExpr& n) {
        RtValue init = eval(*n.init);
        ScopeGuard guard(scope_, scope_.size());
        scope_.push_back({n.var, std::move(init), false});
        return eval(*n.body);
    }
};

// ---------------------------------------------------------------------------
// NavEx
// ---------------------------------------------------------------------------

class NavexEvaluator {
public:
    NavexEvaluator(const Env& env, EvalTrace* trace) : env_(env), trace_(trace) {}

    RtValue eval(const navex::Expr& e) {
        struct Visitor {
            NavexEvaluator& ev;
            RtValue operator()(const navex::BoolLit& n) { return RtValue::boolean(n.value); }
            RtValue operator()(const navex::IntLit& n) { return RtValue::integer(n.value); }
            RtValue operator()(const navex::RealLit& n) { return RtValue::real(n.value); }
            RtValue operator()(const navex::StringLit& n) { return RtValue::str(n.value); }
            RtValue operator()(const navex::ArrayLit& n) { return ev.arrayLit(n); }
            RtValue operator()(const navex::RecordLit&) {
                return ev.diag("record literals are only valid as the first "
                               "argument of addObject");
            }
            RtValue operator()(const navex::VarRef& n) { return ev.varRef(n); }
            RtValue operator()(const navex::Member& n) { return ev.member(n); }
            RtValue operator()(const navex::Index& n) { return ev.index(n); }
            RtValue operator()(const navex::Call& n) { return ev.call(n); }
            RtValue operator()(const navex::Lambda& n) { return ev.lambda(n); }
            RtValue operator()(const navex::BinaryOp& n) { return ev.binaryOp(n); }
            RtValue operator()(const navex::UnaryOp& n) { return ev.unaryOp(n); }
            RtValue operator()(const navex::Conditional& n) { return ev.conditional(n); }
        };
        return std::visit(Visitor{*this}, e.node);
    }

private:
    const Env& env_;
    EvalTrace* trace_;
    std::vector<Binding> scope_;
    std::shared_ptr<ModelStore> local_; // copy-on-write for addObject

    const ModelStore& store() const { return local_ ? *local_ : *env_.snapshot; }
    ModelStore& writable() {
        if (!local_) local_ = std::make_shared<ModelStore>(*env_.snapshot);
        return *local_;
    }

    RtValue diag(std::string message) {
        if (trace_) trace_->diagnostics.push_back(std::move(message));
        return RtValue::invalid();
    }

    RtValue arrayLit(const navex::ArrayLit& n) {
        std::vector<RtValue> elements;
        elements.reserve(n.elements.size());
        for (const auto& e : n.elements) {
            RtValue v = eval(*e);
            if (v.isInvalid()) return v;
            elements.push_back(std::move(v));
        }
        return RtValue::coll(CollKind::Sequence, std::move(elements));
    }

    RtValue varRef(const navex::VarRef& n) {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
            if (it->name == n.name) return it->value;
        }
        auto bound = env_.vars.find(n.name);
        if (bound != env_.vars.end()) return bound->second;
        if (n.name == "data" || n.name == "self") return env_.contextBinding;
        if (store().metamodel().findClass(n.name)) return RtValue::classRef(n.name);
        return diag("unknown name '" + n.name + "'");
    }

    /// SlotHandle payloads are looked up in the current store state so that
    /// handles taken before an addObject still read consistently.
    RtValue slotMember(const RtValue::SlotRef& slot, const std::string& name) {
        const MObject* obj = store().find(slot.objectId);
        if (!obj) return diag("unknown object '" + slot.objectId + "'");
        FeatureHandle h = store().getFeature(slot.objectId, slot.feature);
        if (name == "values") return RtValue::coll(CollKind::Sequence, std::move(h.values));
        if (name == "value") {
            if (slot.multi) {
                return diag("'.value' on multi-valued feature '" + slot.feature +
                            "'; use '.values'");
            }
            if (h.values.empty()) return RtValue::null();
            return h.values[0];
        }
        return diag("unknown member '" + name + "' on slot handle");
    }

    RtValue objectMember(const RtValue::ObjectRef& ref, const std::string& name) {
        const MObject* obj = store().find(ref.id);
        if (!obj) return diag("unknown object '" + ref.id + "'");
        if (name == "id") return RtValue::str(obj->id);
        if (name == "instanceof") return RtValue::classRef(obj->className);
        if (name == "parent") {
            auto container = store().containerOf(ref.id);
            if (container) return RtValue::objRef(*container);
            return RtValue::storeRef();
        }
        if (name == "allInstances") {
            return RtValue::coll(CollKind::Set, store().allInstances(obj->className, true));
        }
        // plain member access reads the feature of that name
        if (store().metamodel().findFeature(obj->className, name)) {
            FeatureHandle h = store().getFeature(ref.id, name);
            if (h.multi) return RtValue::coll(CollKind::Sequence, std::move(h.values));
            if (h.values.empty()) return RtValue::null();
            return h.values[0];
        }
        return diag("unknown member '" + name + "' on class " + obj->className);
    }

    RtValue member(const navex::Member& n) {
        RtValue src = eval(*n.source);
        if (src.isInvalid()) return src;
        if (src.isNull()) return diag("member access '." + n.name + "' on null");
        if (n.dollar) {
            if (!src.isObjRef()) {
                return diag("'$' feature access applies to objects, not " +
                            std::string(kindName(src.kind())));
            }
            const MObject* obj = store().find(src.asObjRef().id);
            if (!obj) return diag("unknown object '" + src.asObjRef().id + "'");
            auto feature = store().metamodel().findFeature(obj->className, n.name);
            if (!feature) {
                return diag("unknown feature '$" + n.name + "' on class " + obj->className);
            }
            return RtValue::slotHandle(obj->id, n.name, !feature->multiplicity().isSingle());
        }
        switch (src.kind()) {
            case RtValue::Kind::SlotHandle: return slotMember(src.asSlotHandle(), n.name);
            case RtValue::Kind::ObjRef: return objectMember(src.asObjRef(), n.name);
            case RtValue::Kind::ClassRef: {
                if (n.name == "name") return RtValue::str(src.asClassRef().name);
                if (n.name == "allInstances") {
                    return RtValue::coll(CollKind::Set,
                                         store().allInstances(src.asClassRef().name, true));
                }
                return diag("unknown member '" + n.name + "' on class reference");
            }
            case RtValue::Kind::StoreRef: {
                if (n.name == "objects") {
                    std::vector<RtValue> out;
                    for (const auto& id : store().insertionOrder()) {
                        out.push_back(RtValue::objRef(id));
                    }
                    return RtValue::coll(CollKind::Sequence, std::move(out));
                }
                return diag("unknown member '" + n.name + "' on store");
            }
            case RtValue::Kind::Coll:
                if (n.name == "length") {
                    return RtValue::integer(static_cast<std::int64_t>(src.elements().size()));
                }
                return diag("unknown member '" + n.name + "' on collection");
            case RtValue::Kind::Str:
                if (n.name == "length") {
                    return RtValue::integer(static_cast<std::int64_t>(utf8_length(src.asStr())));
                }
                return diag("unknown member '" + n.name + "' on string");
            default:
                return diag("unknown member '" + n.name + "' on " +
                            std::string(kindName(src.kind())));
        }
    }

    RtValue index(const navex::Index& n) {
        RtValue src = eval(*n.source);
        if (src.isInvalid()) return src;
        RtValue idx = eval(*n.index);
        if (idx.isInvalid()) return idx;
        if (!idx.isInt()) return diag("index must be an integer");
        std::int64_t i = idx.asInt();
        if (src.isColl() && src.asColl().kind == CollKind::Sequence) {
            const auto& elems = src.elements();
            if (i < 0 || i >= static_cast<std::int64_t>(elems.size())) return RtValue::null();
            return elems[static_cast<std::size_t>(i)];
        }
        if (src.isStr()) {
            auto offsets = utf8_offsets(src.asStr());
            std::int64_t len = static_cast<std::int64_t>(offsets.size()) - 1;
            if (i < 0 || i >= len) return RtValue::null();
            std::size_t from = offsets[static_cast<std::size_t>(i)];
            std::size_t to = offsets[static_cast<std::size_t>(i + 1)];
            return RtValue::str(src.asStr().substr(from, to - from));
        }
        return diag("indexing applies to sequences and strings");
    }

    RtValue lambda(const navex::Lambda& n) {
        auto captured = std::make_shared<std::map<std::string, RtValue>>();
        for (const auto& b : scope_) (*captured)[b.name] = b.value;
        return RtValue::closure({n.params, n.body.get(), std::move(captured)});
    }

    RtValue applyClosure(const RtValue& fn, const std::vector<RtValue>& args) {
        const auto& cl = fn.asClosure();
        ScopeGuard guard(scope_, scope_.size());
        for (const auto& [name, value] : *cl.captured) scope_.push_back({name, value, false});
        for (std::size_t i = 0; i < cl.params.size(); ++i) {
            scope_.push_back({cl.params[i], i < args.size() ? args[i] : RtValue::null(), false});
        }
        return eval(*cl.body);
    }

    // ---- method dispatch ----

    RtValue call(const navex::Call& n) {
        if (const auto* member = std::get_if<navex::Member>(&n.callee->node)) {
            if (member->dollar) return diag("'$' feature handles are not callable");
            return methodCall(*member, n);
        }
        RtValue callee = eval(*n.callee);
        if (callee.isInvalid()) return callee;
        if (!callee.isClosure()) {
            return diag(std::string(kindName(callee.kind())) + " is not callable");
        }
        std::vector<RtValue> args;
        for (const auto& a : n.args) {
            RtValue v = eval(*a);
            if (v.isInvalid()) return v;
            args.push_back(std::move(v));
        }
        return applyClosure(callee, args);
    }

    RtValue methodCall(const navex::Member& member, const navex::Call& n) {
        RtValue recv = eval(*member.source);
        if (recv.isInvalid()) return recv;
        if (recv.isNull()) return diag("method call '." + member.name + "' on null");

        if (recv.isStoreRef() && member.name == "addObject") return addObject(n);

        std::vector<RtValue> args;
        args.reserve(n.args.size());
        for (const auto& a : n.args) {
            RtValue v = eval(*a);
            if (v.isInvalid()) return v;
            args.push_back(std::move(v));
        }
        auto arity = [&](std::size_t lo, std::size_t hi) {
            if (args.size() >= lo && args.size() <= hi) return true;
            diag("'" + member.name + "' expects " + std::to_string(lo) +
                 (hi > lo ? ".." + std::to_string(hi) : "") + " argument(s), got " +
                 std::to_string(args.size()));
            return false;
        };

        if (recv.isColl()) return collectionMethod(recv, member.name, args, arity);
        if (recv.isStr()) return stringMethod(recv.asStr(), member.name, args, arity);
        if (recv.isStoreRef()) {
            if (member.name == "executeQuery") {
                if (!arity(1, 1)) return RtValue::invalid();
                if (!args[0].isStr()) return diag("'executeQuery' expects a string");
                try {
                    auto ast = navex::parse_navex(args[0].asStr());
                    Env inner;
                    inner.snapshot = store().snapshot();
                    inner.contextBinding = RtValue::storeRef();
                    return eval_navex(*ast, inner, trace_);
                } catch (const ParseError& e) {
                    return diag(std::string("executeQuery: ") + e.what());
                }
            }
            return diag("unknown member '" + member.name + "' on store");
        }
        return diag("unknown member '" + member.name + "' on " +
                    std::string(kindName(recv.kind())));
    }

    RtValue truthFold(const std::vector<RtValue>& elems, const RtValue& fn, bool isEvery) {
        Truth acc = isEvery ? Truth::True : Truth::False;
        for (std::size_t i = 0; i < elems.size(); ++i) {
            Truth t = truth_of(applyCallback(fn, elems[i], i));
            acc = isEvery ? logic_and(acc, t) : logic_or(acc, t);
        }
        return truth_to_value(acc);
    }

    RtValue applyCallback(const RtValue& fn, const RtValue& element, std::size_t index) {
        std::vector<RtValue> args = {element};
        if (fn.asClosure().params.size() >= 2) {
            args.push_back(RtValue::integer(static_cast<std::int64_t>(index)));
        }
        return applyClosure(fn, args);
    }

    template <typename Arity>
    RtValue collectionMethod(const RtValue& recv, const std::string& name,
                             const std::vector<RtValue>& args, Arity arity) {
        const auto& elems = recv.elements();
        auto needFn = [&](std::size_t i) {
            if (i < args.size() && args[i].isClosure()) return true;
            diag("'" + name + "' expects a function argument");
            return false;
        };

        if (name == "map") {
            if (!arity(1, 1) || !needFn(0)) return RtValue::invalid();
            std::vector<RtValue> out;
            out.reserve(elems.size());
            for (std::size_t i = 0; i < elems.size(); ++i) {
                RtValue v = applyCallback(args[0], elems[i], i);
                if (v.isInvalid()) return v;
                out.push_back(std::move(v));
            }
            return RtValue::coll(CollKind::Sequence, std::move(out));
        }
        if (name == "filter" || name == "find") {
            if (!arity(1, 1) || !needFn(0)) return RtValue::invalid();
            std::vector<RtValue> out;
            for (std::size_t i = 0; i < elems.size(); ++i) {
                Truth t = truth_of(applyCallback(args[0], elems[i], i));
                if (t == Truth::Null || t == Truth::Invalid) {
                    return diag("'" + name + "' predicate is undefined");
                }
                if (t == Truth::True) {
                    if (name == "find") return elems[i];
                    out.push_back(elems[i]);
                }
            }
            if (name == "find") return RtValue::null();
            return RtValue::coll(CollKind::Sequence, std::move(out));
        }
        if (name == "reduce") {
            if (!arity(2, 2) || !needFn(0)) return RtValue::invalid();
            RtValue acc = args[1];
            for (const auto& e : elems) {
                acc = applyClosure(args[0], {acc, e});
            }
            return acc;
        }
        if (name == "some" || name == "every") {
            if (!arity(1, 1) || !needFn(0)) return RtValue::invalid();
            return truthFold(elems, args[0], name == "every");
        }
        if (name == "includes") {
            if (!arity(1, 1)) return RtValue::invalid();
            for (const auto& e : elems) {
                if (equals_strict(e, args[0])) return RtValue::boolean(true);
            }
            return RtValue::boolean(false);
        }
        if (name == "indexOf") {
            if (!arity(1, 1)) return RtValue::invalid();
            for (std::size_t i = 0; i < elems.size(); ++i) {
                if (equals_strict(elems[i], args[0])) {
                    return RtValue::integer(static_cast<std::int64_t>(i));
                }
            }
            return RtValue::integer(-1);
        }
        if (name == "concat") {
            if (!arity(1, 1)) return RtValue::invalid();
            std::vector<RtValue> out = elems;
            if (args[0].isColl()) {
                const auto& other = args[0].elements();
                out.insert(out.end(), other.begin(), other.end());
            } else {
                out.push_back(args[0]);
            }
            return RtValue::coll(CollKind::Sequence, std::move(out));
        }
        if (name == "slice") {
            if (!arity(0, 2)) return RtValue::invalid();
            auto bounds = sliceBounds(args, static_cast<std::int64_t>(elems.size()));
            if (!bounds) return RtValue::invalid();
            std::vector<RtValue> out(elems.begin() + bounds->first,
                                     elems.begin() + bounds->second);
            return RtValue::coll(CollKind::Sequence, std::move(out));
        }
        if (name == "flat") {
            if (!arity(0, 0)) return RtValue::invalid();
            return RtValue::coll(CollKind::Sequence, flattenOneLevel(elems));
        }
        return diag("unknown member '" + name + "' on collection");
    }

    /// JS slice index rules: negatives count from the end, bounds clamp.
    std::optional<std::pair<std::int64_t, std::int64_t>> sliceBounds(
        const std::vector<RtValue>& args, std::int64_t len) {
        auto resolve = [&](const RtValue& v, std::int64_t fallback,
                           std::int64_t& out) {
            if (v.isNull()) {
                out = fallback;
                return true;
            }
            if (!v.isInt()) {
                diag("'slice' expects integer bounds");
                return false;
            }
            std::int64_t i = v.asInt();
            if (i < 0) i += len;
            out = std::clamp<std::int64_t>(i, 0, len);
            return true;
        };
        std::int64_t from = 0, to = len;
        if (args.size() >= 1 && !resolve(args[0], 0, from)) return std::nullopt;
        if (args.size() >= 2 && !resolve(args[1], len, to)) return std::nullopt;
        if (to < from) to = from;
        return std::make_pair(from, to);
    }

    template <typename Arity>
    RtValue stringMethod(const std::string& recv, const std::string& name,
                         const std::vector<RtValue>& args, Arity arity) {
        if (name == "includes" || name == "indexOf" || name == "concat") {
            if (!arity(1, 1)) return RtValue::invalid();
            if (!args[0].isStr()) return diag("'" + name + "' expects a string");
            const std::string& needle = args[0].asStr();
            if (name == "concat") return RtValue::str(recv + needle);
            std::size_t pos = recv.find(needle);
            if (name == "includes") return RtValue::boolean(pos != std::string::npos);
            if (pos == std::string::npos) return RtValue::integer(-1);
            return RtValue::integer(
                static_cast<std::int64_t>(utf8_length(std::string_view(recv).substr(0, pos))));
        }
        if (name == "slice") {
            if (!arity(0, 2)) return RtValue::invalid();
            auto offsets = utf8_offsets(recv);
            auto bounds = sliceBounds(args, static_cast<std::int64_t>(offsets.size()) - 1);
            if (!bounds) return RtValue::invalid();
            std::size_t from = offsets[static_cast<std::size_t>(bounds->first)];
            std::size_t to = offsets[static_cast<std::size_t>(bounds->second)];
            return RtValue::str(recv.substr(from, to - from));
        }
        return diag("unknown member '" + name + "' on string");
    }

    // ---- store mutation (private copy) ----

    std::optional<Scalar> valueToScalar(const RtValue& v) {
        switch (v.kind()) {
            case RtValue::Kind::Bool: return Scalar{v.asBool()};
            case RtValue::Kind::Int: return Scalar{v.asInt()};
            case RtValue::Kind::Real: return Scalar{v.asReal()};
            case RtValue::Kind::Str: return Scalar{v.asStr()};
            case RtValue::Kind::ObjRef: return Scalar{v.asObjRef().id};
            default: return std::nullopt;
        }
    }

    RtValue addObject(const navex::Call& n) {
        if (n.args.size() != 2) {
            return diag("'addObject' expects (record, className)");
        }
        const auto* record = std::get_if<navex::RecordLit>(&n.args[0]->node);
        if (!record) {
            return diag("'addObject' expects a record literal as its first argument");
        }
        RtValue classArg = eval(*n.args[1]);
        if (classArg.isInvalid()) return classArg;
        if (!classArg.isStr()) return diag("'addObject' expects a class name string");

        std::vector<std::pair<std::string, std::vector<Scalar>>> init;
        for (const auto& [key, expr] : record->fields) {
            RtValue v = eval(*expr);
            if (v.isInvalid()) return v;
            std::vector<Scalar> values;
            if (v.isColl()) {
                for (const auto& e : v.elements()) {
                    auto s = valueToScalar(e);
                    if (!s) return diag("'addObject' value for " + key + " is not storable");
                    values.push_back(std::move(*s));
                }
            } else if (!v.isNull()) {
                auto s = valueToScalar(v);
                if (!s) return diag("'addObject' value for " + key + " is not storable");
                values.push_back(std::move(*s));
            }
            init.emplace_back(key, std::move(values));
        }
        try {
            std::string id = writable().addObject(classArg.asStr(), init);
            return RtValue::objRef(id);
        } catch (const Error& e) {
            return diag(std::string("addObject: ") + e.what());
        }
    }

    // ---- operators ----

    RtValue binaryOp(const navex::BinaryOp& n) {
        using K = navex::BinOpKind;
        RtValue a = eval(*n.lhs);
        RtValue b = eval(*n.rhs);
        switch (n.op) {
            case K::And: return truth_to_value(logic_and(truth_of(a), truth_of(b)));
            case K::Or: return truth_to_value(logic_or(truth_of(a), truth_of(b)));
            case K::EqStrict:
            case K::NeStrict: {
                if (a.isInvalid() || b.isInvalid()) return RtValue::invalid();
                bool eq = equals_strict(a, b);
                return RtValue::boolean(n.op == K::EqStrict ? eq : !eq);
            }
            case K::EqLoose:
            case K::NeLoose: {
                if (a.isInvalid() || b.isInvalid()) return RtValue::invalid();
                bool eq = equals_coercing(a, b);
                return RtValue::boolean(n.op == K::EqLoose ? eq : !eq);
            }
            case K::Lt:
            case K::Le:
            case K::Gt:
            case K::Ge: {
                if (a.isUndefined() || b.isUndefined()) return RtValue::invalid();
                auto c = compareOrdered(a, b);
                if (!c) {
                    return diag(std::string("'") + navex::to_string(n.op) +
                                "' is not defined on these operands");
                }
                switch (n.op) {
                    case K::Lt: return RtValue::boolean(*c < 0);
                    case K::Le: return RtValue::boolean(*c <= 0);
                    case K::Gt: return RtValue::boolean(*c > 0);
                    default: return RtValue::boolean(*c >= 0);
                }
            }
            case K::Add: {
                if (a.isUndefined() || b.isUndefined()) return RtValue::invalid();
                if (a.isStr() && b.isStr()) return RtValue::str(a.asStr() + b.asStr());
                if (!bothNumeric(a, b)) return diag("'+' applies to numbers or strings");
                if (a.isInt() && b.isInt()) return RtValue::integer(a.asInt() + b.asInt());
                return RtValue::real(a.numeric() + b.numeric());
            }
            case K::Sub:
            case K::Mul: {
                if (a.isUndefined() || b.isUndefined()) return RtValue::invalid();
                if (!bothNumeric(a, b)) {
                    return diag(std::string("'") + navex::to_string(n.op) +
                                "' applies to numbers");
                }
                if (a.isInt() && b.isInt()) {
                    return RtValue::integer(n.op == K::Sub ? a.asInt() - b.asInt()
                                                           : a.asInt() * b.asInt());
                }
                double x = a.numeric(), y = b.numeric();
                return RtValue::real(n.op == K::Sub ? x - y : x * y);
            }
            case K::Div: {
                if (a.isUndefined() || b.isUndefined()) return RtValue::invalid();
                if (!bothNumeric(a, b)) return diag("'/' applies to numbers");
                if (b.numeric() == 0.0) return diag("division by zero");
                if (a.isInt() && b.isInt() && a.asInt() % b.asInt() == 0) {
                    return RtValue::integer(a.asInt() / b.asInt());
                }
                return RtValue::real(a.numeric() / b.numeric());
            }
            case K::Mod: {
                if (a.isUndefined() || b.isUndefined()) return RtValue::invalid();
                if (!bothNumeric(a, b)) return diag("'%' applies to numbers");
                if (b.numeric() == 0.0) return diag("modulo by zero");
                if (a.isInt() && b.isInt()) return RtValue::integer(a.asInt() % b.asInt());
                return RtValue::real(std::fmod(a.numeric(), b.numeric()));
            }
        }
        return RtValue::invalid();
    }

    RtValue unaryOp(const navex::UnaryOp& n) {
        RtValue v = eval(*n.operand);
        if (n.op == navex::UnOpKind::Not) return truth_to_value(logic_not(truth_of(v)));
        if (v.isInt()) return RtValue::integer(-v.asInt());
        if (v.isReal()) return RtValue::real(-v.asReal());
        if (v.isInvalid()) return v;
        return diag("unary '-' applies to numbers");
    }

    RtValue conditional(const navex::Conditional& n) {
        Truth c = truth_of(eval(*n.cond));
        if (c == Truth::True) return eval(*n.thenBranch);
        if (c == Truth::False) return eval(*n.elseBranch);
        return diag("conditional test is undefined");
    }
};

} // namespace

const char* to_string(Language lang) { return lang == Language::Ocl ? "ocl" : "navex"; }

std::optional<Language> language_from_string(const std::string& name) {
    if (name == "ocl") return Language::Ocl;
    if (name == "navex") return Language::Navex;
    return std::nullopt;
}

RtValue eval_ocl(const ocl::Expr& ast, const Env& env, EvalTrace* trace) {
    return OclEvaluator(env, trace).eval(ast);
}

RtValue eval_navex(const navex::Expr& ast, const Env& env, EvalTrace* trace) {
    return NavexEvaluator(env, trace).eval(ast);
}

RtValue execute_query(const StorePtr& store, Language language, const std::string& text,
                      EvalTrace* trace) {
    Env env;
    env.snapshot = store;
    env.contextBinding = RtValue::storeRef();
    if (language == Language::Ocl) {
        auto ast = ocl::parse_expression(text);
        return eval_ocl(*ast, env, trace);
    }
    auto ast = navex::parse_navex(text);
    return eval_navex(*ast, env, trace);
}

} // namespace mvx
