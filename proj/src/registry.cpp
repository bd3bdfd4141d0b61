#include "mvx/registry.hpp"

#include <json.hpp>

#include "mvx/errors.hpp"
#include "mvx/ocl/parser.hpp"
#include "mvx/navex/parser.hpp"
#include "mvx/util.hpp"

namespace mvx {

namespace {

using nlohmann::json;

void walkSelfDeps(const ocl::Expr& e, std::vector<std::string>& out);

void walkSelfDepsList(const std::vector<ocl::ExprPtr>& list, std::vector<std::string>& out) {
    for (const auto& e : list) walkSelfDeps(*e, out);
}

void addDep(std::vector<std::string>& out, const std::string& name) {
    for (const auto& d : out) {
        if (d == name) return;
    }
    out.push_back(name);
}

void walkSelfDeps(const ocl::Expr& e, std::vector<std::string>& out) {
    struct Visitor {
        std::vector<std::string>& out;
        void operator()(const ocl::BoolLit&) {}
        void operator()(const ocl::IntLit&) {}
        void operator()(const ocl::RealLit&) {}
        void operator()(const ocl::StringLit&) {}
        void operator()(const ocl::CollLit& n) { walkSelfDepsList(n.elements, out); }
        void operator()(const ocl::VarRef&) {}
        void operator()(const ocl::PropertyNav& n) {
            if (const auto* var = std::get_if<ocl::VarRef>(&n.source->node)) {
                if (var->name == "self") addDep(out, n.name);
            }
            walkSelfDeps(*n.source, out);
        }
        void operator()(const ocl::OperationCall& n) {
            walkSelfDeps(*n.source, out);
            walkSelfDepsList(n.args, out);
        }
        void operator()(const ocl::ArrowCall& n) {
            walkSelfDeps(*n.source, out);
            walkSelfDepsList(n.args, out);
        }
        void operator()(const ocl::IteratorCall& n) {
            walkSelfDeps(*n.source, out);
            walkSelfDeps(*n.body, out);
        }
        void operator()(const ocl::IterateCall& n) {
            walkSelfDeps(*n.source, out);
            walkSelfDeps(*n.init, out);
            walkSelfDeps(*n.body, out);
        }
        void operator()(const ocl::BinaryOp& n) {
            walkSelfDeps(*n.lhs, out);
            walkSelfDeps(*n.rhs, out);
        }
        void operator()(const ocl::UnaryOp& n) { walkSelfDeps(*n.operand, out); }
        void operator()(const ocl::IfExpr& n) {
            walkSelfDeps(*n.cond, out);
            walkSelfDeps(*n.thenBranch, out);
            walkSelfDeps(*n.elseBranch, out);
        }
        void operator()(const ocl::LetExpr& n) {
            walkSelfDeps(*n.init, out);
            walkSelfDeps(*n.body, out);
        }
    };
    std::visit(Visitor{out}, e.node);
}

/// data.$name members anywhere in a NavEx body.
void walkDataDeps(const navex::Expr& e, std::vector<std::string>& out) {
    struct Visitor {
        std::vector<std::string>& out;
        void list(const std::vector<navex::ExprPtr>& items) {
            for (const auto& i : items) walkDataDeps(*i, out);
        }
        void operator()(const navex::BoolLit&) {}
        void operator()(const navex::IntLit&) {}
        void operator()(const navex::RealLit&) {}
        void operator()(const navex::StringLit&) {}
        void operator()(const navex::ArrayLit& n) { list(n.elements); }
        void operator()(const navex::RecordLit& n) {
            for (const auto& f : n.fields) walkDataDeps(*f.second, out);
        }
        void operator()(const navex::VarRef&) {}
        void operator()(const navex::Member& n) {
            if (n.dollar) {
                if (const auto* var = std::get_if<navex::VarRef>(&n.source->node)) {
                    if (var->name == "data") addDep(out, n.name);
                }
            }
            walkDataDeps(*n.source, out);
        }
        void operator()(const navex::Index& n) {
            walkDataDeps(*n.source, out);
            walkDataDeps(*n.index, out);
        }
        void operator()(const navex::Call& n) {
            walkDataDeps(*n.callee, out);
            list(n.args);
        }
        void operator()(const navex::Lambda& n) { walkDataDeps(*n.body, out); }
        void operator()(const navex::BinaryOp& n) {
            walkDataDeps(*n.lhs, out);
            walkDataDeps(*n.rhs, out);
        }
        void operator()(const navex::UnaryOp& n) { walkDataDeps(*n.operand, out); }
        void operator()(const navex::Conditional& n) {
            walkDataDeps(*n.cond, out);
            walkDataDeps(*n.thenBranch, out);
            walkDataDeps(*n.elseBranch, out);
        }
    };
    std::visit(Visitor{out}, e.node);
}

void requireClass(const MetaModel& mm, const std::string& name, const std::string& where) {
    if (!mm.findClass(name)) {
        throw Error(ErrorKind::UnknownClass, where + " names unknown class '" + name + "'");
    }
}

Registry fromOclText(const std::string& text, const MetaModelPtr& mm) {
    Registry registry;
    auto decls = ocl::parse_constraints(text);
    for (auto& decl : decls) {
        if (auto* cls = std::get_if<ocl::ClassContext>(&decl)) {
            requireClass(*mm, cls->className, "context declaration");
            int unnamed = 0;
            for (auto& inv : cls->invariants) {
                Constraint c;
                c.name = inv.name.empty()
                             ? cls->className + ".inv" + std::to_string(++unnamed)
                             : inv.name;
                c.language = Language::Ocl;
                c.contextClass = cls->className;
                c.severity = Severity::Error;
                c.expressionText = ocl::print(*inv.body);
                c.message = "invariant '" + c.name + "' does not hold";
                c.oclBody = std::move(inv.body);
                registry.constraints.push_back(std::move(c));
            }
        } else if (auto* op = std::get_if<ocl::OperationContext>(&decl)) {
            requireClass(*mm, op->className, "operation context");
            OperationContract contract;
            contract.className = op->className;
            contract.sig = op->sig;
            for (auto& pre : op->pres) {
                contract.pres.push_back({pre.name, ocl::print(*pre.body), std::move(pre.body)});
            }
            for (auto& post : op->posts) {
                contract.posts.push_back(
                    {post.name, ocl::print(*post.body), std::move(post.body)});
            }
            registry.contracts.push_back(std::move(contract));
        } else {
            auto& der = std::get<ocl::DeriveContext>(decl);
            requireClass(*mm, der.className, "derive context");
            auto feature = mm->findFeature(der.className, der.attributeName);
            if (!feature || !feature->isAttribute()) {
                throw Error(ErrorKind::UnknownFeature,
                            "derive target '" + der.className + "." + der.attributeName +
                                "' is not a declared attribute");
            }
            if (feature->attribute->type != der.declaredType) {
                throw Error(ErrorKind::TypeMismatch,
                            "derive target '" + der.attributeName + "' is declared " +
                                to_string(feature->attribute->type) + ", rule says " +
                                to_string(der.declaredType));
            }
            DerivedRule rule;
            rule.contextClass = der.className;
            rule.targetAttribute = der.attributeName;
            rule.language = Language::Ocl;
            rule.expressionText = ocl::print(*der.body);
            walkSelfDeps(*der.body, rule.dependencies);
            rule.oclBody = std::move(der.body);
            registry.derived.push_back(std::move(rule));
        }
    }
    return registry;
}

std::string requireString(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw Error(ErrorKind::Schema, path + " needs a string field '" + key + "'");
    }
    return j[key].get<std::string>();
}

Language requireLanguage(const json& j, const std::string& path) {
    auto lang = language_from_string(requireString(j, "language", path));
    if (!lang) throw Error(ErrorKind::Schema, path + ".language must be \"ocl\" or \"navex\"");
    return *lang;
}

Registry fromJson(const std::string& text, const MetaModelPtr& mm) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorKind::Schema, "registry document is not a JSON object");
    }
    Registry registry;

    if (doc.contains("constraints")) {
        if (!doc["constraints"].is_array()) {
            throw Error(ErrorKind::Schema, "$.constraints must be an array");
        }
        std::size_t i = 0;
        for (const auto& entry : doc["constraints"]) {
            std::string path = "$.constraints[" + std::to_string(i++) + "]";
            auto severity = severity_from_string(requireString(entry, "severity", path));
            if (!severity) {
                throw Error(ErrorKind::Schema,
                            path + ".severity must be \"error\" or \"warning\"");
            }
            std::string applicability;
            if (entry.contains("applicability") && !entry["applicability"].is_null()) {
                if (!entry["applicability"].is_string()) {
                    throw Error(ErrorKind::Schema, path + ".applicability must be string|null");
                }
                applicability = entry["applicability"].get<std::string>();
            }
            registry.constraints.push_back(make_constraint(
                requireString(entry, "name", path), requireLanguage(entry, path),
                requireString(entry, "context", path), *severity,
                requireString(entry, "message", path), requireString(entry, "expression", path),
                applicability, *mm));
        }
    }

    if (doc.contains("derived")) {
        if (!doc["derived"].is_array()) {
            throw Error(ErrorKind::Schema, "$.derived must be an array");
        }
        std::size_t i = 0;
        for (const auto& entry : doc["derived"]) {
            std::string path = "$.derived[" + std::to_string(i++) + "]";
            DerivedRule rule;
            rule.contextClass = requireString(entry, "context", path);
            rule.targetAttribute = requireString(entry, "target", path);
            rule.language = requireLanguage(entry, path);
            rule.expressionText = requireString(entry, "expression", path);
            if (rule.language == Language::Ocl) {
                rule.oclBody = ocl::parse_expression(rule.expressionText);
            } else {
                rule.navexBody = navex::parse_navex(rule.expressionText);
            }
            if (entry.contains("dependencies")) {
                if (!entry["dependencies"].is_array()) {
                    throw Error(ErrorKind::Schema, path + ".dependencies must be an array");
                }
                for (const auto& dep : entry["dependencies"]) {
                    if (!dep.is_string()) {
                        throw Error(ErrorKind::Schema, path + ".dependencies must hold strings");
                    }
                    rule.dependencies.push_back(dep.get<std::string>());
                }
            } else if (rule.language == Language::Ocl) {
                walkSelfDeps(*rule.oclBody, rule.dependencies);
            } else {
                walkDataDeps(*rule.navexBody, rule.dependencies);
            }
            registry.derived.push_back(std::move(rule));
        }
    }

    if (doc.contains("contracts")) {
        if (!doc["contracts"].is_array()) {
            throw Error(ErrorKind::Schema, "$.contracts must be an array");
        }
        std::size_t i = 0;
        for (const auto& entry : doc["contracts"]) {
            std::string path = "$.contracts[" + std::to_string(i++) + "]";
            // Reassemble a context declaration so @pre/result placement
            // rules apply exactly as for .ocl sources.
            std::string decl = "context " + requireString(entry, "context", path) +
                               "::" + requireString(entry, "operation", path) + "(";
            if (entry.contains("params")) {
                if (!entry["params"].is_array()) {
                    throw Error(ErrorKind::Schema, path + ".params must be an array");
                }
                bool first = true;
                for (const auto& p : entry["params"]) {
                    if (!first) decl += ", ";
                    first = false;
                    decl += requireString(p, "name", path + ".params") + ": " +
                            requireString(p, "type", path + ".params");
                }
            }
            decl += ")";
            if (entry.contains("returns") && !entry["returns"].is_null()) {
                if (!entry["returns"].is_string()) {
                    throw Error(ErrorKind::Schema, path + ".returns must be string|null");
                }
                decl += ": " + entry["returns"].get<std::string>();
            }
            decl += "\n";
            auto clauseList = [&](const char* key) {
                std::vector<std::string> texts;
                if (!entry.contains(key)) return texts;
                if (!entry[key].is_array()) {
                    throw Error(ErrorKind::Schema,
                                path + "." + key + " must be an array of strings");
                }
                for (const auto& t : entry[key]) {
                    if (!t.is_string()) {
                        throw Error(ErrorKind::Schema,
                                    path + "." + key + " must be an array of strings");
                    }
                    texts.push_back(t.get<std::string>());
                }
                return texts;
            };
            for (const auto& t : clauseList("pre")) decl += "pre: " + t + "\n";
            for (const auto& t : clauseList("post")) decl += "post: " + t + "\n";

            Registry sub = fromOclText(decl, mm);
            if (sub.contracts.size() != 1) {
                throw Error(ErrorKind::Schema, path + " does not define a contract");
            }
            registry.contracts.push_back(std::move(sub.contracts[0]));
        }
    }
    return registry;
}

} // namespace

std::vector<std::string> infer_self_dependencies(const ocl::Expr& body) {
    std::vector<std::string> out;
    walkSelfDeps(body, out);
    return out;
}

Registry load_registry(const std::string& text, const MetaModelPtr& metamodel) {
    std::size_t i = 0;
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r' ||
                               text[i] == '\n')) {
        ++i;
    }
    if (i < text.size() && text[i] == '{') return fromJson(text, metamodel);
    return fromOclText(text, metamodel);
}

Registry load_registry_file(const std::string& path, const MetaModelPtr& metamodel) {
    return load_registry(read_file(path), metamodel);
}

} // namespace mvx
