#include "mvx/meta.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "mvx/errors.hpp"
#include "mvx/util.hpp"

namespace mvx {

using nlohmann::json;

const char* to_string(PrimitiveType type) {
    switch (type) {
        case PrimitiveType::Boolean: return "Boolean";
        case PrimitiveType::Integer: return "Integer";
        case PrimitiveType::Real: return "Real";
        case PrimitiveType::String: return "String";
    }
    return "?";
}

std::optional<PrimitiveType> primitive_from_string(const std::string& name) {
    if (name == "Boolean") return PrimitiveType::Boolean;
    if (name == "Integer") return PrimitiveType::Integer;
    if (name == "Real") return PrimitiveType::Real;
    if (name == "String") return PrimitiveType::String;
    if (name == "Number") return PrimitiveType::Real;
    return std::nullopt;
}

MetaModel::MetaModel(std::string name, std::vector<MetaClass> classes)
    : name_(std::move(name)), classes_(std::move(classes)) {}

const MetaClass* MetaModel::findClass(const std::string& name) const {
    for (const auto& c : classes_) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

bool MetaModel::isKindOf(const std::string& sub, const std::string& super) const {
    for (const MetaClass* c : linearize(sub)) {
        if (c->name == super) return true;
    }
    return false;
}

std::vector<const MetaClass*> MetaModel::linearize(const std::string& className) const {
    std::vector<const MetaClass*> chain;
    std::unordered_set<std::string> visited;
    auto visit = [&](auto&& self, const std::string& name) -> void {
        if (visited.count(name)) return;
        visited.insert(name);
        const MetaClass* c = findClass(name);
        if (!c) return;
        chain.push_back(c);
        for (const auto& s : c->supers) self(self, s);
    };
    visit(visit, className);
    return chain;
}

std::vector<FeatureView> MetaModel::allFeatures(const std::string& className) const {
    std::vector<FeatureView> features;
    for (const MetaClass* c : linearize(className)) {
        for (const auto& a : c->attributes) features.push_back({&a, nullptr, c});
        for (const auto& r : c->references) features.push_back({nullptr, &r, c});
    }
    return features;
}

std::optional<FeatureView> MetaModel::findFeature(const std::string& className,
                                                  const std::string& featureName) const {
    for (const auto& f : allFeatures(className)) {
        if (f.name() == featureName) return f;
    }
    return std::nullopt;
}

const OperationSig* MetaModel::findOperation(const std::string& className,
                                             const std::string& opName) const {
    for (const MetaClass* c : linearize(className)) {
        for (const auto& op : c->operations) {
            if (op.name == opName) return &op;
        }
    }
    return nullptr;
}

std::vector<std::string> MetaModel::withSubclasses(const std::string& className) const {
    std::vector<std::string> names;
    for (const auto& c : classes_) {
        if (isKindOf(c.name, className)) names.push_back(c.name);
    }
    return names;
}

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::Schema, path + ": " + what);
}

const json& require(const json& node, const char* key, const std::string& path) {
    auto it = node.find(key);
    if (it == node.end()) schema_fail(path, std::string("missing field '") + key + "'");
    return *it;
}

std::string require_string(const json& node, const char* key, const std::string& path) {
    const json& v = require(node, key, path);
    if (!v.is_string()) schema_fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

bool get_bool(const json& node, const char* key, bool fallback, const std::string& path) {
    auto it = node.find(key);
    if (it == node.end()) return fallback;
    if (!it->is_boolean()) schema_fail(path + "." + key, "expected a boolean");
    return it->get<bool>();
}

int require_int(const json& node, const char* key, const std::string& path) {
    const json& v = require(node, key, path);
    if (!v.is_number_integer()) schema_fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

Multiplicity read_multiplicity(const json& node, const std::string& path) {
    Multiplicity m;
    m.lower = require_int(node, "lower", path);
    int upper = require_int(node, "upper", path);
    if (m.lower < 0) schema_fail(path + ".lower", "must be non-negative");
    if (upper == -1) {
        m.upper = std::nullopt;
    } else {
        if (upper < 0) schema_fail(path + ".upper", "must be -1 (unbounded) or non-negative");
        m.upper = upper;
        if (m.lower > upper) {
            schema_fail(path, "lower " + std::to_string(m.lower) + " exceeds upper " +
                                  std::to_string(upper));
        }
    }
    return m;
}

PrimitiveType read_type(const json& node, const char* key, const std::string& path) {
    std::string name = require_string(node, key, path);
    auto type = primitive_from_string(name);
    if (!type) schema_fail(path + "." + key, "unknown primitive type '" + name + "'");
    return *type;
}

} // namespace

MetaModelPtr load_metamodel(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Schema, std::string("metamodel is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) schema_fail("$", "metamodel document must be a JSON object");

    std::string mmName = require_string(doc, "name", "$");
    const json& classesNode = require(doc, "classes", "$");
    if (!classesNode.is_array()) schema_fail("$.classes", "expected an array");

    std::vector<MetaClass> classes;
    std::unordered_set<std::string> classNames;
    for (std::size_t ci = 0; ci < classesNode.size(); ++ci) {
        const std::string cpath = "$.classes[" + std::to_string(ci) + "]";
        const json& cnode = classesNode[ci];
        if (!cnode.is_object()) schema_fail(cpath, "expected an object");

        MetaClass cls;
        cls.name = require_string(cnode, "name", cpath);
        if (cls.name.empty()) schema_fail(cpath + ".name", "class name must be non-empty");
        if (!classNames.insert(cls.name).second) {
            throw Error(ErrorKind::DuplicateClassName,
                        cpath + ".name: class '" + cls.name + "' declared twice");
        }
        cls.isAbstract = get_bool(cnode, "abstract", false, cpath);

        if (auto it = cnode.find("supers"); it != cnode.end()) {
            if (!it->is_array()) schema_fail(cpath + ".supers", "expected an array");
            for (const auto& s : *it) {
                if (!s.is_string()) schema_fail(cpath + ".supers", "expected strings");
                cls.supers.push_back(s.get<std::string>());
            }
        }
        if (auto it = cnode.find("attributes"); it != cnode.end()) {
            if (!it->is_array()) schema_fail(cpath + ".attributes", "expected an array");
            for (std::size_t ai = 0; ai < it->size(); ++ai) {
                const std::string apath = cpath + ".attributes[" + std::to_string(ai) + "]";
                const json& anode = (*it)[ai];
                if (!anode.is_object()) schema_fail(apath, "expected an object");
                MetaAttribute attr;
                attr.name = require_string(anode, "name", apath);
                attr.type = read_type(anode, "type", apath);
                attr.multiplicity = read_multiplicity(anode, apath);
                cls.attributes.push_back(std::move(attr));
            }
        }
        if (auto it = cnode.find("references"); it != cnode.end()) {
            if (!it->is_array()) schema_fail(cpath + ".references", "expected an array");
            for (std::size_t ri = 0; ri < it->size(); ++ri) {
                const std::string rpath = cpath + ".references[" + std::to_string(ri) + "]";
                const json& rnode = (*it)[ri];
                if (!rnode.is_object()) schema_fail(rpath, "expected an object");
                MetaReference ref;
                ref.name = require_string(rnode, "name", rpath);
                ref.target = require_string(rnode, "target", rpath);
                ref.multiplicity = read_multiplicity(rnode, rpath);
                ref.containment = get_bool(rnode, "containment", false, rpath);
                cls.references.push_back(std::move(ref));
            }
        }
        if (auto it = cnode.find("operations"); it != cnode.end()) {
            if (!it->is_array()) schema_fail(cpath + ".operations", "expected an array");
            for (std::size_t oi = 0; oi < it->size(); ++oi) {
                const std::string opath = cpath + ".operations[" + std::to_string(oi) + "]";
                const json& onode = (*it)[oi];
                if (!onode.is_object()) schema_fail(opath, "expected an object");
                OperationSig op;
                op.name = require_string(onode, "name", opath);
                if (auto pit = onode.find("params"); pit != onode.end()) {
                    if (!pit->is_array()) schema_fail(opath + ".params", "expected an array");
                    std::unordered_set<std::string> paramNames;
                    for (std::size_t pi = 0; pi < pit->size(); ++pi) {
                        const std::string ppath = opath + ".params[" + std::to_string(pi) + "]";
                        const json& pnode = (*pit)[pi];
                        if (!pnode.is_object()) schema_fail(ppath, "expected an object");
                        OperationParam param;
                        param.name = require_string(pnode, "name", ppath);
                        param.type = read_type(pnode, "type", ppath);
                        if (!paramNames.insert(param.name).second) {
                            schema_fail(ppath + ".name",
                                        "duplicate parameter '" + param.name + "'");
                        }
                        op.params.push_back(std::move(param));
                    }
                }
                if (auto rit = onode.find("returns"); rit != onode.end() && !rit->is_null()) {
                    if (!rit->is_string()) schema_fail(opath + ".returns", "expected a string or null");
                    auto type = primitive_from_string(rit->get<std::string>());
                    if (!type) {
                        schema_fail(opath + ".returns",
                                    "unknown primitive type '" + rit->get<std::string>() + "'");
                    }
                    op.returnType = *type;
                }
                cls.operations.push_back(std::move(op));
            }
        }
        classes.push_back(std::move(cls));
    }

    // Supers and reference targets must name declared classes.
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        const auto& cls = classes[ci];
        const std::string cpath = "$.classes[" + std::to_string(ci) + "]";
        for (const auto& s : cls.supers) {
            if (!classNames.count(s)) {
                throw Error(ErrorKind::UnknownSuper,
                            cpath + ".supers: class '" + cls.name + "' extends unknown class '" +
                                s + "'");
            }
        }
        for (const auto& r : cls.references) {
            if (!classNames.count(r.target)) {
                throw Error(ErrorKind::UnknownTarget,
                            cpath + ".references: reference '" + r.name +
                                "' targets unknown class '" + r.target + "'");
            }
        }
    }

    // Inheritance graph must be acyclic. Colors: 0 new, 1 active, 2 done.
    std::unordered_map<std::string, const MetaClass*> byName;
    for (const auto& c : classes) byName[c.name] = &c;
    std::unordered_map<std::string, int> color;
    auto dfs = [&](auto&& self, const std::string& name, std::vector<std::string>& stack) -> bool {
        color[name] = 1;
        stack.push_back(name);
        for (const auto& s : byName.at(name)->supers) {
            int c = color[s];
            if (c == 1) {
                stack.push_back(s);
                return false;
            }
            if (c == 0 && !self(self, s, stack)) return false;
        }
        stack.pop_back();
        color[name] = 2;
        return true;
    };
    for (const auto& c : classes) {
        if (color[c.name] == 0) {
            std::vector<std::string> stack;
            if (!dfs(dfs, c.name, stack)) {
                std::string cycle;
                for (const auto& n : stack) {
                    if (!cycle.empty()) cycle += " -> ";
                    cycle += n;
                }
                throw Error(ErrorKind::CyclicInheritance, "inheritance cycle: " + cycle);
            }
        }
    }

    auto model = std::make_shared<MetaModel>(std::move(mmName), std::move(classes));

    // Visible feature names must be unique per class, inherited ones included.
    for (const auto& cls : model->classes()) {
        std::unordered_set<std::string> seen;
        for (const auto& f : model->allFeatures(cls.name)) {
            if (!seen.insert(f.name()).second) {
                throw Error(ErrorKind::DuplicateFeature,
                            "class '" + cls.name + "' sees feature '" + f.name() +
                                "' more than once");
            }
        }
    }
    return model;
}

MetaModelPtr load_metamodel_file(const std::string& path) {
    return load_metamodel(read_file(path));
}

} // namespace mvx
