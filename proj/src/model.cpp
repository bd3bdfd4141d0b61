#include "mvx/model.hpp"

#include <algorithm>

#include "json.hpp"

#include "mvx/errors.hpp"
#include "mvx/util.hpp"

namespace mvx {

using nlohmann::json;

bool scalar_conforms(const Scalar& value, PrimitiveType type) {
    switch (type) {
        case PrimitiveType::Boolean: return std::holds_alternative<bool>(value);
        case PrimitiveType::Integer: return std::holds_alternative<std::int64_t>(value);
        case PrimitiveType::Real:
            // Integer is a subtype of Real for conformance purposes.
            return std::holds_alternative<double>(value) ||
                   std::holds_alternative<std::int64_t>(value);
        case PrimitiveType::String: return std::holds_alternative<std::string>(value);
    }
    return false;
}

RtValue scalar_to_value(const Scalar& value) {
    if (const bool* b = std::get_if<bool>(&value)) return RtValue::boolean(*b);
    if (const std::int64_t* i = std::get_if<std::int64_t>(&value)) return RtValue::integer(*i);
    if (const double* d = std::get_if<double>(&value)) return RtValue::real(*d);
    return RtValue::str(std::get<std::string>(value));
}

std::string render_scalar(const Scalar& value) {
    return render_value(scalar_to_value(value));
}

const char* to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::UnknownClass: return "UnknownClass";
        case Violation::Kind::AbstractInstantiation: return "AbstractInstantiation";
        case Violation::Kind::UnknownFeature: return "UnknownFeature";
        case Violation::Kind::TypeMismatch: return "TypeMismatch";
        case Violation::Kind::MultiplicityViolation: return "MultiplicityViolation";
        case Violation::Kind::DanglingReference: return "DanglingReference";
        case Violation::Kind::DuplicateContainment: return "DuplicateContainment";
    }
    return "?";
}

ModelStore::ModelStore(MetaModelPtr metamodel) : metamodel_(std::move(metamodel)) {}

const MObject* ModelStore::find(const std::string& id) const {
    auto it = objects_.find(id);
    return it == objects_.end() ? nullptr : &it->second;
}

void ModelStore::insertRaw(MObject object) {
    if (objects_.count(object.id)) {
        throw Error(ErrorKind::DuplicateId, "object id '" + object.id + "' already in store");
    }
    order_.push_back(object.id);
    objects_.emplace(object.id, std::move(object));
}

std::string ModelStore::addObject(
    const std::string& className,
    const std::vector<std::pair<std::string, std::vector<Scalar>>>& init,
    std::vector<ChangeEvent>* events) {
    const MetaClass* cls = metamodel_->findClass(className);
    if (!cls) throw Error(ErrorKind::UnknownClass, "no class named '" + className + "'");
    if (cls->isAbstract) {
        throw Error(ErrorKind::AbstractInstantiation,
                    "class '" + className + "' is abstract");
    }

    std::string id;
    std::vector<std::pair<std::string, std::vector<Scalar>>> slotInits;
    for (const auto& [key, values] : init) {
        if (key.empty() || key[0] != '$') {
            throw Error(ErrorKind::UnknownFeature,
                        "init keys must be $-prefixed, got '" + key + "'");
        }
        std::string name = key.substr(1);
        if (name == "id") {
            if (values.size() != 1 || !std::holds_alternative<std::string>(values[0])) {
                throw Error(ErrorKind::Schema, "$id must be a single string");
            }
            id = std::get<std::string>(values[0]);
            continue;
        }
        if (!metamodel_->findFeature(className, name)) {
            throw Error(ErrorKind::UnknownFeature,
                        "class '" + className + "' has no feature '" + name + "'");
        }
        slotInits.emplace_back(name, values);
    }
    if (id.empty()) {
        do {
            id = "o" + std::to_string(++idCounter_);
        } while (objects_.count(id));
    } else if (objects_.count(id)) {
        throw Error(ErrorKind::DuplicateId, "object id '" + id + "' already in store");
    }

    MObject obj;
    obj.id = id;
    obj.className = className;
    for (const auto& f : metamodel_->allFeatures(className)) {
        obj.slots.emplace(f.name(), Slot{f.name(), {}});
    }
    for (auto& [name, values] : slotInits) {
        obj.slots[name] = Slot{name, values};
    }
    order_.push_back(id);
    objects_.emplace(id, std::move(obj));

    if (events) {
        for (auto& [name, values] : slotInits) {
            if (!values.empty()) {
                events->push_back(ChangeEvent{id, name, {}, values});
            }
        }
    }
    return id;
}

std::optional<ChangeEvent> ModelStore::setValue(const std::string& objectId,
                                                const std::string& featureName,
                                                std::vector<Scalar> values) {
    auto it = objects_.find(objectId);
    if (it == objects_.end()) {
        throw Error(ErrorKind::UnknownObject, "no object with id '" + objectId + "'");
    }
    MObject& obj = it->second;
    auto feature = metamodel_->findFeature(obj.className, featureName);
    if (!feature) {
        throw Error(ErrorKind::UnknownFeature,
                    "class '" + obj.className + "' has no feature '" + featureName + "'");
    }
    if (!feature->multiplicity().admits(values.size())) {
        throw Error(ErrorKind::MultiplicityViolation,
                    "feature '" + featureName + "' admits [" +
                        std::to_string(feature->multiplicity().lower) + ", " +
                        (feature->multiplicity().bounded()
                             ? std::to_string(*feature->multiplicity().upper)
                             : std::string("*")) +
                        "] values, got " + std::to_string(values.size()));
    }
    for (const auto& v : values) {
        if (feature->isAttribute()) {
            if (!scalar_conforms(v, feature->attribute->type)) {
                throw Error(ErrorKind::TypeMismatch,
                            "value " + render_scalar(v) + " does not conform to " +
                                to_string(feature->attribute->type) + " attribute '" +
                                featureName + "'");
            }
        } else if (!std::holds_alternative<std::string>(v)) {
            throw Error(ErrorKind::TypeMismatch,
                        "reference '" + featureName + "' values must be object ids");
        }
    }

    Slot& slot = obj.slots[featureName];
    if (slot.feature.empty()) slot.feature = featureName;
    if (slot.values == values) return std::nullopt;
    ChangeEvent event{objectId, featureName, slot.values, values};
    slot.values = std::move(values);
    return event;
}

FeatureHandle ModelStore::getFeature(const std::string& objectId,
                                     const std::string& featureName) const {
    const MObject* obj = find(objectId);
    if (!obj) throw Error(ErrorKind::UnknownObject, "no object with id '" + objectId + "'");
    auto feature = metamodel_->findFeature(obj->className, featureName);
    if (!feature) {
        throw Error(ErrorKind::UnknownFeature,
                    "class '" + obj->className + "' has no feature '" + featureName + "'");
    }
    FeatureHandle handle;
    handle.objectId = objectId;
    handle.feature = featureName;
    handle.multi = !feature->multiplicity().isSingle();
    if (auto it = obj->slots.find(featureName); it != obj->slots.end()) {
        for (const auto& v : it->second.values) {
            if (feature->isAttribute()) {
                handle.values.push_back(scalar_to_value(v));
            } else {
                handle.values.push_back(RtValue::objRef(std::get<std::string>(v)));
            }
        }
    }
    return handle;
}

std::vector<std::string> ModelStore::allInstanceIds(const std::string& className,
                                                    bool includeSubclasses) const {
    if (!metamodel_->findClass(className)) {
        throw Error(ErrorKind::UnknownClass, "no class named '" + className + "'");
    }
    std::vector<std::string> ids;
    for (const auto& id : order_) {
        const MObject& obj = objects_.at(id);
        bool match = includeSubclasses ? metamodel_->isKindOf(obj.className, className)
                                       : obj.className == className;
        if (match) ids.push_back(id);
    }
    return ids;
}

std::vector<RtValue> ModelStore::allInstances(const std::string& className,
                                              bool includeSubclasses) const {
    std::vector<RtValue> refs;
    for (auto& id : allInstanceIds(className, includeSubclasses)) {
        refs.push_back(RtValue::objRef(id));
    }
    return refs;
}

std::optional<std::string> ModelStore::containerOf(const std::string& id) const {
    for (const auto& containerId : order_) {
        const MObject& container = objects_.at(containerId);
        for (const auto& [name, slot] : container.slots) {
            auto feature = metamodel_->findFeature(container.className, name);
            if (!feature || feature->isAttribute() || !feature->reference->containment) continue;
            for (const auto& v : slot.values) {
                if (const std::string* target = std::get_if<std::string>(&v)) {
                    if (*target == id) return containerId;
                }
            }
        }
    }
    return std::nullopt;
}

namespace {

int kind_rank(Violation::Kind kind) { return static_cast<int>(kind); }

void sort_violations(std::vector<Violation>& violations) {
    std::stable_sort(violations.begin(), violations.end(),
                     [](const Violation& a, const Violation& b) {
                         if (a.objectId != b.objectId) return a.objectId < b.objectId;
                         if (a.featureName != b.featureName) return a.featureName < b.featureName;
                         return kind_rank(a.kind) < kind_rank(b.kind);
                     });
}

} // namespace

std::vector<Violation> check_conformance(const ModelStore& store) {
    const MetaModel& mm = store.metamodel();
    std::vector<Violation> out;
    // (targetId -> number of containment slots holding it)
    std::unordered_map<std::string, int> containmentCount;

    for (const auto& id : store.insertionOrder()) {
        const MObject& obj = *store.find(id);
        const MetaClass* cls = mm.findClass(obj.className);
        if (!cls) {
            out.push_back({Violation::Kind::UnknownClass, id, "",
                           "object '" + id + "' instantiates unknown class '" + obj.className +
                               "'"});
            continue;
        }
        if (cls->isAbstract) {
            out.push_back({Violation::Kind::AbstractInstantiation, id, "",
                           "object '" + id + "' instantiates abstract class '" + obj.className +
                               "'"});
        }

        for (const auto& [name, slot] : obj.slots) {
            auto feature = mm.findFeature(obj.className, name);
            if (!feature) {
                out.push_back({Violation::Kind::UnknownFeature, id, name,
                               "class '" + obj.className + "' declares no feature '" + name +
                                   "'"});
                continue;
            }
            if (feature->isAttribute()) {
                for (const auto& v : slot.values) {
                    if (!scalar_conforms(v, feature->attribute->type)) {
                        out.push_back({Violation::Kind::TypeMismatch, id, name,
                                       "value " + render_scalar(v) + " does not conform to " +
                                           std::string(to_string(feature->attribute->type)) +
                                           " attribute '" + name + "'"});
                    }
                }
            } else {
                for (const auto& v : slot.values) {
                    const std::string* target = std::get_if<std::string>(&v);
                    if (!target) {
                        out.push_back({Violation::Kind::TypeMismatch, id, name,
                                       "reference '" + name + "' holds non-id value " +
                                           render_scalar(v)});
                        continue;
                    }
                    if (!store.contains(*target)) {
                        out.push_back({Violation::Kind::DanglingReference, id, name,
                                       "reference '" + name + "' points at missing object '" +
                                           *target + "'"});
                    } else if (feature->reference->containment) {
                        ++containmentCount[*target];
                    }
                }
            }
        }

        for (const auto& feature : mm.allFeatures(obj.className)) {
            std::size_t count = 0;
            if (auto it = obj.slots.find(feature.name()); it != obj.slots.end()) {
                count = it->second.values.size();
            }
            if (!feature.multiplicity().admits(count)) {
                const auto& m = feature.multiplicity();
                out.push_back(
                    {Violation::Kind::MultiplicityViolation, id, feature.name(),
                     "feature '" + feature.name() + "' holds " + std::to_string(count) +
                         " values, outside [" + std::to_string(m.lower) + ", " +
                         (m.bounded() ? std::to_string(*m.upper) : std::string("*")) + "]"});
            }
        }
    }

    for (const auto& [targetId, count] : containmentCount) {
        if (count > 1) {
            out.push_back({Violation::Kind::DuplicateContainment, targetId, "",
                           "object '" + targetId + "' is contained " + std::to_string(count) +
                               " times"});
        }
    }

    sort_violations(out);
    return out;
}

namespace {

Scalar json_to_scalar(const json& node, const std::string& path) {
    if (node.is_boolean()) return node.get<bool>();
    if (node.is_number_integer()) return node.get<std::int64_t>();
    if (node.is_number_unsigned()) return static_cast<std::int64_t>(node.get<std::uint64_t>());
    if (node.is_number_float()) return node.get<double>();
    if (node.is_string()) return node.get<std::string>();
    throw Error(ErrorKind::Schema, path + ": slot values must be scalars or id strings");
}

json scalar_to_json(const Scalar& value) {
    if (const bool* b = std::get_if<bool>(&value)) return *b;
    if (const std::int64_t* i = std::get_if<std::int64_t>(&value)) return *i;
    if (const double* d = std::get_if<double>(&value)) return *d;
    return std::get<std::string>(value);
}

} // namespace

ModelStore load_model(const std::string& text, MetaModelPtr metamodel) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Schema, std::string("model is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::Schema, "$: model document must be an object");
    auto objectsIt = doc.find("objects");
    if (objectsIt == doc.end() || !objectsIt->is_array()) {
        throw Error(ErrorKind::Schema, "$.objects: expected an array");
    }

    ModelStore store(std::move(metamodel));
    for (std::size_t i = 0; i < objectsIt->size(); ++i) {
        const std::string opath = "$.objects[" + std::to_string(i) + "]";
        const json& onode = (*objectsIt)[i];
        if (!onode.is_object()) throw Error(ErrorKind::Schema, opath + ": expected an object");
        MObject obj;
        auto idIt = onode.find("id");
        if (idIt == onode.end() || !idIt->is_string()) {
            throw Error(ErrorKind::Schema, opath + ".id: expected a string");
        }
        obj.id = idIt->get<std::string>();
        auto classIt = onode.find("class");
        if (classIt == onode.end() || !classIt->is_string()) {
            throw Error(ErrorKind::Schema, opath + ".class: expected a string");
        }
        obj.className = classIt->get<std::string>();
        if (auto slotsIt = onode.find("slots"); slotsIt != onode.end()) {
            if (!slotsIt->is_object()) {
                throw Error(ErrorKind::Schema, opath + ".slots: expected an object");
            }
            for (auto it = slotsIt->begin(); it != slotsIt->end(); ++it) {
                const std::string spath = opath + ".slots." + it.key();
                Slot slot;
                slot.feature = it.key();
                if (it.value().is_array()) {
                    for (const auto& v : it.value()) {
                        slot.values.push_back(json_to_scalar(v, spath));
                    }
                } else {
                    // scalar shorthand: equal to a 1-element list
                    slot.values.push_back(json_to_scalar(it.value(), spath));
                }
                obj.slots.emplace(it.key(), std::move(slot));
            }
        }
        store.insertRaw(std::move(obj));
    }
    return store;
}

ModelStore load_model_file(const std::string& path, MetaModelPtr metamodel) {
    return load_model(read_file(path), std::move(metamodel));
}

std::string store_to_document(const ModelStore& store) {
    json objects = json::array();
    for (const auto& id : store.insertionOrder()) {
        const MObject& obj = *store.find(id);
        json slots = json::object();
        for (const auto& [name, slot] : obj.slots) {
            json values = json::array();
            for (const auto& v : slot.values) values.push_back(scalar_to_json(v));
            slots[name] = std::move(values);
        }
        objects.push_back({{"id", obj.id}, {"class", obj.className}, {"slots", std::move(slots)}});
    }
    json doc = {{"metamodel", store.metamodel().name()}, {"objects", std::move(objects)}};
    return doc.dump(2) + "\n";
}

std::string store_content_hash(const ModelStore& store) {
    return content_hash_hex(store_to_document(store));
}

} // namespace mvx
