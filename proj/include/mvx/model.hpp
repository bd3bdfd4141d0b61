#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "mvx/meta.hpp"
#include "mvx/value.hpp"

namespace mvx {

/// Primitive slot value. Reference slots hold object ids as strings; which
/// interpretation applies is decided by the declared feature.
using Scalar = std::variant<bool, std::int64_t, double, std::string>;

bool scalar_conforms(const Scalar& value, PrimitiveType type);
RtValue scalar_to_value(const Scalar& value);
std::string render_scalar(const Scalar& value);

struct Slot {
    std::string feature;
    std::vector<Scalar> values;
};

struct MObject {
    std::string id;
    std::string className;
    std::map<std::string, Slot> slots;
};

struct ChangeEvent {
    std::string objectId;
    std::string featureName;
    std::vector<Scalar> oldValues;
    std::vector<Scalar> newValues;
};

struct Violation {
    enum class Kind {
        UnknownClass,
        AbstractInstantiation,
        UnknownFeature,
        TypeMismatch,
        MultiplicityViolation,
        DanglingReference,
        DuplicateContainment,
    };

    Kind kind;
    std::string objectId;
    std::string featureName; // empty when not feature-scoped
    std::string message;
};

const char* to_string(Violation::Kind kind);

/// Reflective feature access result: the `$` resolution target. Values are
/// the slot values with object ids resolved to object references.
struct FeatureHandle {
    std::string objectId;
    std::string feature;
    bool multi = false;
    std::vector<RtValue> values;
};

/// In-memory instance population of one metamodel. Loading does not require
/// conformance; check_conformance reports violations as data. Single-writer;
/// readers evaluate against snapshot() copies.
class ModelStore {
public:
    explicit ModelStore(MetaModelPtr metamodel);

    const MetaModel& metamodel() const { return *metamodel_; }
    const MetaModelPtr& metamodelPtr() const { return metamodel_; }

    std::size_t size() const { return order_.size(); }
    bool contains(const std::string& id) const { return objects_.count(id) > 0; }
    const MObject* find(const std::string& id) const;
    const std::vector<std::string>& insertionOrder() const { return order_; }

    /// init maps `$`-prefixed feature names to value lists; `$id` picks the
    /// object id (generated as "o1", "o2", ... when absent). Features not
    /// mentioned get empty slots. One ChangeEvent per initialized feature is
    /// appended to `events` when given.
    std::string addObject(const std::string& className,
                          const std::vector<std::pair<std::string, std::vector<Scalar>>>& init,
                          std::vector<ChangeEvent>* events = nullptr);

    /// Replaces the slot; returns the change event, or nullopt when the new
    /// values equal the old ones (no-op). Type and multiplicity are enforced
    /// here, unlike load time.
    std::optional<ChangeEvent> setValue(const std::string& objectId,
                                        const std::string& featureName,
                                        std::vector<Scalar> values);

    FeatureHandle getFeature(const std::string& objectId, const std::string& featureName) const;

    /// Object refs in insertion order; subclass instances included when
    /// includeSubclasses is set.
    std::vector<RtValue> allInstances(const std::string& className, bool includeSubclasses) const;
    std::vector<std::string> allInstanceIds(const std::string& className,
                                            bool includeSubclasses) const;

    /// Id of the object holding `id` in a containment slot; nullopt for
    /// roots (whose parent is the store itself).
    std::optional<std::string> containerOf(const std::string& id) const;

    std::shared_ptr<const ModelStore> snapshot() const {
        return std::make_shared<const ModelStore>(*this);
    }

    /// Used by load_model; inserts as-is except for duplicate ids.
    void insertRaw(MObject object);

private:
    MetaModelPtr metamodel_;
    std::unordered_map<std::string, MObject> objects_;
    std::vector<std::string> order_;
    std::uint64_t idCounter_ = 0;
};

/// Violations for every typing, multiplicity, and containment rule, ordered
/// by (objectId, featureName, kind). Empty iff the store conforms.
std::vector<Violation> check_conformance(const ModelStore& store);

/// Parse a model document. Does not require conformance so that broken
/// models can be loaded, validated, and reported. Throws on schema
/// violations and duplicate object ids.
ModelStore load_model(const std::string& text, MetaModelPtr metamodel);
ModelStore load_model_file(const std::string& path, MetaModelPtr metamodel);

/// Canonical document form (stable across runs for identical content).
std::string store_to_document(const ModelStore& store);
std::string store_content_hash(const ModelStore& store);

} // namespace mvx
