#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mvx {

enum class PrimitiveType { Boolean, Integer, Real, String };

const char* to_string(PrimitiveType type);
std::optional<PrimitiveType> primitive_from_string(const std::string& name);

/// [lower, upper]; upper empty means unbounded (encoded as -1 in documents).
struct Multiplicity {
    int lower = 0;
    std::optional<int> upper = 1;

    bool bounded() const { return upper.has_value(); }
    bool admits(std::size_t count) const {
        if (count < static_cast<std::size_t>(lower)) return false;
        return !upper || count <= static_cast<std::size_t>(*upper);
    }
    bool isSingle() const { return upper && *upper == 1; }
};

struct MetaAttribute {
    std::string name;
    PrimitiveType type = PrimitiveType::String;
    Multiplicity multiplicity;
};

struct MetaReference {
    std::string name;
    std::string target;
    Multiplicity multiplicity;
    bool containment = false;
};

struct OperationParam {
    std::string name;
    PrimitiveType type = PrimitiveType::Real;
};

struct OperationSig {
    std::string name;
    std::vector<OperationParam> params;
    std::optional<PrimitiveType> returnType;
};

struct MetaClass {
    std::string name;
    bool isAbstract = false;
    std::vector<std::string> supers;
    std::vector<MetaAttribute> attributes;
    std::vector<MetaReference> references;
    std::vector<OperationSig> operations;
};

/// A resolved feature as seen from one class: either an attribute or a
/// reference, possibly inherited.
struct FeatureView {
    const MetaAttribute* attribute = nullptr;
    const MetaReference* reference = nullptr;
    const MetaClass* owner = nullptr;

    bool isAttribute() const { return attribute != nullptr; }
    const std::string& name() const { return attribute ? attribute->name : reference->name; }
    const Multiplicity& multiplicity() const {
        return attribute ? attribute->multiplicity : reference->multiplicity;
    }
};

class MetaModel {
public:
    MetaModel() = default;
    MetaModel(std::string name, std::vector<MetaClass> classes);

    const std::string& name() const { return name_; }
    const std::vector<MetaClass>& classes() const { return classes_; }

    const MetaClass* findClass(const std::string& name) const;

    /// True when `sub` equals `super` or inherits from it transitively.
    bool isKindOf(const std::string& sub, const std::string& super) const;

    /// Linearized supers chain: the class itself, then supers depth-first
    /// left-to-right, each class visited once.
    std::vector<const MetaClass*> linearize(const std::string& className) const;

    /// All features visible on a class, own declarations first.
    std::vector<FeatureView> allFeatures(const std::string& className) const;

    std::optional<FeatureView> findFeature(const std::string& className,
                                           const std::string& featureName) const;

    const OperationSig* findOperation(const std::string& className,
                                      const std::string& opName) const;

    /// Class names of `className` and all transitive subclasses, in
    /// metamodel declaration order.
    std::vector<std::string> withSubclasses(const std::string& className) const;

private:
    std::string name_;
    std::vector<MetaClass> classes_;
};

using MetaModelPtr = std::shared_ptr<const MetaModel>;

/// Parse and validate a metamodel document (JSON text). Throws mvx::Error
/// with a path into the document on schema violations, duplicate class
/// names, unknown supers/targets, cyclic inheritance, and duplicate
/// (including inherited) feature names.
MetaModelPtr load_metamodel(const std::string& text);
MetaModelPtr load_metamodel_file(const std::string& path);

} // namespace mvx
