#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace mvx {

namespace navex {
struct Expr;
}

enum class CollKind { Set, Bag, Sequence };

const char* to_string(CollKind kind);

/// Runtime value domain shared by both expression languages.
///
/// Invalid models failed evaluation, Null models absence; both answer true
/// to oclIsUndefined. Collections are kinded; Set elements are unique under
/// value equality with numeric coercion. Closures are NavEx lambdas and only
/// live for the duration of one evaluation.
class RtValue {
public:
    enum class Kind {
        Invalid,
        Null,
        Bool,
        Int,
        Real,
        Str,
        Coll,
        ObjRef,
        ClassRef,
        SlotHandle,
        StoreRef,
        Closure,
    };

    struct Collection {
        CollKind kind = CollKind::Sequence;
        std::shared_ptr<const std::vector<RtValue>> elements;
    };
    struct ObjectRef {
        std::string id;
    };
    struct ClassNameRef {
        std::string name;
    };
    struct SlotRef {
        std::string objectId;
        std::string feature;
        bool multi = false;
    };
    struct StoreHandle {};
    struct Lambda {
        std::vector<std::string> params;
        const navex::Expr* body = nullptr;
        std::shared_ptr<const std::map<std::string, RtValue>> captured;
    };

    RtValue() : data_(InvalidTag{}) {}

    static RtValue invalid() { return RtValue(); }
    static RtValue null() { return RtValue(NullTag{}); }
    static RtValue boolean(bool v) { return RtValue(v); }
    static RtValue integer(std::int64_t v) { return RtValue(v); }
    static RtValue real(double v) { return RtValue(v); }
    static RtValue str(std::string v) { return RtValue(std::move(v)); }
    /// Builds a collection; Set construction drops duplicates, keeping the
    /// first occurrence.
    static RtValue coll(CollKind kind, std::vector<RtValue> elements);
    static RtValue objRef(std::string id) { return RtValue(ObjectRef{std::move(id)}); }
    static RtValue classRef(std::string name) { return RtValue(ClassNameRef{std::move(name)}); }
    static RtValue slotHandle(std::string objectId, std::string feature, bool multi) {
        return RtValue(SlotRef{std::move(objectId), std::move(feature), multi});
    }
    static RtValue storeRef() { return RtValue(StoreHandle{}); }
    static RtValue closure(Lambda lambda) { return RtValue(std::move(lambda)); }

    Kind kind() const { return static_cast<Kind>(data_.index()); }
    bool isInvalid() const { return kind() == Kind::Invalid; }
    bool isNull() const { return kind() == Kind::Null; }
    bool isUndefined() const { return isInvalid() || isNull(); }
    bool isBool() const { return kind() == Kind::Bool; }
    bool isInt() const { return kind() == Kind::Int; }
    bool isReal() const { return kind() == Kind::Real; }
    bool isNumeric() const { return isInt() || isReal(); }
    bool isStr() const { return kind() == Kind::Str; }
    bool isColl() const { return kind() == Kind::Coll; }
    bool isObjRef() const { return kind() == Kind::ObjRef; }
    bool isClassRef() const { return kind() == Kind::ClassRef; }
    bool isSlotHandle() const { return kind() == Kind::SlotHandle; }
    bool isStoreRef() const { return kind() == Kind::StoreRef; }
    bool isClosure() const { return kind() == Kind::Closure; }

    bool asBool() const { return std::get<bool>(data_); }
    std::int64_t asInt() const { return std::get<std::int64_t>(data_); }
    double asReal() const { return std::get<double>(data_); }
    /// Numeric value widened to double; only valid for Int/Real.
    double numeric() const { return isInt() ? static_cast<double>(asInt()) : asReal(); }
    const std::string& asStr() const { return std::get<std::string>(data_); }
    const Collection& asColl() const { return std::get<Collection>(data_); }
    const std::vector<RtValue>& elements() const { return *asColl().elements; }
    const ObjectRef& asObjRef() const { return std::get<ObjectRef>(data_); }
    const ClassNameRef& asClassRef() const { return std::get<ClassNameRef>(data_); }
    const SlotRef& asSlotHandle() const { return std::get<SlotRef>(data_); }
    const Lambda& asClosure() const { return std::get<Lambda>(data_); }

private:
    struct InvalidTag {};
    struct NullTag {};

    using Data = std::variant<InvalidTag, NullTag, bool, std::int64_t, double, std::string,
                              Collection, ObjectRef, ClassNameRef, SlotRef, StoreHandle, Lambda>;

    template <typename T,
              typename = std::enable_if_t<!std::is_same_v<std::decay_t<T>, RtValue>>>
    explicit RtValue(T&& v) : data_(std::forward<T>(v)) {}

    Data data_;
};

/// Kind-strict equality: Int 1 differs from Real 1.0. Sets and bags compare
/// as unordered (multi)sets, sequences element by element.
bool equals_strict(const RtValue& a, const RtValue& b);

/// Value equality with numeric coercion: Int 1 equals Real 1.0. Collection
/// kinds must still match.
bool equals_coercing(const RtValue& a, const RtValue& b);

/// Agreement equality for differential comparison: numeric coercion plus
/// Sequence/Bag identified by multiset content.
bool equals_normalized(const RtValue& a, const RtValue& b);

/// Portable literal notation, the inverse of parse_value_literal for every
/// kind that can appear in documents: invalid, null, booleans, numbers,
/// quoted strings, Set{..}/Bag{..}/Sequence{..}, @objectId, #ClassName.
std::string render_value(const RtValue& value);

/// Parse the portable literal notation. Throws ParseError.
RtValue parse_value_literal(const std::string& text);

} // namespace mvx
