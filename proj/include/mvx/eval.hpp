#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mvx/model.hpp"
#include "mvx/navex/ast.hpp"
#include "mvx/ocl/ast.hpp"
#include "mvx/value.hpp"

namespace mvx {

enum class Language { Ocl, Navex };

const char* to_string(Language lang);
std::optional<Language> language_from_string(const std::string& name);

using StorePtr = std::shared_ptr<const ModelStore>;

/// One evaluation problem. contextBinding is what `self` (OCL) and `data`
/// (NavEx) denote: an object ref for constraints, the store itself for
/// root-scope queries. preSnapshot is set iff evaluating a postcondition.
struct Env {
    StorePtr snapshot;
    RtValue contextBinding;
    std::map<std::string, RtValue> vars;
    StorePtr preSnapshot;
    std::optional<RtValue> resultValue;
};

/// Diagnostics accumulated as failures fold into Invalid. Purely
/// informational; verdicts never depend on it.
struct EvalTrace {
    std::vector<std::string> diagnostics;
};

/// Total and pure: always returns a value (Invalid models OCL's invalid),
/// never mutates the snapshot.
RtValue eval_ocl(const ocl::Expr& ast, const Env& env, EvalTrace* trace = nullptr);

/// Total; pure with respect to env.snapshot; addObject operates on a
/// private copy-on-write store, so effects are only observable through the
/// returned value within the same evaluation.
RtValue eval_navex(const navex::Expr& ast, const Env& env, EvalTrace* trace = nullptr);

/// Parse and evaluate a query at store root scope: class names are
/// addressable and `data`/`self` denote the store. Throws ParseError on
/// malformed text; evaluation failures fold into Invalid.
RtValue execute_query(const StorePtr& store, Language language, const std::string& text,
                      EvalTrace* trace = nullptr);

} // namespace mvx
