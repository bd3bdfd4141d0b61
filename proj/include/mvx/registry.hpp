#pragma once

#include <string>
#include <vector>

#include "mvx/contracts.hpp"
#include "mvx/derived.hpp"
#include "mvx/validate.hpp"

namespace mvx {

struct Registry {
    std::vector<Constraint> constraints;
    std::vector<DerivedRule> derived;
    std::vector<OperationContract> contracts;
};

/// Accepts either a JSON registry document or raw constraint text in the
/// ocl-lang format (context declarations). OCL derive contexts infer their
/// dependencies from `self.<feature>` navigations in the body.
Registry load_registry(const std::string& text, const MetaModelPtr& metamodel);
Registry load_registry_file(const std::string& path, const MetaModelPtr& metamodel);

/// Dependencies referenced by an OCL expression as direct `self.<f>`
/// navigations (deduplicated, in first-use order).
std::vector<std::string> infer_self_dependencies(const ocl::Expr& body);

} // namespace mvx
