#pragma once

#include <set>
#include <string>
#include <vector>

#include "gobsec/ast.hpp"
#include "gobsec/diagnostic.hpp"

namespace gobsec {

/// All variable occurrences bound by `scope` or an enclosing binder; method
/// and type-parameter names distinct; star forms only inside primitive
/// signatures.
bool wf_type(const std::set<std::string>& scope, const TypePtr& u,
             std::vector<Diagnostic>* out = nullptr);

/// Facet relation: the declassification facet must be an admissible
/// supertype of the safety facet, at every nesting level.
bool wf_sectype(const TypeVarEnv& delta, const SecType& s,
                std::vector<Diagnostic>* out = nullptr);

bool wf_tvar_env(const TypeVarEnv& delta, std::vector<Diagnostic>* out = nullptr);

bool wf_term_env(const TypeVarEnv& delta, const TermEnv& gamma,
                 std::vector<Diagnostic>* out = nullptr);

/// Throws WfError carrying the first error diagnostic.
void require_wf_sectype(const TypeVarEnv& delta, const SecType& s,
                        std::size_t offset = 0);

}  // namespace gobsec
