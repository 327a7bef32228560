#pragma once

#include <string_view>
#include <vector>

#include "gobsec/ast.hpp"
#include "gobsec/diagnostic.hpp"

namespace gobsec {

/// meths(P): the primitive interface, every entry a primitive signature.
const std::vector<MethodEntry>& prim_methods(PrimKind kind);
/// The primitive interface as an object type `Obj(p)[...]`.
TypePtr prim_interface(PrimKind kind);

/// Equality of infinite unfoldings up to alpha-renaming.
bool type_equiv(const TypePtr& a, const TypePtr& b);
bool sectype_equiv(const SecType& a, const SecType& b);
bool sig_equiv(const MethodSig& a, const MethodSig& b);

/// One-level self substitution; identity on primitives.
TypePtr unfold(const TypePtr& t);

TypePtr upper_bound(const TypeVarEnv& delta, const TypePtr& u);
bool has_method(const TypeVarEnv& delta, const TypePtr& u, std::string_view m);
/// Closed signature of `m` in `u`; throws TypeAlgebraError when absent.
MethodSig msig(const TypeVarEnv& delta, const TypePtr& u, std::string_view m);

bool is_top(const TypePtr& u);
/// `T<T>` up to equivalence.
bool is_public(const SecType& s);

TypePtr rdecl(const SecType& arg, PrimKind ret);
/// n-ary form: `ret` only when every argument is public.
TypePtr rdecl(const std::vector<SecType>& args, PrimKind ret);
bool soundsig(const MethodSig& sig);

}  // namespace gobsec
