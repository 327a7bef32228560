#pragma once

#include <set>
#include <string>
#include <vector>

#include "gobsec/ast.hpp"

namespace gobsec {

enum class SubMode {
  Standard,    // the plain relation
  WellFormed,  // facet relation: also admits rule IG anywhere
  Simple,      // safety facets only; bounds and declassification ignored
};

/// Algorithmic subtyping over alias-free types. Object types are closed and
/// unfolded on descent; cycles are assumed on revisit along the current path.
class Subtyper {
 public:
  explicit Subtyper(TypeVarEnv delta, SubMode mode = SubMode::Standard,
                    SubAssumptions sigma = {});

  bool type(const TypePtr& u1, const TypePtr& u2);
  bool sectype(const SecType& s1, const SecType& s2);
  bool sig(const MethodSig& m1, const MethodSig& m2);
  /// Open records; free self variables resolve through Sigma.
  bool record(const std::vector<MethodEntry>& r1,
              const std::vector<MethodEntry>& r2);

 private:
  bool obj(const TypePtr& o1, const TypePtr& o2);
  bool prim_obj(const TypePtr& p, const TypePtr& o);
  bool sig_impl(const MethodSig& m1, const MethodSig& m2, bool allow_ig);
  bool ig(const MethodSig& prim, const MethodSig& gen);

  TypeVarEnv delta_;
  SubMode mode_;
  SubAssumptions sigma_;
  std::multiset<std::string> path_;
  int depth_ = 0;
};

bool sub_type(const TypeVarEnv& delta, const SubAssumptions& sigma,
              const TypePtr& u1, const TypePtr& u2,
              SubMode mode = SubMode::Standard);
bool sub_record(const TypeVarEnv& delta, const SubAssumptions& sigma,
                const std::vector<MethodEntry>& r1,
                const std::vector<MethodEntry>& r2);
bool sub_sig(const TypeVarEnv& delta, const SubAssumptions& sigma,
             const MethodSig& m1, const MethodSig& m2,
             SubMode mode = SubMode::Standard);
bool sub_sectype(const TypeVarEnv& delta, const SubAssumptions& sigma,
                 const SecType& s1, const SecType& s2,
                 SubMode mode = SubMode::Standard);

/// Delta |- u in lo..hi
bool in_interval(const TypeVarEnv& delta, const TypePtr& u, const TypePtr& lo,
                 const TypePtr& hi);

}  // namespace gobsec
