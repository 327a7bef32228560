#include "oracle.hpp"

namespace oracle {

using namespace gobsec;

namespace {

const char* const kMethods[] = {"eq", "not"};

SecType pub(const TypePtr& t) { return SecType::faceted(t, t); }
SecType priv(const TypePtr& t) { return SecType::faceted(t, top_type()); }

MethodSig unit_to(SecType ret) {
  return MethodSig::generic({}, {pub(make_prim(PrimKind::Unit))}, std::move(ret));
}

/// Signature choices at object depth 1 for method `m`.
std::vector<MethodSig> shallow_sigs(const std::string& m) {
  TypePtr i = make_prim(PrimKind::Int);
  TypePtr x = make_type_var("X");
  SecType ix = SecType::faceted(i, x);
  std::vector<MethodSig> out = {
      unit_to(pub(i)),
      unit_to(priv(i)),
      unit_to(pub(make_self_var("a"))),
      MethodSig::generic({{"X", i, top_type()}}, {ix}, ix),
      MethodSig::generic({{"X", i, i}}, {ix}, ix),
  };
  if (m == "eq") {
    out.push_back(MethodSig::prim({PrimKind::Int}, PrimKind::Bool));
  } else {
    out.push_back(MethodSig::prim({PrimKind::Unit}, PrimKind::Bool));
  }
  return out;
}

void objects_from(const std::vector<std::vector<MethodSig>>& per_method, std::vector<TypePtr>& out) {
  for (std::size_t a = 0; a <= per_method[0].size(); ++a) {
    for (std::size_t b = 0; b <= per_method[1].size(); ++b) {
      std::vector<MethodEntry> ms;
      if (a > 0) ms.push_back({kMethods[0], per_method[0][a - 1]});
      if (b > 0) ms.push_back({kMethods[1], per_method[1][b - 1]});
      out.push_back(make_obj("a", std::move(ms)));
    }
  }
}

}  // namespace

std::vector<TypePtr> universe() {
  std::vector<TypePtr> out = {make_prim(PrimKind::Int), make_prim(PrimKind::Bool)};

  std::vector<TypePtr> depth1;
  objects_from({shallow_sigs(kMethods[0]), shallow_sigs(kMethods[1])}, depth1);
  out.insert(out.end(), depth1.begin(), depth1.end());

  // Depth 2 nests the depth-1 objects with at most one method, covariantly
  // in a result and contravariantly in a parameter.
  std::vector<TypePtr> small;
  for (const auto& o : depth1) {
    if (o->methods.size() <= 1) small.push_back(o);
  }
  std::vector<MethodSig> deep;
  for (const auto& o : small) deep.push_back(unit_to(pub(o)));
  for (std::size_t k = 0; k < small.size(); k += 3) {
    deep.push_back(MethodSig::generic({}, {pub(small[k])}, pub(make_prim(PrimKind::Int))));
  }
  std::vector<TypePtr> depth2;
  objects_from({deep, deep}, depth2);
  for (const auto& o : depth2) {
    bool nested = false;
    for (const auto& m : o->methods) nested = nested || !m.sig.ret.safety->is_prim();
    for (const auto& m : o->methods)
      nested = nested || (!m.sig.params.empty() && m.sig.params[0].safety->is_obj());
    if (nested) out.push_back(o);
  }
  return out;
}

}  // namespace oracle
