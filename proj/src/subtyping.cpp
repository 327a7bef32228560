#include "gobsec/subtyping.hpp"

#include "gobsec/diagnostic.hpp"
#include "gobsec/type_algebra.hpp"

namespace gobsec {

namespace {

constexpr int kMaxDepth = 20000;

struct DepthGuard {
  explicit DepthGuard(int& d) : depth(d) {
    if (++depth > kMaxDepth) {
      --depth;
      throw TypeAlgebraError(
          {Severity::Error, "SubDepth", "subtyping recursion limit exceeded", 0});
    }
  }
  ~DepthGuard() { --depth; }
  int& depth;
};

}  // namespace

Subtyper::Subtyper(TypeVarEnv delta, SubMode mode, SubAssumptions sigma)
    : delta_(std::move(delta)), mode_(mode), sigma_(std::move(sigma)) {}

bool Subtyper::type(const TypePtr& u1, const TypePtr& u2) {
  DepthGuard guard(depth_);
  if (u1 == u2) return true;
  if (u1->kind == u2->kind && u1->kind != Type::Kind::Obj) {
    if (u1->is_prim()) return u1->prim == u2->prim;
    if (u1->name == u2->name) return true;
  }

  if (u1->is_type_var()) {
    const TypeVarBound* b = delta_.find(u1->name);
    if (b && type(b->upper, u2)) return true;
    if (u2->is_type_var()) {
      const TypeVarBound* b2 = delta_.find(u2->name);
      return b2 && type(u1, b2->lower);
    }
    return false;
  }
  if (u2->is_type_var()) {
    const TypeVarBound* b = delta_.find(u2->name);
    return b && type(u1, b->lower);
  }

  switch (u1->kind) {
    case Type::Kind::SelfVar:
      return u2->is_self_var() && sigma_.holds(*u1, u2->name);
    case Type::Kind::Prim:
      if (u2->is_self_var()) return sigma_.holds(*u1, u2->name);
      if (u2->is_obj()) return prim_obj(u1, u2);
      return false;
    case Type::Kind::Obj:
      return u2->is_obj() && obj(u1, u2);
    case Type::Kind::TypeVar:
      break;
  }
  return false;
}

bool Subtyper::obj(const TypePtr& o1, const TypePtr& o2) {
  if (o2->methods.empty()) return true;
  std::string c1 = canonical(o1);
  std::string c2 = canonical(o2);
  if (c1 == c2) return true;
  std::string key = c1 + "<:" + c2;
  if (path_.count(key)) return true;
  auto it = path_.insert(key);
  bool ok = true;
  for (const auto& m2 : o2->methods) {
    const MethodEntry* m1 = o1->find_method(m2.name);
    if (!m1 || !sig_impl(subst_self_var(m1->sig, o1, o1->name),
                         subst_self_var(m2.sig, o2, o2->name), false)) {
      ok = false;
      break;
    }
  }
  path_.erase(it);
  return ok;
}

bool Subtyper::prim_obj(const TypePtr& p, const TypePtr& o) {
  if (o->methods.empty()) return true;
  std::string key = std::string(prim_name(p->prim)) + "<:" + canonical(o);
  if (path_.count(key)) return true;
  auto it = path_.insert(key);
  const auto& table = prim_methods(p->prim);
  bool ok = true;
  for (const auto& m2 : o->methods) {
    const MethodEntry* m1 = nullptr;
    for (const auto& e : table) {
      if (e.name == m2.name) m1 = &e;
    }
    // Depth on a primitive interface admits sound declassifying signatures.
    if (!m1 || !sig_impl(m1->sig, subst_self_var(m2.sig, o, o->name), true)) {
      ok = false;
      break;
    }
  }
  path_.erase(it);
  return ok;
}

bool Subtyper::sig(const MethodSig& m1, const MethodSig& m2) {
  return sig_impl(m1, m2, false);
}

bool Subtyper::ig(const MethodSig& prim, const MethodSig& gen) {
  if (prim.prim_params.size() != gen.params.size()) return false;
  for (std::size_t i = 0; i < gen.params.size(); ++i) {
    if (gen.params[i].is_star()) return false;
    if (!type(gen.params[i].safety, make_prim(prim.prim_params[i]))) return false;
  }
  if (gen.ret.is_star()) return false;
  if (!type(make_prim(prim.prim_ret), gen.ret.safety)) return false;
  if (mode_ == SubMode::Simple) return true;
  return soundsig(gen);
}

bool Subtyper::sig_impl(const MethodSig& m1, const MethodSig& m2,
                        bool allow_ig) {
  if (m1.is_prim() && m2.is_prim()) {
    return m1.prim_params == m2.prim_params && m1.prim_ret == m2.prim_ret;
  }
  if (m1.is_prim()) {
    if (allow_ig || mode_ != SubMode::Standard) return ig(m1, m2);
    return false;
  }
  if (m2.is_prim()) return false;
  if (m1.type_params.size() != m2.type_params.size() ||
      m1.params.size() != m2.params.size())
    return false;

  MethodSig a = m1;
  MethodSig b = m2;
  TypeVarEnv saved = delta_;
  bool ok = true;
  for (std::size_t i = 0; i < a.type_params.size() && ok; ++i) {
    std::string fresh = "%s" + std::to_string(delta_.size());
    a = rename_type_param(a, i, fresh);
    b = rename_type_param(b, i, fresh);
    const auto& tl = a.type_params[i];
    const auto& tr = b.type_params[i];
    if (mode_ != SubMode::Simple) {
      ok = type(tr.upper, tl.upper) && type(tl.lower, tr.lower);
    }
    delta_ = delta_.extended(fresh, tr.lower, tr.upper);
  }
  for (std::size_t i = 0; i < a.params.size() && ok; ++i)
    ok = sectype(b.params[i], a.params[i]);
  if (ok) ok = sectype(a.ret, b.ret);
  delta_ = std::move(saved);
  return ok;
}

bool Subtyper::sectype(const SecType& s1, const SecType& s2) {
  if (s1.is_star() || s2.is_star())
    return s1.is_star() && s2.is_star() && s1.star_kind == s2.star_kind;
  if (!type(s1.safety, s2.safety)) return false;
  return mode_ == SubMode::Simple || type(s1.decl, s2.decl);
}

bool Subtyper::record(const std::vector<MethodEntry>& r1,
                      const std::vector<MethodEntry>& r2) {
  for (const auto& m2 : r2) {
    const MethodEntry* m1 = nullptr;
    for (const auto& e : r1) {
      if (e.name == m2.name) m1 = &e;
    }
    if (!m1 || !sig(m1->sig, m2.sig)) return false;
  }
  return true;
}

bool sub_type(const TypeVarEnv& delta, const SubAssumptions& sigma,
              const TypePtr& u1, const TypePtr& u2, SubMode mode) {
  Subtyper s(delta, mode, sigma);
  return s.type(u1, u2);
}

bool sub_record(const TypeVarEnv& delta, const SubAssumptions& sigma,
                const std::vector<MethodEntry>& r1,
                const std::vector<MethodEntry>& r2) {
  Subtyper s(delta, SubMode::Standard, sigma);
  return s.record(r1, r2);
}

bool sub_sig(const TypeVarEnv& delta, const SubAssumptions& sigma,
             const MethodSig& m1, const MethodSig& m2, SubMode mode) {
  Subtyper s(delta, mode, sigma);
  return s.sig(m1, m2);
}

bool sub_sectype(const TypeVarEnv& delta, const SubAssumptions& sigma,
                 const SecType& s1, const SecType& s2, SubMode mode) {
  Subtyper s(delta, mode, sigma);
  return s.sectype(s1, s2);
}

bool in_interval(const TypeVarEnv& delta, const TypePtr& u, const TypePtr& lo,
                 const TypePtr& hi) {
  Subtyper s(delta);
  return s.type(lo, u) && s.type(u, hi);
}

}  // namespace gobsec
