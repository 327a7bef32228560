#include "gobsec/type_algebra.hpp"

#include <set>
#include <utility>

namespace gobsec {

std::string Diagnostic::to_line() const {
  std::string out = severity == Severity::Error ? "error" : "warning";
  out += " [" + rule + "] @" + std::to_string(offset) + ": " + message;
  return out;
}

namespace {

MethodEntry prim_entry(std::string name, PrimKind arg, PrimKind ret) {
  return {std::move(name), MethodSig::prim({arg}, ret)};
}

std::vector<MethodEntry> build_table(PrimKind kind) {
  using P = PrimKind;
  switch (kind) {
    case P::Int:
      return {prim_entry("+", P::Int, P::Int),   prim_entry("-", P::Int, P::Int),
              prim_entry("*", P::Int, P::Int),   prim_entry("eq", P::Int, P::Bool),
              prim_entry("lt", P::Int, P::Bool), prim_entry("gt", P::Int, P::Bool)};
    case P::String:
      return {prim_entry("concat", P::String, P::String),
              prim_entry("first", P::Unit, P::String),
              prim_entry("length", P::Unit, P::Int),
              prim_entry("eq", P::String, P::Bool),
              prim_entry("hash", P::Unit, P::Int)};
    case P::Bool:
      return {prim_entry("and", P::Bool, P::Bool), prim_entry("or", P::Bool, P::Bool),
              prim_entry("not", P::Unit, P::Bool), prim_entry("eq", P::Bool, P::Bool)};
    case P::Unit:
      return {prim_entry("eq", P::Unit, P::Bool)};
  }
  return {};
}

}  // namespace

const std::vector<MethodEntry>& prim_methods(PrimKind kind) {
  static const std::vector<MethodEntry> kTables[] = {
      build_table(PrimKind::Int), build_table(PrimKind::String),
      build_table(PrimKind::Bool), build_table(PrimKind::Unit)};
  return kTables[static_cast<int>(kind)];
}

TypePtr prim_interface(PrimKind kind) {
  static const TypePtr kIfaces[] = {
      make_obj("p", prim_methods(PrimKind::Int)),
      make_obj("p", prim_methods(PrimKind::String)),
      make_obj("p", prim_methods(PrimKind::Bool)),
      make_obj("p", prim_methods(PrimKind::Unit))};
  return kIfaces[static_cast<int>(kind)];
}

TypePtr unfold(const TypePtr& t) {
  if (t->is_type_var()) {
    throw TypeAlgebraError(
        {Severity::Error, "Unfold", "cannot unfold type variable " + t->name, 0});
  }
  if (!t->is_obj()) return t;
  std::vector<MethodEntry> methods;
  methods.reserve(t->methods.size());
  for (const auto& m : t->methods)
    methods.push_back({m.name, subst_self_var(m.sig, t, t->name)});
  return make_obj(t->name, std::move(methods));
}

// ---------------------------------------------------------------------------
// Equivalence by bisimulation

namespace {

class Equiv {
 public:
  bool types(const TypePtr& a, const TypePtr& b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case Type::Kind::Prim:
        return a->prim == b->prim;
      case Type::Kind::SelfVar:
      case Type::Kind::TypeVar:
        return a->name == b->name;
      case Type::Kind::Obj:
        break;
    }
    std::string ka = canonical(a);
    std::string kb = canonical(b);
    if (ka == kb) return true;
    if (a->methods.size() != b->methods.size()) return false;
    auto key = ka < kb ? std::make_pair(ka, kb) : std::make_pair(kb, ka);
    if (assumed_.count(key)) return true;
    assumed_.insert(key);
    for (const auto& ma : a->methods) {
      const MethodEntry* mb = b->find_method(ma.name);
      if (!mb) return false;
      if (!sigs(subst_self_var(ma.sig, a, a->name),
                subst_self_var(mb->sig, b, b->name)))
        return false;
    }
    return true;
  }

  bool secs(const SecType& a, const SecType& b) {
    if (a.is_star() || b.is_star())
      return a.is_star() && b.is_star() && a.star_kind == b.star_kind;
    return types(a.safety, b.safety) && types(a.decl, b.decl);
  }

  bool sigs(const MethodSig& a, const MethodSig& b) {
    if (a.is_prim() || b.is_prim()) {
      return a.is_prim() && b.is_prim() && a.prim_params == b.prim_params &&
             a.prim_ret == b.prim_ret;
    }
    if (a.type_params.size() != b.type_params.size() ||
        a.params.size() != b.params.size())
      return false;
    MethodSig ra = a;
    MethodSig rb = b;
    for (std::size_t i = 0; i < ra.type_params.size(); ++i) {
      std::string fresh = "%e" + std::to_string(depth_++);
      ra = rename_type_param(ra, i, fresh);
      rb = rename_type_param(rb, i, fresh);
    }
    for (std::size_t i = 0; i < ra.type_params.size(); ++i) {
      if (!types(ra.type_params[i].lower, rb.type_params[i].lower) ||
          !types(ra.type_params[i].upper, rb.type_params[i].upper))
        return false;
    }
    for (std::size_t i = 0; i < ra.params.size(); ++i) {
      if (!secs(ra.params[i], rb.params[i])) return false;
    }
    return secs(ra.ret, rb.ret);
  }

 private:
  std::set<std::pair<std::string, std::string>> assumed_;
  int depth_ = 0;
};

}  // namespace

bool type_equiv(const TypePtr& a, const TypePtr& b) {
  Equiv e;
  return e.types(a, b);
}

bool sectype_equiv(const SecType& a, const SecType& b) {
  Equiv e;
  return e.secs(a, b);
}

bool sig_equiv(const MethodSig& a, const MethodSig& b) {
  Equiv e;
  return e.sigs(a, b);
}

// ---------------------------------------------------------------------------
// Lookup

TypePtr upper_bound(const TypeVarEnv& delta, const TypePtr& u) {
  TypePtr cur = u;
  std::set<std::string> seen;
  while (cur->is_type_var()) {
    if (!seen.insert(cur->name).second) {
      throw TypeAlgebraError(
          {Severity::Error, "CyclicBounds", "cyclic bounds through " + cur->name, 0});
    }
    const TypeVarBound* b = delta.find(cur->name);
    if (!b) {
      throw TypeAlgebraError(
          {Severity::Error, "UnboundTypeVar", "unbound type variable " + cur->name, 0});
    }
    cur = b->upper;
  }
  return cur;
}

bool has_method(const TypeVarEnv& delta, const TypePtr& u, std::string_view m) {
  TypePtr t = upper_bound(delta, u);
  switch (t->kind) {
    case Type::Kind::Obj:
      return t->find_method(m) != nullptr;
    case Type::Kind::Prim:
      for (const auto& e : prim_methods(t->prim)) {
        if (e.name == m) return true;
      }
      return false;
    default:
      return false;
  }
}

MethodSig msig(const TypeVarEnv& delta, const TypePtr& u, std::string_view m) {
  TypePtr t = upper_bound(delta, u);
  if (t->is_obj()) {
    if (const MethodEntry* e = t->find_method(m))
      return subst_self_var(e->sig, t, t->name);
  } else if (t->is_prim()) {
    for (const auto& e : prim_methods(t->prim)) {
      if (e.name == m) return e.sig;
    }
  }
  throw TypeAlgebraError(
      {Severity::Error, "NoSuchMethod", "no method " + std::string(m), 0});
}

bool is_top(const TypePtr& u) { return u->is_top(); }

bool is_public(const SecType& s) {
  return !s.is_star() && type_equiv(s.safety, s.decl);
}

TypePtr rdecl(const SecType& arg, PrimKind ret) {
  return rdecl(std::vector<SecType>{arg}, ret);
}

TypePtr rdecl(const std::vector<SecType>& args, PrimKind ret) {
  for (const auto& a : args) {
    if (!is_public(a)) return top_type();
  }
  return make_prim(ret);
}

bool soundsig(const MethodSig& sig) {
  if (sig.is_prim()) return true;
  if (!sig.ret.is_star() && is_top(sig.ret.decl)) return true;
  for (const auto& p : sig.params) {
    if (p.is_star() || !p.safety->is_prim()) continue;
    if (!is_public(p)) return false;
  }
  return true;
}

}  // namespace gobsec
