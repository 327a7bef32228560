#include "gobsec/wellformed.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "gobsec/subtyping.hpp"
#include "gobsec/type_algebra.hpp"

namespace gobsec {

namespace {

void report(std::vector<Diagnostic>* out, std::string rule, std::string message,
            Severity severity = Severity::Error) {
  if (out) out->push_back({severity, std::move(rule), std::move(message), 0});
}

class TypeScopeChecker {
 public:
  TypeScopeChecker(const std::set<std::string>& scope, std::vector<Diagnostic>* out)
      : scope_(scope), out_(out) {}

  bool type(const TypePtr& t) {
    switch (t->kind) {
      case Type::Kind::Prim:
        return true;
      case Type::Kind::SelfVar:
        if (bound(selves_, t->name)) return true;
        report(out_, "WfType", "unbound self variable " + t->name);
        return false;
      case Type::Kind::TypeVar:
        if (bound(tvars_, t->name)) return true;
        report(out_, "WfType", "unbound type variable " + t->name);
        return false;
      case Type::Kind::Obj:
        break;
    }
    std::set<std::string> names;
    bool ok = true;
    selves_.push_back(t->name);
    for (const auto& m : t->methods) {
      if (!names.insert(m.name).second) {
        report(out_, "WfType", "duplicate method " + m.name);
        ok = false;
      }
      ok = sig(m.sig) && ok;
    }
    selves_.pop_back();
    return ok;
  }

  bool sec(const SecType& s) {
    if (s.is_star()) {
      report(out_, "WfType", "star type outside a primitive signature");
      return false;
    }
    if (s.safety->is_type_var()) {
      report(out_, "WfType", "type variable " + s.safety->name + " in safety facet");
      return false;
    }
    bool ok = type(s.safety);
    return type(s.decl) && ok;
  }

  bool sig(const MethodSig& m) {
    if (m.is_prim()) return true;
    bool ok = true;
    std::size_t pushed = 0;
    std::set<std::string> names;
    for (const auto& tp : m.type_params) {
      if (!names.insert(tp.name).second) {
        report(out_, "WfType", "duplicate type parameter " + tp.name);
        ok = false;
      }
      ok = type(tp.lower) && ok;
      ok = type(tp.upper) && ok;
      tvars_.push_back(tp.name);
      ++pushed;
    }
    for (const auto& p : m.params) ok = sec(p) && ok;
    ok = sec(m.ret) && ok;
    tvars_.resize(tvars_.size() - pushed);
    return ok;
  }

 private:
  bool bound(const std::vector<std::string>& local, const std::string& name) const {
    return std::find(local.begin(), local.end(), name) != local.end() ||
           scope_.count(name);
  }

  const std::set<std::string>& scope_;
  std::vector<Diagnostic>* out_;
  std::vector<std::string> selves_;
  std::vector<std::string> tvars_;
};

std::set<std::string> delta_names(const TypeVarEnv& delta) {
  std::set<std::string> out;
  for (const auto& e : delta.entries()) out.insert(e.name);
  return out;
}

bool has_prim_sig(const TypePtr& t) {
  if (!t->is_obj()) return false;
  for (const auto& m : t->methods) {
    if (m.sig.is_prim()) return true;
  }
  return false;
}

class FacetChecker {
 public:
  explicit FacetChecker(std::vector<Diagnostic>* out) : out_(out) {}

  bool sec(const TypeVarEnv& delta, const SecType& s) {
    if (s.is_star()) return true;
    std::string key = canonical(s);
    for (const auto& v : free_type_vars(s)) {
      if (const TypeVarBound* b = delta.find(v))
        key += "|" + v + ":" + canonical(b->lower) + ".." + canonical(b->upper);
    }
    if (!visited_.insert(key).second) return true;

    bool ok = facets(delta, s.safety, s.decl);
    for (const TypePtr& facet : {s.safety, s.decl}) {
      if (!facet->is_obj()) continue;
      for (const auto& entry : facet->methods) {
        MethodSig m = subst_self_var(entry.sig, facet, facet->name);
        if (m.is_prim()) continue;
        TypeVarEnv inner = delta;
        for (const auto& tp : m.type_params)
          inner = inner.extended(tp.name, tp.lower, tp.upper);
        for (const auto& p : m.params) ok = sec(inner, p) && ok;
        ok = sec(inner, m.ret) && ok;
      }
    }
    return ok;
  }

 private:
  bool facets(const TypeVarEnv& delta, const TypePtr& t, const TypePtr& u) {
    if (t->is_obj() && has_prim_sig(t)) {
      report(out_, "PrimSig", "primitive signature in an object safety type");
      return false;
    }
    if (!t->is_prim() && u->is_obj() && has_prim_sig(u)) {
      report(out_, "PrimSig",
             "primitive signature in the declassification facet of a non-primitive");
      return false;
    }
    Subtyper sub(delta, SubMode::WellFormed);
    bool related = false;
    try {
      related = sub.type(t, u);
    } catch (const TypeAlgebraError& e) {
      report(out_, e.diagnostic().rule, e.diagnostic().message);
      return false;
    }
    if (related) return true;
    explain(delta, t, u);
    return false;
  }

  void explain(const TypeVarEnv& delta, const TypePtr& t, const TypePtr& u) {
    const std::string facet = canonical_label(t) + "<" + canonical_label(u) + ">";
    if (u->is_prim()) {
      report(out_, "SST",
             "ill-formed facet " + facet +
                 ": declassification type is not a supertype of the safety type");
      return;
    }
    TypePtr ub = u->is_type_var() ? upper_bound(delta, u) : u;
    if (t->is_prim() && ub->is_obj()) {
      for (const auto& entry : ub->methods) {
        MethodSig m = subst_self_var(entry.sig, ub, ub->name);
        if (!has_method(delta, t, entry.name)) {
          report(out_, "SR", "method " + entry.name + " of " + facet +
                                 " is absent from the safety type");
          continue;
        }
        if (!m.is_prim() && !soundsig(m)) {
          report(out_, "P2",
                 "method " + entry.name + " in " + facet +
                     " takes a non-public argument but returns a non-secret result");
        }
      }
    }
    report(out_, "IG", "facet " + facet + " is not an admissible declassification");
  }

  static std::string canonical_label(const TypePtr& t) {
    if (t->is_prim()) return std::string(prim_name(t->prim));
    if (t->is_top()) return "Top";
    if (t->is_obj()) return "Obj(" + t->name + ")[..]";
    return t->name;
  }

  std::vector<Diagnostic>* out_;
  std::set<std::string> visited_;
};

}  // namespace

bool wf_type(const std::set<std::string>& scope, const TypePtr& u,
             std::vector<Diagnostic>* out) {
  TypeScopeChecker c(scope, out);
  return c.type(u);
}

bool wf_sectype(const TypeVarEnv& delta, const SecType& s,
                std::vector<Diagnostic>* out) {
  auto names = delta_names(delta);
  TypeScopeChecker scope(names, out);
  if (!scope.sec(s)) return false;
  FacetChecker facets(out);
  return facets.sec(delta, s);
}

bool wf_tvar_env(const TypeVarEnv& delta, std::vector<Diagnostic>* out) {
  auto names = delta_names(delta);
  bool ok = true;
  std::set<std::string> seen;
  for (const auto& e : delta.entries()) {
    if (!seen.insert(e.name).second) {
      report(out, "DuplicateTypeVar", "duplicate type variable " + e.name);
      ok = false;
    }
    if (!wf_type(names, e.lower, out) || !wf_type(names, e.upper, out)) {
      report(out, "IllFormedBound", "ill-formed bound for " + e.name);
      ok = false;
    }
  }
  if (!ok) return false;

  std::map<std::string, int> state;
  std::function<bool(const std::string&)> visit = [&](const std::string& x) {
    int& st = state[x];
    if (st == 1) return false;
    if (st == 2) return true;
    st = 1;
    const TypeVarBound* b = delta.find(x);
    auto deps = free_type_vars(b->lower);
    auto up = free_type_vars(b->upper);
    deps.insert(up.begin(), up.end());
    for (const auto& d : deps) {
      if (!visit(d)) return false;
    }
    state[x] = 2;
    return true;
  };
  for (const auto& e : delta.entries()) {
    if (!visit(e.name)) {
      report(out, "CyclicBounds", "cyclic bounds through " + e.name);
      return false;
    }
  }
  for (const auto& e : delta.entries()) {
    if (!sub_type(delta, {}, e.lower, e.upper)) {
      report(out, "EmptyInterval",
             "interval of " + e.name + " is empty (lower bound not below upper)",
             Severity::Warning);
    }
  }
  return true;
}

bool wf_term_env(const TypeVarEnv& delta, const TermEnv& gamma,
                 std::vector<Diagnostic>* out) {
  bool ok = true;
  std::set<std::string> seen;
  for (const auto& [name, type] : gamma.entries()) {
    if (!seen.insert(name).second) {
      report(out, "DuplicateVar", "duplicate variable " + name);
      ok = false;
    }
    std::vector<Diagnostic> local;
    if (!wf_sectype(delta, type, &local)) {
      for (auto& d : local) {
        d.message = name + ": " + d.message;
        if (out) out->push_back(d);
      }
      ok = false;
    }
  }
  return ok;
}

void require_wf_sectype(const TypeVarEnv& delta, const SecType& s,
                        std::size_t offset) {
  std::vector<Diagnostic> diags;
  if (wf_sectype(delta, s, &diags)) return;
  for (auto& d : diags) {
    if (d.severity == Severity::Error) {
      d.offset = offset;
      throw WfError(d);
    }
  }
  throw WfError({Severity::Error, "Wf", "ill-formed security type", offset});
}

}  // namespace gobsec
