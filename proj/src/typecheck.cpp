#include "gobsec/typecheck.hpp"

#include <functional>
#include <set>

#include "gobsec/printer.hpp"
#include "gobsec/subtyping.hpp"
#include "gobsec/type_algebra.hpp"
#include "gobsec/wellformed.hpp"

namespace gobsec {

namespace {

[[noreturn]] void type_error(const ExprPtr& e, std::string rule, std::string message) {
  throw TypeError({Severity::Error, std::move(rule), std::move(message), e->offset});
}

std::set<std::string> names_of(const TypeVarEnv& delta) {
  std::set<std::string> out;
  for (const auto& b : delta.entries()) out.insert(b.name);
  return out;
}

/// Generic signature with its type parameters renamed away from `avoid`.
MethodSig freshen(MethodSig sig, std::set<std::string> avoid) {
  for (const auto& tp : sig.type_params) {
    auto a = free_type_vars(tp.lower);
    auto b = free_type_vars(tp.upper);
    avoid.insert(a.begin(), a.end());
    avoid.insert(b.begin(), b.end());
  }
  for (std::size_t i = 0; i < sig.type_params.size(); ++i) {
    const std::string& name = sig.type_params[i].name;
    if (!avoid.count(name)) {
      avoid.insert(name);
      continue;
    }
    std::string fresh = fresh_name(name, avoid);
    avoid.insert(fresh);
    sig = rename_type_param(sig, i, fresh);
  }
  return sig;
}

class SecChecker {
 public:
  explicit SecChecker(TypeVarEnv delta) : delta_(std::move(delta)) {}

  SecType synth(const TermEnv& gamma, const ExprPtr& e) {
    switch (e->kind) {
      case Expr::Kind::Var: {
        const SecType* s = gamma.find(e->name);
        if (!s) type_error(e, "TVar", "unbound variable " + e->name);
        return *s;
      }
      case Expr::Kind::Lit:
        return public_of(make_prim(e->lit.kind));
      case Expr::Kind::Obj:
        return object(gamma, e);
      case Expr::Kind::Ascribe:
        require_wf_sectype(delta_, e->type, e->offset);
        check(gamma, e->children[0], e->type);
        return e->type;
      case Expr::Kind::Let: {
        SecType bound = synth(gamma, e->children[0]);
        return synth(gamma.extended(e->name, bound), e->children[1]);
      }
      case Expr::Kind::If: {
        bool public_cond = condition(gamma, e->children[0]);
        SecType a = synth(gamma, e->children[1]);
        SecType b = synth(gamma, e->children[2]);
        SecType joined;
        if (sub_sectype(delta_, {}, a, b)) {
          joined = b;
        } else if (sub_sectype(delta_, {}, b, a)) {
          joined = a;
        } else {
          type_error(e, "IfBranchMismatch",
                     "branches have incomparable types " + pretty_print(a) + " and " +
                         pretty_print(b) + "; ascribe the conditional");
        }
        if (!public_cond) joined = private_of(joined.safety);
        return joined;
      }
      case Expr::Kind::Invoke:
        return invoke(gamma, e);
    }
    type_error(e, "Internal", "unknown expression");
  }

  void check(const TermEnv& gamma, const ExprPtr& e, const SecType& expected) {
    if (e->kind == Expr::Kind::If) {
      bool public_cond = condition(gamma, e->children[0]);
      if (!public_cond && !sub_type(delta_, {}, top_type(), expected.decl)) {
        type_error(e, "TSub",
                   "conditional on a non-public value cannot produce " +
                       pretty_print(expected));
      }
      check(gamma, e->children[1], expected);
      check(gamma, e->children[2], expected);
      return;
    }
    if (e->kind == Expr::Kind::Let) {
      SecType bound = synth(gamma, e->children[0]);
      check(gamma.extended(e->name, bound), e->children[1], expected);
      return;
    }
    SecType actual = synth(gamma, e);
    if (!sub_sectype(delta_, {}, actual, expected)) {
      type_error(e, "TSub",
                 "expression of type " + pretty_print(actual) + " is not a subtype of " +
                     pretty_print(expected));
    }
  }

 private:
  bool condition(const TermEnv& gamma, const ExprPtr& c) {
    SecType s = synth(gamma, c);
    if (!s.safety->is_prim() || s.safety->prim != PrimKind::Bool)
      type_error(c, "If", "condition has type " + pretty_print(s) + ", expected Bool");
    return is_public(s);
  }

  bool has(const TypePtr& u, const std::string& m, const ExprPtr& e) {
    try {
      return has_method(delta_, u, m);
    } catch (const TypeAlgebraError& err) {
      type_error(e, err.diagnostic().rule, err.diagnostic().message);
    }
  }

  SecType object(const TermEnv& gamma, const ExprPtr& e) {
    const SecType& s = e->type;
    require_wf_sectype(delta_, s, e->offset);
    const TypePtr& t = s.safety;
    if (!t->is_obj())
      type_error(e, "TObj", "object literal ascribed non-object type " + pretty_print(s));
    for (const auto& def : e->methods) {
      if (!t->find_method(def.name))
        type_error(e, "TObj", "method " + def.name + " is not in " + pretty_print(t));
    }
    TermEnv self_env = gamma.extended(e->name, s);
    std::set<std::string> captured;
    for (const auto& [name, st] : self_env.entries()) {
      auto fv = free_type_vars(st);
      captured.insert(fv.begin(), fv.end());
    }
    for (const auto& entry : t->methods) {
      const MethodDef* def = e->find_method(entry.name);
      if (!def) type_error(e, "TObj", "missing definition of method " + entry.name);
      MethodSig sig = subst_self_var(entry.sig, t, t->name);
      if (sig.params.size() != def->params.size()) {
        type_error(e, "TObj",
                   "method " + def->name + " takes " + std::to_string(sig.params.size()) +
                       " parameter(s), definition has " +
                       std::to_string(def->params.size()));
      }
      TypeVarEnv inner = delta_;
      for (const auto& tp : sig.type_params) {
        if (delta_.contains(tp.name) && captured.count(tp.name)) {
          type_error(e, "TObj",
                     "type parameter " + tp.name + " of " + def->name +
                         " shadows a type variable in scope");
        }
        inner = inner.extended(tp.name, tp.lower, tp.upper);
      }
      TermEnv body_env = self_env;
      for (std::size_t i = 0; i < def->params.size(); ++i)
        body_env = body_env.extended(def->params[i], sig.params[i]);
      SecChecker nested(inner);
      nested.check(body_env, def->body, sig.ret);
    }
    return s;
  }

  SecType invoke(const TermEnv& gamma, const ExprPtr& e) {
    SecType recv = synth(gamma, e->receiver());
    const std::string& m = e->name;
    const std::size_t nargs = e->children.size() - 1;
    bool declassified = has(recv.decl, m, e);
    if (!declassified && !has(recv.safety, m, e)) {
      type_error(e, "NoSuchMethod",
                 "method " + m + " is in neither facet of " + pretty_print(recv));
    }
    MethodSig sig = msig(delta_, declassified ? recv.decl : recv.safety, m);
    if (sig.arity() != nargs) {
      type_error(e, "ArgMismatch",
                 m + " expects " + std::to_string(sig.arity()) + " argument(s), got " +
                     std::to_string(nargs));
    }
    if (sig.is_prim()) {
      if (!e->type_args.empty())
        type_error(e, "ArgMismatch", "primitive method " + m + " takes no type arguments");
      std::vector<SecType> args;
      for (std::size_t i = 0; i < nargs; ++i) {
        const ExprPtr& arg = e->children[i + 1];
        SecType a = synth(gamma, arg);
        if (!a.safety->is_prim() || a.safety->prim != sig.prim_params[i]) {
          type_error(arg, declassified ? "TPmD" : "TPmH",
                     "argument of " + m + " has type " + pretty_print(a) + ", expected " +
                         std::string(prim_name(sig.prim_params[i])));
        }
        args.push_back(a);
      }
      TypePtr ret = make_prim(sig.prim_ret);
      if (!declassified) return private_of(ret);
      return SecType::faceted(ret, rdecl(args, sig.prim_ret));
    }
    return generic_invoke(gamma, e, freshen(sig, names_of(delta_)), declassified);
  }

  SecType generic_invoke(const TermEnv& gamma, const ExprPtr& e, const MethodSig& sig,
                         bool declassified) {
    const std::string rule = declassified ? "TmD" : "TmH";
    const std::size_t n = sig.type_params.size();
    for (const auto& t : e->type_args) {
      std::vector<Diagnostic> diags;
      if (!wf_type(names_of(delta_), t, &diags)) {
        throw WfError({Severity::Error, "WfType",
                       diags.empty() ? "ill-formed type argument" : diags.front().message,
                       e->offset});
      }
    }
    if (!e->type_args.empty() && e->type_args.size() != n) {
      type_error(e, rule,
                 e->name + " expects " + std::to_string(n) + " type argument(s), got " +
                     std::to_string(e->type_args.size()));
    }
    if (!e->type_args.empty() || n == 0) {
      std::vector<TypePtr> chosen(e->type_args.begin(), e->type_args.end());
      return instantiate(gamma, e, sig, chosen, declassified, true);
    }

    // Candidate type arguments: the declassification facet of an argument whose
    // parameter is declared at that variable, then the lower, then the upper bound.
    std::vector<std::optional<SecType>> synthesized(e->children.size() - 1);
    for (std::size_t j = 0; j + 1 < e->children.size(); ++j) {
      try {
        synthesized[j] = synth(gamma, e->children[j + 1]);
      } catch (const GobsecError&) {
      }
    }
    std::vector<std::vector<TypePtr>> from_args(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < sig.params.size(); ++j) {
        const SecType& p = sig.params[j];
        if (!p.is_star() && p.decl->is_type_var() && p.decl->name == sig.type_params[i].name &&
            synthesized[j]) {
          from_args[i].push_back(synthesized[j]->decl);
        }
      }
    }
    std::optional<TypeError> last;
    std::vector<TypePtr> chosen;
    std::optional<SecType> found;
    std::function<void(std::size_t)> search = [&](std::size_t i) {
      if (found) return;
      if (i == n) {
        try {
          found = instantiate(gamma, e, sig, chosen, declassified, false);
        } catch (const TypeError& err) {
          last = err;
        }
        return;
      }
      TypePtr lo = sig.type_params[i].lower;
      TypePtr hi = sig.type_params[i].upper;
      for (std::size_t k = 0; k < i; ++k) {
        lo = subst_type_var(lo, chosen[k], sig.type_params[k].name);
        hi = subst_type_var(hi, chosen[k], sig.type_params[k].name);
      }
      std::vector<TypePtr> cands = from_args[i];
      cands.push_back(lo);
      cands.push_back(hi);
      std::set<std::string> tried;
      for (const auto& c : cands) {
        if (found) return;
        if (!tried.insert(canonical(c)).second) continue;
        if (!in_interval(delta_, c, lo, hi)) continue;
        chosen.push_back(c);
        search(i + 1);
        chosen.pop_back();
      }
    };
    search(0);
    if (found) return *found;
    if (last) throw *last;
    type_error(e, "BoundViolation",
               "no type argument for " + e->name + " satisfies its bounds");
  }

  SecType instantiate(const TermEnv& gamma, const ExprPtr& e, const MethodSig& sig,
                      const std::vector<TypePtr>& chosen, bool declassified,
                      bool check_bounds) {
    const std::string rule = declassified ? "TmD" : "TmH";
    std::vector<SecType> params = sig.params;
    SecType ret = sig.ret;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      const TypeParam& tp = sig.type_params[i];
      if (check_bounds) {
        TypePtr lo = tp.lower;
        TypePtr hi = tp.upper;
        for (std::size_t k = 0; k < i; ++k) {
          lo = subst_type_var(lo, chosen[k], sig.type_params[k].name);
          hi = subst_type_var(hi, chosen[k], sig.type_params[k].name);
        }
        if (!in_interval(delta_, chosen[i], lo, hi)) {
          type_error(e, "BoundViolation",
                     "type argument " + pretty_print(chosen[i]) + " of " + e->name +
                         " is outside " + pretty_print(lo) + ".." + pretty_print(hi));
        }
      }
      for (auto& p : params) p = subst_type_var(p, chosen[i], tp.name);
      ret = subst_type_var(ret, chosen[i], tp.name);
    }
    for (std::size_t j = 0; j < params.size(); ++j) {
      try {
        check(gamma, e->children[j + 1], params[j]);
      } catch (const TypeError& err) {
        type_error(e->children[j + 1], "ArgMismatch",
                   "argument " + std::to_string(j + 1) + " of " + e->name + ": " +
                       err.diagnostic().message);
      }
    }
    if (declassified) return ret;
    return private_of(ret.safety);
  }

  TypeVarEnv delta_;
};

// ---------------------------------------------------------------------------
// Simple typing

class SimpleChecker {
 public:
  TypePtr synth(const TermEnv& gamma, const ExprPtr& e) {
    switch (e->kind) {
      case Expr::Kind::Var: {
        const SecType* s = gamma.find(e->name);
        if (!s) type_error(e, "T1Var", "unbound variable " + e->name);
        return s->safety;
      }
      case Expr::Kind::Lit:
        return make_prim(e->lit.kind);
      case Expr::Kind::Ascribe:
        check(gamma, e->children[0], e->type.safety);
        return e->type.safety;
      case Expr::Kind::Let:
        return synth(gamma.extended(e->name, public_of(synth(gamma, e->children[0]))),
                     e->children[1]);
      case Expr::Kind::If: {
        check(gamma, e->children[0], make_prim(PrimKind::Bool));
        TypePtr a = synth(gamma, e->children[1]);
        TypePtr b = synth(gamma, e->children[2]);
        if (sub(a, b)) return b;
        if (sub(b, a)) return a;
        type_error(e, "IfBranchMismatch", "branches have incomparable safety types");
      }
      case Expr::Kind::Obj:
        return object(gamma, e);
      case Expr::Kind::Invoke:
        return invoke(gamma, e);
    }
    type_error(e, "Internal", "unknown expression");
  }

  void check(const TermEnv& gamma, const ExprPtr& e, const TypePtr& expected) {
    if (e->kind == Expr::Kind::If) {
      check(gamma, e->children[0], make_prim(PrimKind::Bool));
      check(gamma, e->children[1], expected);
      check(gamma, e->children[2], expected);
      return;
    }
    TypePtr actual = synth(gamma, e);
    if (!sub(actual, expected)) {
      type_error(e, "T1Sub",
                 pretty_print(actual) + " is not a subtype of " + pretty_print(expected));
    }
  }

 private:
  bool sub(const TypePtr& a, const TypePtr& b) {
    return sub_type({}, {}, a, b, SubMode::Simple);
  }

  TypePtr object(const TermEnv& gamma, const ExprPtr& e) {
    const TypePtr& t = e->type.safety;
    if (e->type.is_star() || !t->is_obj())
      type_error(e, "T1Obj", "object literal ascribed a non-object type");
    if (e->methods.size() != t->methods.size())
      type_error(e, "T1Obj", "method definitions do not match the ascribed type");
    TermEnv self_env = gamma.extended(e->name, e->type);
    for (const auto& entry : t->methods) {
      const MethodDef* def = e->find_method(entry.name);
      if (!def) type_error(e, "T1Obj", "missing definition of method " + entry.name);
      MethodSig sig = subst_self_var(entry.sig, t, t->name);
      if (sig.is_prim() || sig.params.size() != def->params.size())
        type_error(e, "T1Obj", "method " + def->name + " has the wrong arity");
      TermEnv env = self_env;
      for (std::size_t i = 0; i < def->params.size(); ++i)
        env = env.extended(def->params[i], sig.params[i]);
      check(env, def->body, sig.ret.safety);
    }
    return t;
  }

  TypePtr invoke(const TermEnv& gamma, const ExprPtr& e) {
    TypePtr recv = synth(gamma, e->receiver());
    const std::string& m = e->name;
    const std::size_t nargs = e->children.size() - 1;
    if (recv->is_type_var() || !has_method({}, recv, m))
      type_error(e, "T1mI", "no method " + m + " in " + pretty_print(recv));
    MethodSig sig = msig({}, recv, m);
    if (sig.arity() != nargs) type_error(e, "T1mI", "wrong number of arguments to " + m);
    if (sig.is_prim()) {
      for (std::size_t i = 0; i < nargs; ++i)
        check(gamma, e->children[i + 1], make_prim(sig.prim_params[i]));
      return make_prim(sig.prim_ret);
    }
    for (std::size_t i = 0; i < nargs; ++i)
      check(gamma, e->children[i + 1], sig.params[i].safety);
    return sig.ret.safety;
  }
};

}  // namespace

SecType sec_synth(const TypeVarEnv& delta, const TermEnv& gamma, const ExprPtr& e) {
  SecChecker c(delta);
  try {
    return c.synth(gamma, e);
  } catch (const TypeAlgebraError& err) {
    Diagnostic d = err.diagnostic();
    throw TypeError(d);
  }
}

CheckResult sec_check(const TypeVarEnv& delta, const TermEnv& gamma, const ExprPtr& e,
                      const SecType& expected) {
  CheckResult out;
  try {
    out.type = sec_synth(delta, gamma, e);
    out.ok = sub_sectype(delta, {}, *out.type, expected);
    if (!out.ok) {
      out.diagnostics.push_back({Severity::Error, "TSub",
                                 "synthesized " + pretty_print(*out.type) +
                                     " is not a subtype of " + pretty_print(expected),
                                 e->offset});
    }
  } catch (const GobsecError& err) {
    out.ok = false;
    out.diagnostics.push_back(err.diagnostic());
  }
  return out;
}

TypePtr simple_synth(const TermEnv& gamma, const ExprPtr& e) {
  SimpleChecker c;
  try {
    return c.synth(gamma, e);
  } catch (const TypeAlgebraError& err) {
    throw TypeError(err.diagnostic());
  }
}

bool simple_check(const TermEnv& gamma, const ExprPtr& e, const TypePtr& expected) {
  SimpleChecker c;
  try {
    c.check(gamma, e, expected);
    return true;
  } catch (const GobsecError&) {
    return false;
  }
}

ProgramCheck check_program(const SourceProgram& program, bool simple) {
  ProgramCheck out;
  std::vector<Diagnostic> diags;
  bool wf = wf_tvar_env(program.tvars, &diags);
  if (wf) wf = wf_term_env(program.tvars, program.vars, &diags);
  for (auto& d : diags) {
    if (d.severity == Severity::Warning || !wf) out.diagnostics.push_back(d);
  }
  if (!wf) {
    out.stage = CheckStage::Wf;
    return out;
  }
  try {
    if (simple) {
      out.simple_type = simple_synth(program.vars, program.body);
    } else {
      out.type = sec_synth(program.tvars, program.vars, program.body);
    }
  } catch (const WfError& err) {
    out.stage = CheckStage::Wf;
    out.diagnostics.push_back(err.diagnostic());
  } catch (const GobsecError& err) {
    out.stage = CheckStage::Type;
    out.diagnostics.push_back(err.diagnostic());
  }
  return out;
}

}  // namespace gobsec
