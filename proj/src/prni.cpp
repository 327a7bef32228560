#include "gobsec/prni.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <set>

#include "gobsec/eval.hpp"
#include "gobsec/printer.hpp"
#include "gobsec/subtyping.hpp"
#include "gobsec/type_algebra.hpp"
#include "gobsec/typecheck.hpp"
#include "gobsec/wellformed.hpp"

namespace gobsec {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto fin = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return fin(fin(fin(seed) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

SecType apply_subst(const TypeSubst& sigma, const SecType& s) {
  SecType out = s;
  for (const auto& [x, t] : sigma) out = subst_type_var(out, t, x);
  return out;
}

TypePtr apply_subst(const TypeSubst& sigma, const TypePtr& t) {
  TypePtr out = t;
  for (const auto& [x, u] : sigma) out = subst_type_var(out, u, x);
  return out;
}

std::vector<TypePtr> default_pool(const SourceProgram& program) {
  std::vector<TypePtr> pool = {make_prim(PrimKind::Int), make_prim(PrimKind::String),
                               make_prim(PrimKind::Bool), make_prim(PrimKind::Unit),
                               top_type()};
  for (const auto& [name, t] : program.named_types) {
    if (free_type_vars(t).empty() && free_self_vars(t).empty()) pool.push_back(t);
  }
  return pool;
}

namespace {

std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(Rng& rng) { return pick(rng, 2) == 0; }

std::vector<TypePtr> interval_candidates(const TypePtr& lo, const TypePtr& hi,
                                         const std::vector<TypePtr>& pool) {
  std::vector<TypePtr> out;
  std::set<std::string> seen;
  auto consider = [&](const TypePtr& t) {
    if (!free_type_vars(t).empty()) return;
    if (!seen.insert(canonical(t)).second) return;
    if (in_interval({}, t, lo, hi)) out.push_back(t);
  };
  consider(lo);
  consider(hi);
  for (const auto& p : pool) consider(p);
  return out;
}

/// Generic signature closed at the lower bounds of its type parameters.
MethodSig close_at_lower(const MethodSig& sig) {
  if (sig.is_prim() || sig.type_params.empty()) return sig;
  MethodSig out = sig;
  std::vector<TypeParam> tps = out.type_params;
  out.type_params.clear();
  for (std::size_t i = 0; i < tps.size(); ++i) {
    TypePtr lo = tps[i].lower;
    for (auto& p : out.params) p = subst_type_var(p, lo, tps[i].name);
    out.ret = subst_type_var(out.ret, lo, tps[i].name);
    for (std::size_t j = i + 1; j < tps.size(); ++j) {
      tps[j].lower = subst_type_var(tps[j].lower, lo, tps[i].name);
      tps[j].upper = subst_type_var(tps[j].upper, lo, tps[i].name);
    }
  }
  return out;
}

std::vector<std::string> param_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

// ---------------------------------------------------------------------------
// Primitive literals

const char* const kStringPool[] = {"", "a", "b", "ab", "abc", "123", "secret", "zzzz"};
const std::int64_t kIntPool[] = {0, 1, -1, 2, 7, 42};

std::string random_string(Rng& rng, std::size_t len) {
  static const char kAlphabet[] = "abc123xyz";
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += kAlphabet[pick(rng, sizeof kAlphabet - 1)];
  return s;
}

Literal random_literal(PrimKind kind, Rng& rng) {
  switch (kind) {
    case PrimKind::Int:
      if (coin(rng)) return Literal::of_int(kIntPool[pick(rng, std::size(kIntPool))]);
      return Literal::of_int(static_cast<std::int64_t>(pick(rng, 201)) - 100);
    case PrimKind::String:
      if (coin(rng)) return Literal::of_string(kStringPool[pick(rng, std::size(kStringPool))]);
      return Literal::of_string(random_string(rng, pick(rng, 6)));
    case PrimKind::Bool:
      return Literal::of_bool(coin(rng));
    case PrimKind::Unit:
      break;
  }
  return Literal::unit();
}

/// What a public observer can learn about a primitive through a policy.
/// Strings use every field; other primitives only `equal`.
struct Atoms {
  bool equal = false;
  bool length = false;
  bool first = false;
  bool empty = false;  // emptiness agrees

  void merge(const Atoms& o) {
    equal |= o.equal;
    length |= o.length;
    first |= o.first;
    empty |= o.empty;
  }
  bool any() const { return equal || length || first || empty; }
};

Atoms through_method(PrimKind recv, const std::string& m, const Atoms& result) {
  Atoms out;
  if (!result.any()) return out;
  if (recv == PrimKind::String) {
    if (m == "length") {
      out.length = true;
    } else if (m == "first") {
      out.first = result.equal || result.first;
      out.empty = result.length || result.empty;
    } else if (m == "concat") {
      out.equal = result.equal;
      out.length = result.length;
      out.first = result.first;
      out.empty = result.first || result.empty;
    } else {
      out.equal = true;
    }
    return out;
  }
  if (recv != PrimKind::Unit) out.equal = true;
  return out;
}

Atoms prim_atoms(PrimKind p, const TypePtr& policy, int depth) {
  Atoms out;
  if (policy->is_top()) return out;
  if (depth > 8 || policy->is_prim() || !policy->is_obj()) {
    out.equal = p != PrimKind::Unit;
    return out;
  }
  const auto& table = prim_methods(p);
  for (const auto& entry : policy->methods) {
    auto it = std::find_if(table.begin(), table.end(),
                           [&](const MethodEntry& e) { return e.name == entry.name; });
    if (it == table.end()) continue;
    MethodSig sig = close_at_lower(subst_self_var(entry.sig, policy, policy->name));
    Atoms result;
    if (sig.is_prim()) {
      result.equal = true;
    } else {
      bool object_param = false;
      for (const auto& prm : sig.params)
        object_param = object_param || !prm.safety->is_prim();
      if (!sig.ret.safety->is_prim() || object_param) {
        result.equal = true;
      } else {
        result = prim_atoms(sig.ret.safety->prim, sig.ret.decl, depth + 1);
        if (result.any() && sig.ret.safety->prim != PrimKind::String) result = {true};
      }
    }
    out.merge(through_method(p, entry.name, result));
  }
  if (p != PrimKind::String && out.any()) out = {true};
  return out;
}

std::pair<Literal, Literal> related_literals(PrimKind p, const Atoms& atoms, Rng& rng) {
  Literal a = random_literal(p, rng);
  if (atoms.equal || p == PrimKind::Unit) return {a, a};
  if (p != PrimKind::String) return {a, random_literal(p, rng)};
  const std::string& s = a.string_value;
  bool constrained = atoms.length || atoms.first || atoms.empty;
  if (s.empty() && constrained) return {a, a};
  std::size_t n = atoms.length ? static_cast<std::size_t>(utf8_length(s))
                               : (constrained ? 1 + pick(rng, 5) : pick(rng, 6));
  std::string t;
  if (atoms.first) {
    t = utf8_first(s);
    if (atoms.length) {
      // keep the character count with a multi-byte first character
      t += random_string(rng, n - 1);
    } else {
      t += random_string(rng, n > 0 ? n - 1 : 0);
    }
  } else {
    t = random_string(rng, n);
  }
  return {a, Literal::of_string(t)};
}

// ---------------------------------------------------------------------------
// Object values

ExprPtr looping_object(const TypePtr& t) {
  std::vector<MethodDef> defs;
  for (const auto& m : t->methods) {
    auto ps = param_names(m.sig.arity());
    std::vector<ExprPtr> args;
    for (const auto& x : ps) args.push_back(make_var(x));
    defs.push_back({m.name, ps, make_invoke(make_var("self"), m.name, {}, args)});
  }
  return make_object("self", public_of(t), std::move(defs));
}

ExprPtr gen_value_impl(const TypePtr& t, Rng& rng, int depth) {
  if (t->is_prim()) return make_lit(random_literal(t->prim, rng));
  if (!t->is_obj()) return make_lit(Literal::unit());
  if (depth < -4) return looping_object(t);
  std::vector<MethodDef> defs;
  for (const auto& entry : t->methods) {
    MethodSig sig = close_at_lower(subst_self_var(entry.sig, t, t->name));
    ExprPtr body;
    if (sig.is_prim()) {
      body = make_lit(random_literal(sig.prim_ret, rng));
    } else if (type_equiv(sig.ret.safety, t)) {
      body = make_var("self");
    } else {
      body = gen_value_impl(sig.ret.safety, rng, depth - 1);
    }
    defs.push_back({entry.name, param_names(sig.arity()), body});
  }
  return make_object("self", public_of(t), std::move(defs));
}

class PairGen {
 public:
  PairGen(Rng& rng, const ProbeContext& ctx) : rng_(rng), ctx_(ctx) {}

  std::pair<ExprPtr, ExprPtr> pair(const SecType& s, int depth) {
    const TypePtr& t = s.safety;
    if (s.decl->is_top()) return {gen_value_impl(t, rng_, depth), gen_value_impl(t, rng_, depth)};
    if (t->is_prim()) {
      auto [a, b] = related_literals(t->prim, prim_atoms(t->prim, s.decl, 0), rng_);
      return {make_lit(a), make_lit(b)};
    }
    if (!t->is_obj() || !s.decl->is_obj()) {
      ExprPtr v = gen_value_impl(t, rng_, depth);
      return {v, v};
    }
    if (is_list_shaped(t, s.decl)) return list(t, s.decl, depth);
    return object(t, s.decl, depth);
  }

 private:
  struct MethodPlan {
    std::string name;
    std::size_t arity;
    bool self_return;
    bool observable;
    SecType ret;  // pair type for observable methods, safety for the rest
  };

  std::vector<MethodPlan> plan(const TypePtr& t, const TypePtr& u) {
    std::vector<MethodPlan> out;
    for (const auto& entry : t->methods) {
      MethodSig st = close_at_lower(subst_self_var(entry.sig, t, t->name));
      MethodPlan p{entry.name, st.arity(), false, false, {}};
      if (st.is_prim()) {
        p.ret = public_of(make_prim(st.prim_ret));
        out.push_back(p);
        continue;
      }
      if (const MethodEntry* ue = u->find_method(entry.name)) {
        MethodSig su = close_at_lower(subst_self_var(ue->sig, u, u->name));
        p.observable = true;
        TypePtr decl = su.is_prim() ? make_prim(su.prim_ret) : su.ret.decl;
        p.ret = SecType::faceted(st.ret.safety, decl);
        p.self_return = type_equiv(st.ret.safety, t) && type_equiv(decl, u);
      } else {
        p.ret = private_of(st.ret.safety);
        p.self_return = type_equiv(st.ret.safety, t);
      }
      out.push_back(std::move(p));
    }
    return out;
  }

  bool is_list_shaped(const TypePtr& t, const TypePtr& u) {
    bool empty_flag = false;
    bool tail = false;
    for (const auto& p : plan(t, u)) {
      if (p.name == "isEmpty" && p.ret.safety->is_prim() &&
          p.ret.safety->prim == PrimKind::Bool)
        empty_flag = true;
      if (p.name == "tail" && p.self_return) tail = true;
    }
    return empty_flag && tail;
  }

  std::pair<ExprPtr, ExprPtr> method_pair(const MethodPlan& p, int depth) {
    if (p.self_return) return {make_var("self"), make_var("self")};
    if (p.observable) {
      if (depth <= 0) {
        ExprPtr v = gen_value_impl(p.ret.safety, rng_, depth - 1);
        return {v, v};
      }
      return pair(p.ret, depth - 1);
    }
    return {gen_value_impl(p.ret.safety, rng_, depth - 1),
            gen_value_impl(p.ret.safety, rng_, depth - 1)};
  }

  std::pair<ExprPtr, ExprPtr> node(const TypePtr& t, const std::vector<MethodPlan>& plans,
                                   int depth, const std::map<std::string, std::pair<ExprPtr, ExprPtr>>& fixed) {
    std::vector<MethodDef> d1, d2;
    for (const auto& p : plans) {
      auto it = fixed.find(p.name);
      auto [a, b] = it != fixed.end() ? it->second : method_pair(p, depth);
      d1.push_back({p.name, param_names(p.arity), a});
      d2.push_back({p.name, param_names(p.arity), b});
    }
    return {make_object("self", public_of(t), std::move(d1)),
            make_object("self", public_of(t), std::move(d2))};
  }

  std::pair<ExprPtr, ExprPtr> object(const TypePtr& t, const TypePtr& u, int depth) {
    return node(t, plan(t, u), depth, {});
  }

  std::pair<ExprPtr, ExprPtr> list(const TypePtr& t, const TypePtr& u, int depth) {
    auto plans = plan(t, u);
    std::size_t n = pick(rng_, 4);
    auto tail_of = [](const std::pair<ExprPtr, ExprPtr>& p) { return p; };
    std::map<std::string, std::pair<ExprPtr, ExprPtr>> fixed;
    fixed["isEmpty"] = {make_lit(Literal::of_bool(true)), make_lit(Literal::of_bool(true))};
    auto cur = node(t, plans, depth, fixed);
    for (std::size_t i = 0; i < n; ++i) {
      fixed["isEmpty"] = {make_lit(Literal::of_bool(false)), make_lit(Literal::of_bool(false))};
      fixed["tail"] = tail_of(cur);
      cur = node(t, plans, depth, fixed);
    }
    return cur;
  }

  Rng& rng_;
  const ProbeContext& ctx_;
};

// ---------------------------------------------------------------------------
// Relatedness probing

std::string args_label(const std::vector<ExprPtr>& a1, const std::vector<ExprPtr>& a2) {
  auto render = [](const std::vector<ExprPtr>& as) {
    std::string s;
    for (std::size_t i = 0; i < as.size(); ++i) {
      if (i) s += ", ";
      s += pretty_print(as[i]);
    }
    return s;
  };
  if (a1.size() == 1 && a1[0]->kind == Expr::Kind::Lit && a1[0]->lit.kind == PrimKind::Unit)
    return "()";
  std::string l = render(a1);
  std::string r = render(a2);
  if (l == r) return "(" + l + ")";
  return "(" + l + " | " + r + ")";
}

class Prober {
 public:
  Prober(const ProbeContext& ctx, std::uint64_t seed) : ctx_(ctx), seed_(seed) {}

  RelationResult rel(std::size_t k, const ExprPtr& v1, const ExprPtr& v2, const SecType& s,
                     const std::string& path) {
    if (k == 0 || s.is_star() || s.decl->is_top()) return {};
    if (v1->kind != v2->kind) return distinct(path, v1, v2);
    if (v1->kind == Expr::Kind::Lit) {
      if (v1->lit == v2->lit) return {};
      if (s.decl->is_prim()) return distinct(path, v1, v2);
    }
    const TypePtr& u = s.decl;
    if (!u->is_obj()) return {};
    Rng rng(mix_seed(seed_, std::hash<std::string>{}(path)));
    for (const auto& entry : u->methods) {
      MethodSig sig = subst_self_var(entry.sig, u, u->name);
      std::size_t probes = sig.is_prim() || !sig.type_params.empty() || !all_unit(sig) ? 4 : 1;
      for (std::size_t n = 0; n < probes; ++n) {
        if (used_ >= ctx_.budget) return {};
        RelationResult r = probe(k, v1, v2, entry.name, sig, path, rng);
        if (!r.related) return r;
      }
    }
    return {};
  }

 private:
  static bool all_unit(const MethodSig& sig) {
    if (sig.is_prim()) return false;
    for (const auto& p : sig.params) {
      if (!p.safety->is_prim() || p.safety->prim != PrimKind::Unit) return false;
    }
    return true;
  }

  static RelationResult distinct(const std::string& path, const ExprPtr& a, const ExprPtr& b) {
    RelationResult r;
    r.related = false;
    r.observation = Observation{path, a, b};
    return r;
  }

  /// Equal public argument, sometimes one of the observed values themselves.
  ExprPtr public_arg(PrimKind kind, const ExprPtr& v1, const ExprPtr& v2, Rng& rng) {
    std::vector<ExprPtr> own;
    for (const auto& v : {v1, v2}) {
      if (v->kind == Expr::Kind::Lit && v->lit.kind == kind) own.push_back(v);
    }
    if (!own.empty() && coin(rng)) return own[pick(rng, own.size())];
    return make_lit(random_literal(kind, rng));
  }

  RelationResult probe(std::size_t k, const ExprPtr& v1, const ExprPtr& v2,
                       const std::string& m, const MethodSig& sig, const std::string& path,
                       Rng& rng) {
    std::vector<ExprPtr> a1, a2;
    SecType ret;
    if (sig.is_prim()) {
      for (PrimKind p : sig.prim_params) {
        ExprPtr a = public_arg(p, v1, v2, rng);
        a1.push_back(a);
        a2.push_back(a);
      }
      ret = public_of(make_prim(sig.prim_ret));
    } else {
      std::vector<std::pair<std::string, TypePtr>> chosen;
      for (const auto& tp : sig.type_params) {
        TypePtr lo = tp.lower;
        TypePtr hi = tp.upper;
        for (const auto& [x, t] : chosen) {
          lo = subst_type_var(lo, t, x);
          hi = subst_type_var(hi, t, x);
        }
        auto cands = interval_candidates(lo, hi, ctx_.pool);
        if (cands.empty()) return {};
        chosen.emplace_back(tp.name, cands[pick(rng, cands.size())]);
      }
      ret = sig.ret;
      for (const auto& [x, t] : chosen) ret = subst_type_var(ret, t, x);
      PairGen gen(rng, ctx_);
      for (SecType p : sig.params) {
        for (const auto& [x, t] : chosen) p = subst_type_var(p, t, x);
        if (p.safety->is_prim() && is_public(p)) {
          ExprPtr a = public_arg(p.safety->prim, v1, v2, rng);
          a1.push_back(a);
          a2.push_back(a);
        } else {
          auto [x1, x2] = gen.pair(p, 2);
          a1.push_back(x1);
          a2.push_back(x2);
        }
      }
    }
    used_ += 2;
    Outcome o1 = eval(make_invoke(v1, m, {}, a1), ctx_.fuel);
    Outcome o2 = eval(make_invoke(v2, m, {}, a2), ctx_.fuel);
    if (!o1.is_value() || !o2.is_value()) return {};
    return rel(k - 1, o1.value, o2.value, ret, path + "." + m + args_label(a1, a2));
  }

  const ProbeContext& ctx_;
  std::uint64_t seed_;
  std::size_t used_ = 0;
};

}  // namespace

TypeSubst sample_subst(const TypeVarEnv& delta, const std::vector<TypePtr>& pool, Rng& rng) {
  TypeSubst sigma;
  std::set<std::string> done;
  std::vector<const TypeVarBound*> pending;
  for (const auto& b : delta.entries()) pending.push_back(&b);
  while (!pending.empty()) {
    bool progressed = false;
    for (auto it = pending.begin(); it != pending.end();) {
      const TypeVarBound* b = *it;
      bool ready = true;
      for (const auto& v : free_type_vars(b->lower)) ready = ready && done.count(v);
      for (const auto& v : free_type_vars(b->upper)) ready = ready && done.count(v);
      if (!ready) {
        ++it;
        continue;
      }
      TypePtr lo = apply_subst(sigma, b->lower);
      TypePtr hi = apply_subst(sigma, b->upper);
      auto cands = interval_candidates(lo, hi, pool);
      if (cands.empty()) {
        throw GobsecError({Severity::Error, "EmptyInterval",
                           "no closed type lies in the bounds of " + b->name, 0});
      }
      sigma.emplace_back(b->name, cands[pick(rng, cands.size())]);
      done.insert(b->name);
      it = pending.erase(it);
      progressed = true;
    }
    if (!progressed) {
      throw GobsecError(
          {Severity::Error, "CyclicBounds", "type variable bounds are cyclic", 0});
    }
  }
  return sigma;
}

ExprPtr gen_value(const TypePtr& t, Rng& rng, int depth) { return gen_value_impl(t, rng, depth); }

std::pair<ExprPtr, ExprPtr> gen_related_pair(const SecType& s, Rng& rng,
                                             const ProbeContext& ctx, int depth) {
  PairGen g(rng, ctx);
  return g.pair(s, depth);
}

RelationResult check_related(std::size_t k, const ExprPtr& v1, const ExprPtr& v2,
                             const SecType& s, const ProbeContext& ctx, std::uint64_t seed) {
  Prober p(ctx, seed);
  return p.rel(k, v1, v2, s, "");
}

// ---------------------------------------------------------------------------
// Harness

namespace {

class Harness {
 public:
  Harness(const SourceProgram& program, const SecType& observe, const PrniConfig& config)
      : program_(program), observe_(observe), config_(config) {
    ProgramCheck simple = check_program(program, true);
    if (simple.stage != CheckStage::Ok) {
      std::string why = simple.diagnostics.empty() ? "" : ": " + simple.diagnostics.front().message;
      throw GobsecError({Severity::Error, "Config",
                         "program does not simple-typecheck" + why, 0});
    }
    std::vector<Diagnostic> diags;
    if (!wf_sectype(program.tvars, observe, &diags)) {
      throw GobsecError({Severity::Error, "Config",
                         "observation type is ill-formed: " +
                             (diags.empty() ? std::string("?") : diags.front().message),
                         0});
    }
    if (!sub_type(program.tvars, {}, simple.simple_type, observe.safety)) {
      throw GobsecError({Severity::Error, "Config",
                         "program type " + pretty_print(simple.simple_type) +
                             " is not a subtype of the observation " + pretty_print(observe.safety),
                         0});
    }
    ctx_.pool = default_pool(program);
    ctx_.pool.insert(ctx_.pool.end(), config.extra_pool.begin(), config.extra_pool.end());
    ctx_.fuel = config.fuel;
    body_ = erase(program.body);
    std::size_t n = program.tvars.empty() ? 1 : std::max<std::size_t>(1, config.substs);
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng(mix_seed(config.seed, 0x5167AULL, i));
      sigmas_.push_back(sample_subst(program.tvars, ctx_.pool, rng));
    }
  }

  std::size_t substs() const { return sigmas_.size(); }

  enum class TrialEnd { Related, Timeout, Stuck, Distinct };

  TrialEnd run(std::size_t i, std::size_t j, Witness* out) const {
    const TypeSubst& sigma = sigmas_[i];
    std::uint64_t trial_seed = mix_seed(config_.seed, i + 1, j + 1);
    Rng rng(trial_seed);
    ValueSubst g1, g2;
    for (const auto& [x, s] : program_.vars.entries()) {
      auto [v1, v2] = gen_related_pair(apply_subst(sigma, s), rng, ctx_);
      g1.emplace_back(x, v1);
      g2.emplace_back(x, v2);
    }
    Outcome o1 = eval(subst_term(body_, g1), config_.fuel);
    Outcome o2 = eval(subst_term(body_, g2), config_.fuel);
    if (o1.kind == Outcome::Kind::Stuck || o2.kind == Outcome::Kind::Stuck) return TrialEnd::Stuck;
    if (!o1.is_value() || !o2.is_value()) return TrialEnd::Timeout;
    RelationResult r = check_related(config_.k, o1.value, o2.value,
                                     apply_subst(sigma, observe_), ctx_,
                                     mix_seed(trial_seed, 0xC4ECULL));
    if (r.related) return TrialEnd::Related;
    if (out) {
      out->subst_index = i;
      out->pair_index = j;
      out->sigma = sigma;
      out->gamma1 = std::move(g1);
      out->gamma2 = std::move(g2);
      out->output1 = o1.value;
      out->output2 = o2.value;
      out->observation = *r.observation;
    }
    return TrialEnd::Distinct;
  }

 private:
  const SourceProgram& program_;
  SecType observe_;
  PrniConfig config_;
  ProbeContext ctx_;
  ExprPtr body_;
  std::vector<TypeSubst> sigmas_;
};

}  // namespace

Verdict prni_test(const SourceProgram& program, const SecType& observe,
                  const PrniConfig& config) {
  Harness h(program, observe, config);
  const std::size_t pairs = std::max<std::size_t>(1, config.pairs);
  const std::size_t total = h.substs() * pairs;
  std::vector<unsigned char> ends(total, 0);
  std::atomic<std::size_t> best{total};

#pragma omp parallel for schedule(dynamic, 16) if (config.parallel)
  for (long long t = 0; t < static_cast<long long>(total); ++t) {
    auto idx = static_cast<std::size_t>(t);
    if (idx >= best.load()) continue;
    auto end = h.run(idx / pairs, idx % pairs, nullptr);
    ends[idx] = static_cast<unsigned char>(end);
    if (end == Harness::TrialEnd::Distinct) {
      std::size_t cur = best.load();
      while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
      }
    }
  }

  Verdict v;
  v.seed = config.seed;
  v.max_k = config.k;
  v.substs_tested = h.substs();
  v.pairs_tested = pairs;
  std::size_t last = best.load();
  v.trials = last == total ? total : last + 1;
  for (std::size_t t = 0; t < v.trials && t < total; ++t) {
    if (ends[t] == static_cast<unsigned char>(Harness::TrialEnd::Timeout)) ++v.timeouts;
  }
  if (last < total) {
    Witness w;
    h.run(last / pairs, last % pairs, &w);
    v.counterexample = true;
    v.witness = std::move(w);
  }
  return v;
}

bool replay_witness(const SourceProgram& program, const SecType& observe,
                    const PrniConfig& config, const Witness& witness) {
  Harness h(program, observe, config);
  Witness again;
  if (h.run(witness.subst_index, witness.pair_index, &again) != Harness::TrialEnd::Distinct)
    return false;
  return alpha_equal(again.output1, witness.output1) &&
         alpha_equal(again.output2, witness.output2) &&
         again.observation.path == witness.observation.path;
}

}  // namespace gobsec
