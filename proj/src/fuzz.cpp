#include "gobsec/fuzz.hpp"

#include <atomic>
#include <functional>
#include <map>
#include <mutex>

#include "gobsec/parser.hpp"
#include "gobsec/subtyping.hpp"
#include "gobsec/type_algebra.hpp"
#include "gobsec/typecheck.hpp"

namespace gobsec {

namespace {

constexpr const char* kPrelude = R"(
type StringLen = [ length : Unit! -> Int! ]
type Counter = [ get : Unit! -> Int!, next : Unit! -> Counter! ]
type Ident = [ id<X: Int..Top> : Int<X> -> Int<X> ]
type Loop = [ loop : Int! -> Int! ]
type Wrap = [ val : Unit! -> String<StringLen>, secret : Unit! -> Bool? ]
unit
)";

struct Universe {
  TypePtr i, s, b, u;
  TypePtr string_len, counter, ident, loop, wrap;
  std::vector<SecType> targets;

  Universe() {
    SourceProgram p = parse_program(kPrelude);
    std::map<std::string, TypePtr> named(p.named_types.begin(), p.named_types.end());
    i = make_prim(PrimKind::Int);
    s = make_prim(PrimKind::String);
    b = make_prim(PrimKind::Bool);
    u = make_prim(PrimKind::Unit);
    string_len = named.at("StringLen");
    counter = named.at("Counter");
    ident = named.at("Ident");
    loop = named.at("Loop");
    wrap = named.at("Wrap");
    for (const auto& t : {i, s, b, u, counter, ident, loop, wrap}) targets.push_back(public_of(t));
    for (const auto& t : {i, s, b, counter}) targets.push_back(private_of(t));
    targets.push_back(SecType::faceted(s, string_len));
  }
};

const Universe& universe() {
  static const Universe u;
  return u;
}

using Env = std::vector<std::pair<std::string, SecType>>;

class TermGen {
 public:
  explicit TermGen(Rng& rng) : rng_(rng), u_(universe()) {}

  ExprPtr gen(const SecType& t, int depth, const Env& env) {
    if (depth <= 0 || pick(4) == 0) return leaf(t, depth, env);
    std::vector<std::function<ExprPtr()>> options;
    options.push_back([&] { return leaf(t, depth, env); });
    options.push_back([&] {
      return make_if(gen(cond_type(t), depth - 1, env), gen(t, depth - 1, env),
                     gen(t, depth - 1, env));
    });
    options.push_back([&] {
      const SecType& bound = u_.targets[pick(u_.targets.size())];
      std::string x = "v" + std::to_string(counter_++);
      Env inner = env;
      inner.emplace_back(x, bound);
      ExprPtr rhs = gen(bound, depth - 1, env);
      return make_let(x, rhs, gen(t, depth - 1, inner));
    });
    options.push_back([&] { return make_ascribe(gen(t, depth - 1, env), t); });
    add_operations(t, depth, env, options);
    return options[pick(options.size())]();
  }

 private:
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  SecType cond_type(const SecType& t) {
    if (t.decl->is_top() && pick(2) == 0) return private_of(u_.b);
    return public_of(u_.b);
  }

  static ExprPtr unit_lit() { return make_lit(Literal::unit()); }

  ExprPtr call(ExprPtr recv, const std::string& m, std::vector<ExprPtr> args,
               std::vector<TypePtr> targs = {}) {
    if (args.empty()) args.push_back(unit_lit());
    return make_invoke(std::move(recv), m, std::move(targs), std::move(args));
  }

  ExprPtr literal(PrimKind k) {
    switch (k) {
      case PrimKind::Int:
        return make_lit(Literal::of_int(static_cast<std::int64_t>(pick(21)) - 10));
      case PrimKind::String: {
        static const char* const pool[] = {"", "a", "ab", "xyz", "hello"};
        return make_lit(Literal::of_string(pool[pick(5)]));
      }
      case PrimKind::Bool:
        return make_lit(Literal::of_bool(pick(2) == 0));
      case PrimKind::Unit:
        break;
    }
    return unit_lit();
  }

  ExprPtr leaf(const SecType& t, int depth, const Env& env) {
    std::vector<std::string> vars;
    for (const auto& [x, s] : env) {
      if (sub_sectype({}, {}, s, t)) vars.push_back(x);
    }
    if (!vars.empty() && pick(2) == 0) return make_var(vars[pick(vars.size())]);
    if (t.safety->is_prim()) return literal(t.safety->prim);
    return object(t.safety, depth);
  }

  /// Object literal of the safety type, method bodies generated under self
  /// and the parameters.
  ExprPtr object(const TypePtr& ty, int depth) {
    std::string self = "o" + std::to_string(counter_++);
    Env env = {{self, public_of(ty)}};
    std::vector<MethodDef> defs;
    for (const auto& entry : ty->methods) {
      MethodSig sig = subst_self_var(entry.sig, ty, ty->name);
      std::vector<std::string> params;
      Env inner = env;
      for (std::size_t k = 0; k < sig.params.size(); ++k) {
        params.push_back("p" + std::to_string(counter_++));
        // bodies see type parameters as their declared variables
        if (sig.type_params.empty()) inner.emplace_back(params.back(), sig.params[k]);
      }
      ExprPtr body;
      if (entry.name == "loop") {
        body = call(make_var(self), "loop", {make_var(params[0])});
      } else if (!sig.type_params.empty()) {
        body = make_var(params[0]);
      } else {
        body = gen(sig.ret, std::max(0, depth - 2), inner);
      }
      defs.push_back({entry.name, params, body});
    }
    return make_object(self, public_of(ty), std::move(defs));
  }

  void add_operations(const SecType& t, int depth, const Env& env,
                      std::vector<std::function<ExprPtr()>>& options) {
    const int d = depth - 1;
    const bool priv = t.decl->is_top();
    SecType pi = public_of(u_.i), ps = public_of(u_.s), pb = public_of(u_.b);
    auto maybe_priv = [priv, this](const SecType& s) { return priv && pick(3) == 0 ? private_of(s.safety) : s; };
    if (!t.safety->is_prim()) {
      if (type_equiv(t.safety, u_.counter)) {
        options.push_back([=, this] { return call(gen(public_of(u_.counter), d, env), "next", {}); });
      }
      return;
    }
    switch (t.safety->prim) {
      case PrimKind::Int:
        options.push_back([=, this] {
          static const char* const ops[] = {"+", "-", "*"};
          return call(gen(maybe_priv(pi), d, env), ops[pick(3)], {gen(maybe_priv(pi), d, env)});
        });
        options.push_back([=, this] {
          SecType recv = pick(2) == 0 ? SecType::faceted(u_.s, u_.string_len) : maybe_priv(ps);
          return call(gen(recv, d, env), "length", {});
        });
        options.push_back([=, this] {
          return call(gen(public_of(u_.counter), d, env), "get", {});
        });
        options.push_back([=, this] {
          std::vector<TypePtr> targs;
          if (pick(2) == 0) targs.push_back(u_.i);
          return call(gen(public_of(u_.ident), d, env), "id", {gen(pi, d, env)}, targs);
        });
        if (pick(8) == 0) {
          options.push_back([=, this] {
            return call(gen(public_of(u_.loop), d, env), "loop", {gen(pi, d, env)});
          });
        }
        if (priv) {
          options.push_back([=, this] { return call(gen(maybe_priv(ps), d, env), "hash", {}); });
        }
        break;
      case PrimKind::String:
        options.push_back([=, this] {
          return call(gen(maybe_priv(ps), d, env), "concat", {gen(maybe_priv(ps), d, env)});
        });
        options.push_back([=, this] { return call(gen(maybe_priv(ps), d, env), "first", {}); });
        if (!t.decl->is_prim() && !priv) {
          options.push_back([=, this] { return call(gen(public_of(u_.wrap), d, env), "val", {}); });
        }
        break;
      case PrimKind::Bool:
        options.push_back([=, this] {
          static const char* const ops[] = {"eq", "lt", "gt"};
          return call(gen(maybe_priv(pi), d, env), ops[pick(3)], {gen(maybe_priv(pi), d, env)});
        });
        options.push_back([=, this] {
          return call(gen(maybe_priv(ps), d, env), "eq", {gen(maybe_priv(ps), d, env)});
        });
        options.push_back([=, this] {
          static const char* const ops[] = {"and", "or", "eq"};
          return call(gen(maybe_priv(pb), d, env), ops[pick(3)], {gen(maybe_priv(pb), d, env)});
        });
        options.push_back([=, this] { return call(gen(maybe_priv(pb), d, env), "not", {}); });
        if (priv) {
          options.push_back([=, this] { return call(gen(public_of(u_.wrap), d, env), "secret", {}); });
        }
        break;
      case PrimKind::Unit:
        break;
    }
  }

  Rng& rng_;
  const Universe& u_;
  std::size_t counter_ = 0;
};

}  // namespace

GeneratedTerm gen_welltyped(Rng& rng, int depth, std::size_t max_tries) {
  const Universe& u = universe();
  for (std::size_t tries = 1; tries <= max_tries; ++tries) {
    const SecType& target =
        u.targets[std::uniform_int_distribution<std::size_t>(0, u.targets.size() - 1)(rng)];
    TermGen g(rng);
    ExprPtr e = g.gen(target, depth, {});
    CheckResult r = sec_check({}, {}, e, target);
    if (r.ok) return {e, target, tries};
  }
  throw GobsecError({Severity::Error, "Fuzz", "no well-typed candidate within the try limit", 0});
}

FuzzReport fuzz_safety(std::uint64_t seed, std::size_t count, std::size_t fuel, bool parallel) {
  universe();
  std::vector<GeneratedTerm> terms(count);
  std::vector<Outcome> outcomes(count);
  std::vector<unsigned char> simple_ok(count, 1);

#pragma omp parallel for schedule(dynamic, 32) if (parallel)
  for (long long n = 0; n < static_cast<long long>(count); ++n) {
    auto idx = static_cast<std::size_t>(n);
    Rng rng(mix_seed(seed, 0xF022ULL, idx));
    terms[idx] = gen_welltyped(rng);
    try {
      simple_ok[idx] = simple_check({}, terms[idx].term, terms[idx].type.safety) ? 1 : 0;
    } catch (const GobsecError&) {
      simple_ok[idx] = 0;
    }
    outcomes[idx] = eval(erase(terms[idx].term), fuel);
  }

  FuzzReport report;
  report.terms = count;
  for (std::size_t idx = 0; idx < count; ++idx) {
    report.rejected += terms[idx].tries - 1;
    if (!simple_ok[idx]) ++report.simple_failures;
    switch (outcomes[idx].kind) {
      case Outcome::Kind::Value:
        ++report.values;
        break;
      case Outcome::Kind::Timeout:
        ++report.timeouts;
        break;
      case Outcome::Kind::Stuck:
        if (!report.first_stuck) {
          report.first_stuck = terms[idx].term;
          report.first_stuck_reason = outcomes[idx].reason;
        }
        ++report.stuck;
        break;
    }
  }
  return report;
}

}  // namespace gobsec
