#include <set>

#include "doctest.h"

#include "gobsec/cli.hpp"
#include "gobsec/eval.hpp"
#include "gobsec/prni.hpp"
#include "gobsec/subtyping.hpp"
#include "gobsec/type_algebra.hpp"
#include "support.hpp"

using namespace gobsec;
using namespace testing_support;

namespace {

ExprPtr str(const std::string& s) { return make_lit(Literal::of_string(s)); }

ProbeContext probe_ctx() {
  ProbeContext c;
  c.pool = default_pool(policies());
  return c;
}

PrniConfig small(std::uint64_t seed = 11) {
  PrniConfig c;
  c.pairs = 200;
  c.substs = 4;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_SUITE("prni") {
  TEST_CASE("substitutions stay inside their intervals") {
    SourceProgram ctx = context("tvar X : StrFstLen .. StringLen");
    std::vector<TypePtr> pool{ty("StrFstLen"), ty("StringLen"), ty("StringEq")};
    std::set<std::string> seen;
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
      TypeSubst s = sample_subst(ctx.tvars, pool, rng);
      REQUIRE(s.size() == 1);
      CHECK(s[0].first == "X");
      CHECK(in_interval({}, s[0].second, ty("StrFstLen"), ty("StringLen")));
      CHECK_FALSE(type_equiv(s[0].second, ty("StringEq")));
      seen.insert(canonical(s[0].second));
    }
    CHECK(seen.size() == 2);
    CHECK(sample_subst({}, pool, rng).empty());
    SourceProgram single = context("tvar X : StringLen .. StringLen");
    TypeSubst one = sample_subst(single.tvars, pool, rng);
    CHECK(type_equiv(one[0].second, ty("StringLen")));
    SourceProgram empty = context("tvar X : Top .. StringLen");
    CHECK_THROWS_AS(sample_subst(empty.tvars, pool, rng), GobsecError);
  }

  TEST_CASE("dependent bounds are closed in order") {
    SourceProgram ctx = context("tvar X : StrFstLen .. Y\ntvar Y : StrFstLen .. StringLen");
    Rng rng(8);
    for (int i = 0; i < 50; ++i) {
      TypeSubst s = sample_subst(ctx.tvars, default_pool(ctx), rng);
      TypePtr x = apply_subst(s, make_type_var("X"));
      TypePtr y = apply_subst(s, make_type_var("Y"));
      CHECK(in_interval({}, x, ty("StrFstLen"), y));
    }
  }

  TEST_CASE("related pairs by construction") {
    ProbeContext c = probe_ctx();
    Rng rng(3);
    bool differed = false;
    for (int i = 0; i < 60; ++i) {
      auto [a, b] = gen_related_pair(st("String<StringLen>"), rng, c);
      CHECK(utf8_length(a->lit.string_value) == utf8_length(b->lit.string_value));
      auto [p, q] = gen_related_pair(st("Int!"), rng, c);
      CHECK(p->lit == q->lit);
      auto [u, v] = gen_related_pair(st("String?"), rng, c);
      differed = differed || u->lit.string_value != v->lit.string_value;
      auto [e, f] = gen_related_pair(st("String<StringEq>"), rng, c);
      CHECK(check_related(6, e, f, st("String<StringEq>"), c, i).related);
    }
    CHECK(differed);
  }

  TEST_CASE("bounded relation check") {
    ProbeContext c = probe_ctx();
    SecType len = st("String<StringLen>");
    RelationResult r = check_related(2, str("abc"), str("ab"), len, c, 1);
    CHECK_FALSE(r.related);
    REQUIRE(r.observation.has_value());
    CHECK(r.observation->path.find("length") != std::string::npos);
    CHECK(check_related(2, str("abc"), str("xyz"), len, c, 1).related);
    CHECK_FALSE(check_related(2, str("abc"), str("123"), st("String<StrFstLen>"), c, 1).related);
    CHECK(check_related(0, str("abc"), str("ab"), len, c, 1).related);
    CHECK(check_related(6, str("abc"), str("ab"), st("Top?"), c, 1).related);
    CHECK(check_related(6, str("abc"), str("q"), st("String?"), c, 1).related);
    CHECK_FALSE(check_related(1, str("abc"), str("q"), st("String!"), c, 1).related);
  }

  TEST_CASE("relation through a method of a list") {
    ProbeContext c = probe_ctx();
    SecType l = st("ListStr<StringLen>!");
    Rng rng(21);
    for (int i = 0; i < 20; ++i) {
      auto [a, b] = gen_related_pair(l, rng, c);
      CHECK(check_related(6, a, b, l, c, i).related);
    }
  }

  TEST_CASE("bounded corpus programs") {
    for (const char* f : {"bounded_length.gobsec", "bounded_at_len.gobsec"}) {
      SourceProgram p = corpus_program(f);
      Verdict v = prni_test(p, default_observation(p), small());
      CAPTURE(f);
      CHECK_FALSE(v.counterexample);
      CHECK(v.trials == 800);
    }
    for (const char* f : {"bounded_first.gobsec", "bounded_at_fst.gobsec", "list_head_leak.gobsec"}) {
      SourceProgram p = corpus_program(f);
      SecType obs = default_observation(p);
      Verdict v = prni_test(p, obs, small());
      CAPTURE(f);
      REQUIRE(v.counterexample);
      REQUIRE(v.witness.has_value());
      CHECK(v.trials >= 1);
      CHECK(replay_witness(p, obs, small(), *v.witness));
    }
  }

  TEST_CASE("private observations are never refuted") {
    SourceProgram p = corpus_program("password_leak.gobsec");
    CHECK(prni_test(p, st("String?", p), small()).counterexample == false);
    SourceProgram q = corpus_program("bounded_first.gobsec");
    CHECK_FALSE(prni_test(q, st("Top?", q), small()).counterexample);
  }

  TEST_CASE("verdicts are reproducible and independent of scheduling") {
    SourceProgram p = corpus_program("list_head_leak.gobsec");
    SecType obs = default_observation(p);
    PrniConfig par = small(77);
    PrniConfig ser = par;
    ser.parallel = false;
    Verdict a = prni_test(p, obs, par);
    Verdict b = prni_test(p, obs, ser);
    CHECK(a.counterexample == b.counterexample);
    CHECK(a.trials == b.trials);
    REQUIRE(a.witness.has_value());
    CHECK(a.witness->subst_index == b.witness->subst_index);
    CHECK(a.witness->pair_index == b.witness->pair_index);
  }

  TEST_CASE("a smaller probe depth refutes less") {
    SourceProgram p = corpus_program("list_head_leak.gobsec");
    SecType obs = default_observation(p);
    PrniConfig c = small();
    c.k = 0;
    CHECK_FALSE(prni_test(p, obs, c).counterexample);
    c.k = 6;
    CHECK(prni_test(p, obs, c).counterexample);
  }

  TEST_CASE("configuration errors") {
    SourceProgram p = parse_program("var x : String!\nx.length().concat(\"a\")");
    CHECK_THROWS_AS(prni_test(p, st("Int!"), small()), GobsecError);
    SourceProgram q = corpus_program("login.gobsec");
    CHECK_THROWS_AS(prni_test(q, st("Bool<Int>", q), small()), GobsecError);
  }
}
