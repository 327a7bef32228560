#include <limits>

#include "doctest.h"

#include "gobsec/eval.hpp"
#include "gobsec/fuzz.hpp"
#include "gobsec/printer.hpp"
#include "support.hpp"

using namespace gobsec;
using namespace testing_support;

namespace {

Literal I(std::int64_t v) { return Literal::of_int(v); }
Literal S(std::string v) { return Literal::of_string(std::move(v)); }
Literal B(bool v) { return Literal::of_bool(v); }

Outcome run(const std::string& e, std::size_t fuel = kDefaultFuel) {
  return eval(erase(ex(e)), fuel);
}

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("primitive table") {
    CHECK(*theta("+", I(2), {I(3)}) == I(5));
    CHECK(*theta("-", I(2), {I(3)}) == I(-1));
    CHECK(*theta("*", I(-4), {I(3)}) == I(-12));
    CHECK(*theta("lt", I(2), {I(3)}) == B(true));
    CHECK(*theta("gt", I(2), {I(3)}) == B(false));
    CHECK(*theta("and", B(true), {B(false)}) == B(false));
    CHECK(*theta("or", B(true), {B(false)}) == B(true));
    CHECK(*theta("not", B(true), {Literal::unit()}) == B(false));
    CHECK(*theta("eq", Literal::unit(), {Literal::unit()}) == B(true));
    CHECK(*theta("concat", S("ab"), {S("c")}) == S("abc"));
    CHECK(*theta("length", S("abc"), {Literal::unit()}) == I(3));
    CHECK(*theta("first", S("abc"), {Literal::unit()}) == S("a"));
    CHECK(*theta("first", S(""), {Literal::unit()}) == S(""));
    CHECK(*theta("eq", S("a"), {S("a")}) == B(true));
    CHECK_FALSE(theta("concat", I(1), {S("a")}).has_value());
    CHECK_FALSE(theta("length", I(1), {Literal::unit()}).has_value());
    CHECK_FALSE(theta("+", I(1), {S("a")}).has_value());
  }

  TEST_CASE("integers wrap at 64 bits") {
    const std::int64_t max = std::numeric_limits<std::int64_t>::max();
    CHECK(*theta("+", I(max), {I(1)}) == I(std::numeric_limits<std::int64_t>::min()));
    for (std::int64_t a : std::vector<std::int64_t>{-7, 0, 3, max - 2, -max}) {
      for (std::int64_t b : std::vector<std::int64_t>{-1, 5, max}) {
        CHECK(*theta("+", I(a), {I(b)}) == I(wrap_add(a, b)));
        CHECK(*theta("eq", I(a), {I(b)}) == B(a == b));
        CHECK(*theta("lt", I(a), {I(b)}) == B(a < b));
      }
    }
  }

  TEST_CASE("string hash and scalar counting") {
    // published FNV-1a 64 test vectors
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    CHECK(*theta("hash", S("a"), {Literal::unit()}) ==
          I(static_cast<std::int64_t>(0xaf63dc4c8601ec8cULL)));
    CHECK(utf8_length("h\xc3\xa9llo") == 5);
    CHECK(utf8_length("\xf0\x9f\x98\x80!") == 2);
    CHECK(utf8_first("\xc3\xa9t\xc3\xa9") == "\xc3\xa9");
  }

  TEST_CASE("invocation and branching") {
    Outcome o = run("new { z : [ id : Int! -> Int! ]! id(x) => x }.id(5)");
    REQUIRE(o.is_value());
    CHECK(o.value->lit == I(5));
    CHECK(o.steps == 1);
    CHECK(run("\"abc\".length()").value->lit == I(3));
    CHECK(run("if 1.lt(2) then \"y\" else \"n\"").value->lit == S("y"));
    CHECK(run("let v = 2.+(3) in v.*(v)").value->lit == I(25));
    CHECK(run("(1 : Int?).+(1)").value->lit == I(2));
  }

  TEST_CASE("login runs") {
    SourceProgram p = corpus_program("login.gobsec");
    auto go = [&](const char* guess, const char* password) {
      ExprPtr body = subst_term(p.body, {{"guess", make_lit(S(guess))}, {"password", make_lit(S(password))}});
      return eval(erase(body)).value->lit.string_value;
    };
    CHECK(go("x", "secret") == "Login failed");
    CHECK(go("secret", "secret") == "Login Successful");
  }

  TEST_CASE("divergence and stuck terms") {
    Outcome t = run("new { z : [ loop : Unit! -> Int! ]! loop(u) => z.loop(u) }.loop()", 100);
    CHECK(t.kind == Outcome::Kind::Timeout);
    CHECK(t.steps == 100);
    Outcome s = run("1.concat(\"a\")");
    CHECK(s.kind == Outcome::Kind::Stuck);
    CHECK(s.reason.find("undefined") != std::string::npos);
    CHECK(run("new { z : Top! }.m()").kind == Outcome::Kind::Stuck);
    CHECK(run("if 1 then 2 else 3").kind == Outcome::Kind::Stuck);
    CHECK(eval(make_var("free")).kind == Outcome::Kind::Stuck);
  }

  TEST_CASE("small steps are deterministic and leftmost") {
    ExprPtr e = erase(ex("1.+(2).*(3.+(4))"));
    StepResult r1 = step(e);
    REQUIRE(r1.kind == StepResult::Kind::Stepped);
    CHECK(pretty_print(r1.next) == "3.*(3.+(4))");
    StepResult r2 = step(r1.next);
    CHECK(pretty_print(r2.next) == "3.*(7)");
    CHECK(step(make_lit(I(1))).kind == StepResult::Kind::Value);
  }

  TEST_CASE("machine agrees with the step relation") {
    Rng rng(99);
    for (int n = 0; n < 300; ++n) {
      GeneratedTerm g = gen_welltyped(rng, 4);
      ExprPtr e = erase(g.term);
      Outcome a = eval(e, 2000);
      Outcome b = eval_by_steps(e, 2000);
      CAPTURE(pretty_print(g.term));
      REQUIRE(a.kind == b.kind);
      CHECK(a.steps == b.steps);
      if (a.is_value()) CHECK(alpha_equal(a.value, b.value));
    }
  }

  TEST_CASE("erasure does not change results") {
    SourceProgram ctx = context("type Id = [ id<X: Int..Top> : Int<X> -> Int<X> ]");
    ExprPtr e = ex("(new { z : Id! id(x) => x }.id<IntEq>((3 : Int!)) : Int?)", ctx);
    Outcome o = eval(erase(e));
    REQUIRE(o.is_value());
    CHECK(o.value->lit == I(3));
    ExprPtr er = erase(e);
    CHECK(er->kind == Expr::Kind::Invoke);
    CHECK(er->type_args.empty());
  }
}
