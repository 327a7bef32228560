#include <filesystem>

#include "doctest.h"

#include "gobsec/printer.hpp"
#include "gobsec/type_algebra.hpp"
#include "support.hpp"

using namespace gobsec;
using namespace testing_support;

TEST_SUITE("parser") {
  TEST_CASE("declarations and a method call body") {
    SourceProgram p = parse_program(
        "type StringLen = [ length : Unit! -> Int! ]\nvar x : String<StringLen>\nx.length()");
    REQUIRE(p.vars.size() == 1);
    const SecType* x = p.vars.find("x");
    REQUIRE(x != nullptr);
    CHECK(x->safety->is_prim());
    CHECK(x->decl->is_obj());
    REQUIRE(p.body->kind == Expr::Kind::Invoke);
    CHECK(p.body->name == "length");
    CHECK(p.body->type_args.empty());
    REQUIRE(p.body->children.size() == 2);
    CHECK(p.body->children[1]->kind == Expr::Kind::Lit);
    CHECK(p.body->children[1]->lit.kind == PrimKind::Unit);
  }

  TEST_CASE("facet sugar") {
    SecType bang = st("String!");
    CHECK(alpha_equal(bang.safety, make_prim(PrimKind::String)));
    CHECK(alpha_equal(bang.decl, make_prim(PrimKind::String)));
    SecType q = st("String?");
    CHECK(q.decl->is_top());
    SecType f = st("String<StringLen>");
    CHECK(alpha_equal(f.decl, ty("StringLen")));
  }

  TEST_CASE("recursive alias becomes a self variable") {
    TypePtr l = ty("ListStr<StringLen>");
    REQUIRE(l->is_obj());
    const MethodEntry* tail = l->find_method("tail");
    REQUIRE(tail != nullptr);
    CHECK(tail->sig.ret.safety->is_self_var());
    CHECK(tail->sig.ret.safety->name == l->name);
    const MethodEntry* head = l->find_method("head");
    REQUIRE(head != nullptr);
    CHECK(alpha_equal(head->sig.ret.decl, ty("StringLen")));
  }

  TEST_CASE("type variables and expectations") {
    SourceProgram p = parse_program(
        "expect insecure\ntype A = [ length : Unit! -> Int! ]\ntvar X : String .. A\nvar x : String<X>\nx");
    CHECK(p.expect == Expectation::Insecure);
    REQUIRE(p.tvars.size() == 1);
    CHECK(p.tvars.find("X") != nullptr);
    CHECK(p.vars.find("x")->decl->is_type_var());
  }

  TEST_CASE("primitive signatures in a facet") {
    TypePtr t = ty("StringEqPoly");
    REQUIRE(t->methods.size() == 1);
    CHECK(t->methods[0].sig.is_prim());
    CHECK(t->methods[0].sig.prim_params == std::vector<PrimKind>{PrimKind::String});
    CHECK(t->methods[0].sig.prim_ret == PrimKind::Bool);
  }

  TEST_CASE("expressions") {
    ExprPtr e = ex("let y = 1 in if true then y.+(2) else -3");
    REQUIRE(e->kind == Expr::Kind::Let);
    CHECK(e->children[1]->kind == Expr::Kind::If);
    CHECK(e->children[1]->children[2]->lit.int_value == -3);
    ExprPtr s = ex("\"a\\\"b\\n\"");
    CHECK(s->lit.string_value == "a\"b\n");
    ExprPtr o = ex("new { z : [ m : Int! * Int! -> Int! ]! m(a, b) => a.+(b) }");
    REQUIRE(o->kind == Expr::Kind::Obj);
    CHECK(o->methods[0].params == std::vector<std::string>{"a", "b"});
    ExprPtr asc = ex("(1 : Int?)");
    CHECK(asc->kind == Expr::Kind::Ascribe);
  }

  TEST_CASE("errors carry line and column") {
    try {
      parse_program("var x : Int!\n  x.(");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() >= 3);
    }
    CHECK_THROWS_AS(parse_program("var x : Nope!\nx"), ParseError);
    CHECK_THROWS_AS(parse_program("type L<X> = [ m : Unit! -> L! ]\nvar v : L<Int>!\nunit"), ParseError);
    CHECK_THROWS_AS(parse_program("type A = [ m : Unit! -> Int! ]\ntype A = Top\nunit"), ParseError);
    CHECK_THROWS_AS(parse_program("new { z : Top! m(z) => z }"), ParseError);
  }

  TEST_CASE("round trip over the corpus") {
    std::size_t n = 0;
    for (const auto& f : std::filesystem::directory_iterator(GOBSEC_CORPUS_DIR)) {
      if (f.path().extension() != ".gobsec") continue;
      SourceProgram p = parse_program(read_file(f.path().string()));
      SourceProgram q = parse_program(print_program(p));
      CAPTURE(f.path().filename().string());
      CHECK(alpha_equal(p.body, q.body));
      CHECK(p.expect == q.expect);
      REQUIRE(p.vars.size() == q.vars.size());
      for (std::size_t i = 0; i < p.vars.size(); ++i) {
        CHECK(p.vars.entries()[i].first == q.vars.entries()[i].first);
        CHECK(alpha_equal(p.vars.entries()[i].second, q.vars.entries()[i].second));
      }
      REQUIRE(p.tvars.size() == q.tvars.size());
      ++n;
    }
    CHECK(n >= 14);
  }

  TEST_CASE("desugaring is local") {
    ExprPtr a = ex("(x.length() : Int!)");
    ExprPtr b = ex("(x.length() : Int<Int>)");
    CHECK(alpha_equal(a, b));
    CHECK(alpha_equal(st("StringLen?"), st("StringLen<Top>")));
  }
}
