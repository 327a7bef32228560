#include <algorithm>

#include "doctest.h"

#include "gobsec/subtyping.hpp"
#include "gobsec/type_algebra.hpp"
#include "support.hpp"

using namespace gobsec;
using namespace testing_support;

TEST_SUITE("type_algebra") {
  TEST_CASE("equivalence under renaming of binders") {
    TypePtr a = ty("Obj(a)[ m<X: a..Top> : a! -> a! ]");
    TypePtr b = ty("Obj(b)[ m<X: b..Top> : b! -> b! ]");
    CHECK(type_equiv(a, b));
  }

  TEST_CASE("equivalence through one unfolding") {
    TypePtr a = ty("Obj(a)[ m<X: a..Top> : Top! -> a! ]");
    TypePtr b = ty("Obj(a)[ m<X: a..Top> : Top! -> Obj(b)[ m<Y: b..Top> : Top! -> b! ]! ]");
    CHECK(type_equiv(a, b));
    CHECK(type_equiv(b, a));
  }

  TEST_CASE("distinct types") {
    CHECK_FALSE(type_equiv(make_prim(PrimKind::Int), make_prim(PrimKind::String)));
    CHECK_FALSE(type_equiv(ty("StringLen"), ty("StringFst")));
    CHECK_FALSE(type_equiv(ty("Obj(a)[ m : Unit! -> a! ]"), ty("Obj(a)[ m : Unit! -> a? ]")));
    CHECK(type_equiv(ty("StringEq"), ty("StringEqL")));
  }

  TEST_CASE("upper bounds") {
    CHECK(type_equiv(upper_bound({}, make_prim(PrimKind::String)), make_prim(PrimKind::String)));
    TypeVarEnv d1({{"X", ty("StrFstLen"), ty("StringLen")}});
    CHECK(type_equiv(upper_bound(d1, make_type_var("X")), ty("StringLen")));
    TypeVarEnv d2({{"X", ty("String"), make_type_var("Y")}, {"Y", ty("String"), top_type()}});
    TypePtr ub = upper_bound(d2, make_type_var("X"));
    CHECK(ub->is_top());
    CHECK_FALSE(ub->is_type_var());
    CHECK_THROWS_AS(upper_bound({}, make_type_var("Z")), TypeAlgebraError);
    TypeVarEnv cyc({{"X", top_type(), make_type_var("Y")}, {"Y", top_type(), make_type_var("X")}});
    CHECK_THROWS_AS(upper_bound(cyc, make_type_var("X")), TypeAlgebraError);
  }

  TEST_CASE("method membership") {
    CHECK(has_method({}, ty("StringLen"), "length"));
    CHECK_FALSE(has_method({}, ty("StringLen"), "eq"));
    TypeVarEnv d({{"X", ty("String"), ty("StringEq")}});
    CHECK(has_method(d, make_type_var("X"), "eq"));
    CHECK(has_method({}, make_prim(PrimKind::String), "hash"));
    CHECK_FALSE(has_method({}, make_prim(PrimKind::Int), "length"));
  }

  TEST_CASE("signature lookup") {
    MethodSig len = msig({}, ty("StringLen"), "length");
    REQUIRE_FALSE(len.is_prim());
    REQUIRE(len.params.size() == 1);
    CHECK(sectype_equiv(len.params[0], st("Unit!")));
    CHECK(sectype_equiv(len.ret, st("Int!")));
    MethodSig eq = msig({}, make_prim(PrimKind::String), "eq");
    REQUIRE(eq.is_prim());
    CHECK(eq.prim_params == std::vector<PrimKind>{PrimKind::String});
    CHECK(eq.prim_ret == PrimKind::Bool);
    TypePtr o = ty("SelfRet");
    MethodSig m = msig({}, o, "m");
    CHECK(type_equiv(m.ret.safety, o));
    CHECK(m.ret.decl->is_top());
    CHECK_THROWS_AS(msig({}, ty("StringLen"), "first"), TypeAlgebraError);
  }

  TEST_CASE("interval membership") {
    CHECK(in_interval({}, ty("StringLen"), ty("String"), top_type()));
    CHECK(in_interval({}, ty("StringLen"), ty("StringLen"), ty("StringLen")));
    CHECK_FALSE(in_interval({}, top_type(), ty("String"), ty("StringLen")));
    CHECK(in_interval({}, ty("StrFstLen"), ty("StrFstLen"), ty("StringLen")));
    CHECK_FALSE(in_interval({}, ty("StringEq"), ty("StrFstLen"), ty("StringLen")));
  }

  TEST_CASE("declassification of primitive results") {
    CHECK(type_equiv(rdecl(st("Int!"), PrimKind::Bool), make_prim(PrimKind::Bool)));
    CHECK(rdecl(st("String<StringEq>"), PrimKind::Bool)->is_top());
    CHECK(type_equiv(rdecl(st("Unit!"), PrimKind::Int), make_prim(PrimKind::Int)));
    CHECK(rdecl(std::vector<SecType>{st("Int!"), st("Int?")}, PrimKind::Int)->is_top());
    CHECK(type_equiv(rdecl(std::vector<SecType>{st("Int!"), st("Int!")}, PrimKind::Int),
                     make_prim(PrimKind::Int)));
  }

  TEST_CASE("sound signatures") {
    CHECK(soundsig(ty("StringEqL")->methods[0].sig));
    CHECK_FALSE(soundsig(ty("StringEqBad")->methods[0].sig));
    CHECK(soundsig(ty("[ m : String? -> String? ]")->methods[0].sig));
  }

  TEST_CASE("unfolding") {
    CHECK(unfold(top_type())->is_top());
    CHECK(unfold(make_prim(PrimKind::Int))->is_prim());
    TypePtr o = ty("SelfRet");
    TypePtr u = unfold(o);
    REQUIRE(u->is_obj());
    CHECK(type_equiv(u->methods[0].sig.ret.safety, o));
    CHECK(type_equiv(u, o));
  }

  TEST_CASE("primitive interfaces") {
    for (PrimKind k : {PrimKind::Int, PrimKind::String, PrimKind::Bool, PrimKind::Unit}) {
      for (const auto& m : prim_methods(k)) CHECK(m.sig.is_prim());
    }
    auto names = [](PrimKind k) {
      std::vector<std::string> out;
      for (const auto& m : prim_methods(k)) out.push_back(m.name);
      std::sort(out.begin(), out.end());
      return out;
    };
    CHECK(names(PrimKind::String) == std::vector<std::string>{"concat", "eq", "first", "hash", "length"});
    CHECK(names(PrimKind::Int) == std::vector<std::string>{"*", "+", "-", "eq", "gt", "lt"});
    CHECK(names(PrimKind::Bool) == std::vector<std::string>{"and", "eq", "not", "or"});
    CHECK(names(PrimKind::Unit) == std::vector<std::string>{"eq"});
  }

  TEST_CASE("public security types") {
    CHECK(is_public(st("Int!")));
    CHECK_FALSE(is_public(st("Int?")));
    CHECK(is_public(SecType::faceted(ty("SelfRet"), unfold(ty("SelfRet")))));
  }
}
