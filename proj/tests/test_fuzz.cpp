#include "doctest.h"

#include "gobsec/fuzz.hpp"
#include "gobsec/printer.hpp"
#include "gobsec/typecheck.hpp"
#include "gobsec/wellformed.hpp"

using namespace gobsec;

TEST_SUITE("fuzz") {
  TEST_CASE("generated terms are closed and well typed") {
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
      GeneratedTerm g = gen_welltyped(rng);
      CAPTURE(pretty_print(g.term));
      CHECK(wf_sectype({}, g.type));
      CHECK(sec_check({}, {}, g.term, g.type).ok);
      CHECK(simple_check({}, g.term, g.type.safety));
      CHECK(g.tries >= 1);
    }
  }

  TEST_CASE("well-typed terms do not get stuck") {
    FuzzReport r = fuzz_safety(2024, 1000);
    CHECK(r.terms == 1000);
    CHECK(r.stuck == 0);
    CHECK(r.simple_failures == 0);
    CHECK(r.values + r.timeouts == r.terms);
    CHECK(r.values > 500);
  }

  TEST_CASE("reports do not depend on scheduling") {
    FuzzReport a = fuzz_safety(5, 300, 2000, true);
    FuzzReport b = fuzz_safety(5, 300, 2000, false);
    CHECK(a.values == b.values);
    CHECK(a.timeouts == b.timeouts);
    CHECK(a.rejected == b.rejected);
  }
}
