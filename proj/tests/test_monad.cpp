#include "doctest.h"

#include "gm/error.hpp"
#include "gm/monad.hpp"

using namespace gm;

namespace {

Monoid first_wins() {
  // e is the unit and x·y = x otherwise: associative, not commutative.
  FinSet el{"a", "b", "e"};
  return Monoid(el, "e", {0, 0, 0, 1, 1, 1, 0, 1, 2});
}

}  // namespace

TEST_CASE("monad laws hold on every shipped instance") {
  for (const auto& m : {MonadInstance::writer(Monoid::cyclic(2)), MonadInstance::writer(first_wins()),
                        MonadInstance::reader(FinSet{"a", "b"}), MonadInstance::state(FinSet{"a", "b"}),
                        MonadInstance::list(3)}) {
    CAPTURE(m.name());
    for (const auto& r : m.check_laws()) {
      CAPTURE(r.to_line());
      CHECK(r.pass);
    }
  }
}

TEST_CASE("a non-associative magma is caught") {
  FinSet el{"a", "b", "e"};
  // a·a = b, b·a = e: (a·a)·a = e but a·(a·a) = b
  Monoid bad(el, "e", {1, 1, 0, 2, 0, 1, 0, 1, 2});
  auto reports = MonadInstance::writer(bad).check_laws();
  CHECK_FALSE(all_pass(reports));
  bool found = false;
  for (const auto& r : reports)
    if (r.name == "monoid-associativity") {
      found = true;
      CHECK_FALSE(r.pass);
      CHECK(r.counterexample.has_value());
    }
  CHECK(found);
}

TEST_CASE("enumeration sizes match the counting formulas") {
  CHECK(MonadInstance::writer(Monoid::cyclic(3)).enumerate(2).size() == 6);
  CHECK(MonadInstance::reader(FinSet{"a", "b"}).enumerate(3).size() == 9);
  CHECK(MonadInstance::state(FinSet{"a", "b"}).enumerate(2).size() == 16);
  CHECK(MonadInstance::list(3).enumerate(2).size() == 15);
  auto m = MonadInstance::list(4);
  CHECK(m.count(2) == doctest::Approx(static_cast<double>(m.enumerate(2).size())));
}

TEST_CASE("format and parse round trip") {
  FinSet x{"x", "y"};
  for (const auto& m : {MonadInstance::writer(Monoid::cyclic(2)), MonadInstance::reader(FinSet{"a", "b"}),
                        MonadInstance::state(FinSet{"a", "b"}), MonadInstance::list(2)})
    for (const auto& t : m.enumerate(2)) CHECK(m.parse(m.format(t, x), x) == t);
  auto st = MonadInstance::state(FinSet{"s0", "s1"});
  CHECK(st.format(st.parse("{s0:(s0,x), s1:(s1,y)}", x), x) == "{s0:(s0,x),s1:(s1,y)}");
  CHECK_THROWS_AS(st.parse("{s0:(s0,x)}", x), Error);
  CHECK_THROWS_AS(MonadInstance::list(2).parse("[x,y,x]", x), Error);
}

TEST_CASE("list multiplication respects the bound") {
  auto m = MonadInstance::list(2);
  std::vector<Computation> inner{Computation{{0, 0}}, Computation{{0}}};
  CHECK(m.mu(Computation{{1, 1}}, inner) == Computation{{0, 0}});
  try {
    m.mu(Computation{{0, 1}}, inner);
    FAIL("expected bound_exceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::bound_exceeded);
  }
}

TEST_CASE("state multiplication threads the state") {
  auto m = MonadInstance::state(FinSet{"a", "b"});
  FinSet x{"x"};
  // outer: a ↦ (b, t0), b ↦ (b, t0); t0: a ↦ (a,x), b ↦ (a,x)
  std::vector<Computation> inner{m.parse("{a:(a,x),b:(a,x)}", x)};
  Computation outer{{1, 1, 0, 0}};
  CHECK(m.format(m.mu(outer, inner), x) == "{a:(a,x),b:(a,x)}");
}
