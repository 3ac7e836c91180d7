#include "doctest.h"

#include "gm/error.hpp"
#include "gm/grading.hpp"
#include "oracles.hpp"

using namespace gm;

namespace {

Monoid first_wins() { return Monoid(FinSet{"a", "b", "e"}, "e", {0, 0, 0, 1, 1, 1, 0, 1, 2}); }

std::optional<GradeObject> try_tensor(const std::function<GradeObject()>& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::bound_exceeded) throw;
    return std::nullopt;
  }
}

}  // namespace

TEST_CASE("units") {
  auto w = CanonicalGrading::build(MonadInstance::writer(first_wins()));
  CHECK(w.ops().label(w.unit()) == "{e}");
  auto l = CanonicalGrading::build(MonadInstance::list(3));
  CHECK(l.ops().label(l.unit()) == "{1}");
  auto s = CanonicalGrading::build(MonadInstance::state(FinSet{"a", "b"}, GradeKind::state_shapewise));
  CHECK(s.ops().label(s.unit()) == "{id}");
  auto r = CanonicalGrading::build(MonadInstance::reader(FinSet{"a", "b"}));
  CHECK(r.ops().label(r.unit()) == "{[[a,b]]}");
}

TEST_CASE("semantic tensor agrees with the image oracle") {
  for (const auto& m : {MonadInstance::writer(first_wins()), MonadInstance::list(2),
                        MonadInstance::reader(FinSet{"a", "b"}), MonadInstance::state(FinSet{"a", "b"}),
                        MonadInstance::state(FinSet{"a", "b"}, GradeKind::state_shapewise)}) {
    CAPTURE(m.name());
    GradeOps ops(m);
    auto grades = ops.enumerate_grades(1000);
    std::size_t step = grades.size() > 20 ? 7 : 1;  // sample the larger carriers
    for (std::size_t i = 0; i < grades.size(); i += step)
      for (std::size_t j = 0; j < grades.size(); j += step) {
        const auto& a = grades[i];
        const auto& b = grades[j];
        auto expect = oracle::tensor(ops, grades, a, b);
        auto got = try_tensor([&] { return tensor_semantic(ops, a, b); });
        CAPTURE(ops.label(a));
        CAPTURE(ops.label(b));
        CHECK(got == expect);
      }
  }
}

TEST_CASE("enumeration and witness search agree") {
  for (const auto& m : {MonadInstance::reader(FinSet{"a", "b", "c"}), MonadInstance::state(FinSet{"a", "b"}),
                        MonadInstance::list(3), MonadInstance::writer(Monoid::cyclic(3))}) {
    GradeOps ops(m);
    auto grades = ops.enumerate_grades(1000);
    std::size_t step = grades.size() > 20 ? 5 : 1;
    for (std::size_t i = 0; i < grades.size(); i += step)
      for (std::size_t j = 0; j < grades.size(); j += step) {
        auto e = try_tensor([&] { return tensor_semantic(ops, grades[i], grades[j], {TensorMethod::enumerate}); });
        auto w = try_tensor([&] { return tensor_semantic(ops, grades[i], grades[j], {TensorMethod::witness}); });
        CHECK(e == w);
      }
  }
}

TEST_CASE("writer tensor is the product set") {
  GradeOps ops(MonadInstance::writer(first_wins()));
  for (const auto& a : ops.enumerate_grades(100))
    for (const auto& b : ops.enumerate_grades(100))
      CHECK(tensor_semantic(ops, a, b).atoms == oracle::product_set(ops.monad().monoid(), a.atoms, b.atoms));
}

TEST_CASE("list tensor is the sum set") {
  GradeOps ops(MonadInstance::list(4));
  for (const auto& a : ops.enumerate_grades(100))
    for (const auto& b : ops.enumerate_grades(100)) {
      auto expect = oracle::list_sums(a.atoms, b.atoms, 4);
      auto got = try_tensor([&] { return tensor_semantic(ops, a, b); });
      REQUIRE(got.has_value() == expect.has_value());
      if (got) CHECK(got->atoms == *expect);
    }
  // The empty inner grade still admits the empty outer list.
  CHECK(ops.label(tensor_semantic(ops, ops.make({0}), ops.empty())) == "{0}");
  CHECK(ops.label(tensor_semantic(ops, ops.make({1}), ops.empty())) == "{}");
}

TEST_CASE("shapewise tensor is pointwise and differs from the composition reading") {
  GradeOps ops(MonadInstance::state(FinSet{"a", "b"}, GradeKind::state_shapewise));
  const auto& u = ops.universe();
  for (const auto& a : ops.enumerate_grades(100))
    for (const auto& b : ops.enumerate_grades(100)) {
      CHECK(tensor_closed_form(ops, a, b).atoms == oracle::shape_pointwise(u, a.atoms, b.atoms));
      CHECK(tensor_semantic(ops, a, b) == tensor_closed_form(ops, a, b));
    }
  auto c0 = u.constant_endo(0), id = u.identity_endo();
  std::size_t swap = u.endo_index(Endo{1, 0});
  auto sigma = ops.make({c0}), sigma2 = ops.make({id, swap});
  CHECK(tensor_literal_composition(ops, sigma, sigma2).atoms.size() == 2);
  CHECK(tensor_semantic(ops, sigma, sigma2) == ops.full());
}

TEST_CASE("closed forms are refused where none exists") {
  GradeOps ops(MonadInstance::reader(FinSet{"a", "b"}));
  CHECK_THROWS_AS(tensor_closed_form(ops, ops.full(), ops.full()), Error);
}

TEST_CASE("declared flavors hold on the grade posets") {
  for (const auto& m : {MonadInstance::writer(first_wins()), MonadInstance::list(3),
                        MonadInstance::reader(FinSet{"a", "b", "c"}), MonadInstance::state(FinSet{"a", "b"}),
                        MonadInstance::state(FinSet{"a", "b"}, GradeKind::state_shapewise)}) {
    auto c = CanonicalGrading::build(m);
    CAPTURE(m.name());
    CHECK(c.enumerated());
    CHECK(c.flavor() == declared_flavor(m.grade_kind()));
    CHECK(all_pass(check_skew_laws(c.poset(), c.flavor())));
  }
}

TEST_CASE("the shapewise grading is not left-normal") {
  auto c = CanonicalGrading::build(MonadInstance::state(FinSet{"a", "b"}, GradeKind::state_shapewise));
  auto r = check_left_normal(c.poset());
  CHECK_FALSE(r.pass);
  REQUIRE(r.counterexample.has_value());
  CHECK(r.counterexample->rfind("x={c0,c1}", 0) == 0);
}

TEST_CASE("graded unit and multiplication") {
  auto c = CanonicalGrading::build(MonadInstance::writer(Monoid::cyclic(2)));
  const auto& ops = c.ops();
  CHECK(ops.member(c.unit(), graded_eta(c, 0, 1), 1));
  auto one = ops.make({1});
  auto inner = ops.mkS(one, 1);
  Computation outer{{1, 0}};
  auto t = graded_mu(c, one, one, outer, inner, 1);
  CHECK(t.cells[0] == 0);
  // An outer element outside its claimed grade is a precondition failure.
  CHECK_THROWS_AS(graded_mu(c, ops.make({0}), one, outer, inner, 1), Error);
}

TEST_CASE("lazy gradings compute tensors on demand") {
  auto c = CanonicalGrading::lazy(MonadInstance::state(FinSet{"a", "b", "c"}));
  CHECK_FALSE(c.has_carrier());
  const auto& ops = c.ops();
  CHECK(c.tensor(c.unit(), ops.full()) == ops.full());
}

TEST_CASE("get/put grading reproduces its table") {
  for (const auto& v : {FinSet{"a", "b"}, FinSet{"a", "b", "c"}}) {
    auto c = CanonicalGrading::lazy(MonadInstance::state(v));
    const auto& ops = c.ops();
    const auto& u = ops.universe();
    auto total = u.relation_index(EquivRel::total(v));
    std::vector<std::size_t> f0{u.pair_atom(u.identity_endo(), total)}, fget, fput;
    for (std::size_t r = 0; r < u.relations().size(); ++r) fget.push_back(u.pair_atom(u.identity_endo(), r));
    for (std::size_t p = 0; p < u.endos().size(); ++p) {
      const auto& e = u.endos()[p];
      bool constant = std::all_of(e.begin(), e.end(), [&](std::size_t s) { return s == e[0]; });
      if (constant || p == u.identity_endo()) fput.push_back(u.pair_atom(p, total));
    }
    auto user = getput_grading(ops);
    auto result = canonicity_morphism(user, c);
    CHECK(result.F[0] == ops.make(f0));
    CHECK(result.F[1] == ops.make(fget));
    CHECK(result.F[2] == ops.make(fput));
    CHECK(result.F[3] == ops.full());
    CHECK(all_pass(result.reports));
  }
}

TEST_CASE("a broken user grading is rejected") {
  auto c = CanonicalGrading::build(MonadInstance::state(FinSet{"a", "b"}));
  auto user = getput_grading(c.ops());
  user.assignment[0] = c.ops().empty();  // J is no longer below G(unit)
  try {
    canonicity_morphism(user, c);
    FAIL("expected not_a_grading");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_a_grading);
  }
}
