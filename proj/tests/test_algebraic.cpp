#include "doctest.h"

#include "gm/algebraic.hpp"
#include "gm/error.hpp"
#include "gm/shape.hpp"
#include "oracles.hpp"

using namespace gm;

namespace {

Monoid first_wins() { return Monoid(FinSet{"a", "b", "e"}, "e", {0, 0, 0, 1, 1, 1, 0, 1, 2}); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("algebraicity of the shipped operations") {
  for (const auto& mon : {Monoid::cyclic(2), Monoid::cyclic(3), first_wins()}) {
    auto m = MonadInstance::writer(mon);
    for (std::size_t z = 0; z < mon.size(); ++z) {
      CHECK(check_algebraic(writer_act(m, z), m).pass);
      CHECK(check_op_natural(writer_act(m, z), m).pass);
    }
  }
  auto list = MonadInstance::list(3);
  CHECK(check_algebraic(list_concat(list), list).pass);
  CHECK(check_algebraic(list_empty(), list).pass);
  CHECK(check_algebraic(identity_op(), list).pass);
  CHECK(check_op_natural(list_concat(list), list).pass);
}

TEST_CASE("a non-algebraic operation is caught") {
  // Reversal of a list is natural but μ does not distribute over it.
  auto m = MonadInstance::list(3);
  AlgebraicOp rev{"reverse", 1, [](const FinSet&, std::span<const Computation> args) {
                    Computation out = args[0];
                    std::reverse(out.cells.begin(), out.cells.end());
                    return out;
                  }};
  CHECK(check_op_natural(rev, m).pass);
  auto r = check_algebraic(rev, m);
  CHECK_FALSE(r.pass);
  CHECK(r.counterexample.has_value());
}

TEST_CASE("canonical output grade of the writer action") {
  for (const auto& mon : {Monoid::cyclic(2), first_wins()}) {
    GradeOps ops(MonadInstance::writer(mon));
    for (std::size_t z = 0; z < mon.size(); ++z)
      for (const auto& p : ops.enumerate_grades(100))
        CHECK(canonical_output_grade(ops, writer_act(ops.monad(), z), {p}).atoms ==
              oracle::product_set(mon, {z}, p.atoms));
  }
  GradeOps z2(MonadInstance::writer(Monoid::cyclic(2)));
  CHECK(z2.label(canonical_output_grade(z2, writer_act(z2.monad(), 1), {z2.full()})) == "{0,1}");
}

TEST_CASE("canonical output grade of concatenation") {
  GradeOps ops(MonadInstance::list(4));
  auto op = list_concat(ops.monad());
  CHECK(ops.label(canonical_output_grade(ops, op, {ops.make({1}), ops.make({2})})) == "{3}");
  for (const auto& a : ops.enumerate_grades(100))
    for (const auto& b : ops.enumerate_grades(100)) {
      std::set<std::size_t> sums;
      bool over = false;
      for (auto x : a.atoms)
        for (auto y : b.atoms) {
          sums.insert(x + y);
          over = over || x + y > 4;
        }
      if (over) {
        CHECK(code_of([&] { canonical_output_grade(ops, op, {a, b}); }) == ErrorCode::bound_exceeded);
      } else {
        CHECK(canonical_output_grade(ops, op, {a, b}).atoms == std::vector<std::size_t>(sums.begin(), sums.end()));
      }
    }
}

TEST_CASE("a nullary operation lands in the principal grade of its constant") {
  GradeOps ops(MonadInstance::list(3));
  auto out = canonical_output_grade(ops, list_empty(), {});
  CHECK(out == ops.principal(Computation{}, 1));
  CHECK(ops.label(out) == "{0}");
}

TEST_CASE("p and psi correspond") {
  auto c = CanonicalGrading::build(MonadInstance::writer(first_wins()));
  const auto& ops = c.ops();
  for (std::size_t z = 0; z < 3; ++z) {
    auto op = writer_act(c.monad(), z);
    for (const auto& p_grade : c.grades()) {
      auto p = canonical_p(ops, op, {p_grade});
      auto psi = psi_from_p(c, op, p);
      CHECK(compare_p(ops, p, p_from_psi(c, psi), "p-round-trip").pass);
      auto direct = restrict_op(c, op, {p_grade}, p.output);
      CHECK(compare_graded(c, psi_from_p(c, op, p_from_psi(c, direct)), direct, c.grades(), "psi-round-trip").pass);
      CHECK(check_grades_op(c, psi, op, c.grades()).pass);
      CHECK(check_graded_algebraic(c, psi, c.grades()).pass);
      CHECK(check_psi_surjective(c, psi, c.grades()).pass);
      CHECK(check_universal(c, op, {p_grade}, restrict_op(c, op, {p_grade}, ops.full()), c.grades()).pass);
      CHECK(check_universal(c, op, {p_grade}, psi, c.grades()).pass);
    }
  }
}

TEST_CASE("psi for the writer action multiplies on the left") {
  auto c = CanonicalGrading::build(MonadInstance::writer(first_wins()));
  const auto& ops = c.ops();
  auto op = writer_act(c.monad(), 0);  // z = a
  auto psi = psi_from_p(c, op, canonical_p(ops, op, {ops.full()}));
  FinSet x{"x"};
  for (const auto& s : c.grades()) {
    const auto domain = psi_domain(c, psi, s, x);
    for (const auto& args : domain[0]) {
      Computation arg[] = {args};
      CHECK(psi.psi(s, x, arg) == Computation{{c.monad().monoid().multiply(0, args.cells[0]), args.cells[1]}});
    }
  }
}

TEST_CASE("identity operation grades itself") {
  auto c = CanonicalGrading::build(MonadInstance::list(3));
  const auto& ops = c.ops();
  auto op = identity_op();
  for (const auto& r : c.grades()) {
    auto p = canonical_p(ops, op, {r});
    CHECK(p.output == r);
    auto psi = psi_from_p(c, op, p);
    CHECK(compare_graded(c, psi, restrict_op(c, op, {r}, r), c.grades(), "identity").pass);
  }
}

TEST_CASE("a p outside its square is refused") {
  GradeOps ops(MonadInstance::writer(Monoid::cyclic(2)));
  auto op = writer_act(ops.monad(), 1);
  PMorphism wrong{{ops.make({0})}, ops.make({0}), identity_op().apply};
  CHECK(code_of([&] { check_p_square(ops, op, wrong); }) == ErrorCode::square_does_not_commute);
}

TEST_CASE("an alternative output grade must grade the operation") {
  auto c = CanonicalGrading::build(MonadInstance::writer(Monoid::cyclic(2)));
  const auto& ops = c.ops();
  auto op = writer_act(c.monad(), 1);
  auto bad = restrict_op(c, op, {ops.make({0})}, ops.make({0}));  // the image is {1}
  CHECK(code_of([&] { check_universal(c, op, {ops.make({0})}, bad, c.grades()); }) == ErrorCode::not_a_grading);
}

TEST_CASE("minimality over every valid output grade") {
  auto c = CanonicalGrading::build(MonadInstance::list(3));
  const auto& ops = c.ops();
  auto op = list_concat(c.monad());
  auto ins = std::vector<GradeObject>{ops.make({0, 1}), ops.make({1})};
  auto canonical = canonical_output_grade(ops, op, ins);
  for (const auto& r2 : c.grades()) {
    bool grades_op = check_grades_op(c, restrict_op(c, op, ins, r2), op, {c.unit()}).pass;
    CHECK(grades_op == ops.leq(canonical, r2));
  }
}

TEST_CASE("the skew state grading is refused") {
  auto c = CanonicalGrading::build(MonadInstance::state(FinSet{"a", "b"}, GradeKind::state_shapewise));
  const auto& ops = c.ops();
  CHECK(code_of([&] { canonical_output_grade(ops, identity_op(), {ops.full()}); }) == ErrorCode::skew_not_supported);
  CHECK(code_of([&] { restrict_op(c, identity_op(), {ops.full()}, ops.full()); }) == ErrorCode::skew_not_supported);
}

TEST_CASE("products of subfunctors compose pointwise") {
  // (R1 × R2)(S X) = R1(S X) × R2(S X): the comparison map is the identity
  // on carriers, hence a bijection.
  GradeOps ops(MonadInstance::list(2));
  auto s = grade_functor(ops, ops.make({1, 2}));
  auto r1 = grade_functor(ops, ops.make({0, 1}));
  auto r2 = grade_functor(ops, ops.make({2}));
  for (std::size_t n = 0; n <= 2; ++n) {
    FinSet x = FinSet::numbered("x", n);
    auto sx = s->obj(x);
    auto lhs = product({composite_functor(r1, s)->obj(x), composite_functor(r2, s)->obj(x)});
    auto rhs = product({r1->obj(sx), r2->obj(sx)});
    CHECK(lhs.set == rhs.set);
  }
}
