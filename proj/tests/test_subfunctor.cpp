#include "doctest.h"

#include "gm/error.hpp"
#include "gm/subfunctor.hpp"
#include "oracles.hpp"

using namespace gm;

namespace {

GradeOps writer3() {
  return GradeOps(MonadInstance::writer(Monoid(FinSet{"a", "b", "e"}, "e", {0, 0, 0, 1, 1, 1, 0, 1, 2})));
}

}  // namespace

TEST_CASE("grade counts") {
  CHECK(GradeOps(MonadInstance::writer(Monoid::cyclic(2))).enumerate_grades(100).size() == 4);
  CHECK(writer3().enumerate_grades(100).size() == 8);
  CHECK(GradeOps(MonadInstance::list(4)).enumerate_grades(100).size() == 32);
  CHECK(GradeOps(MonadInstance::state(FinSet{"a", "b"}, GradeKind::state_shapewise)).enumerate_grades(100).size() ==
        16);
  // Up-sets of the partition lattice of three points: 10.
  CHECK(GradeOps(MonadInstance::reader(FinSet{"a", "b", "c"})).enumerate_grades(100).size() == 10);
  // Four shapes, each with an up-set of {discrete < total}: 3^4.
  GradeOps cw(MonadInstance::state(FinSet{"a", "b"}));
  CHECK(cw.enumerate_grades(100).size() == 81);
  CHECK(cw.grade_count() == doctest::Approx(81));
  CHECK_THROWS_AS(cw.enumerate_grades(10), Error);
}

TEST_CASE("grades enumerate size first") {
  auto gs = GradeOps(MonadInstance::list(2)).enumerate_grades(100);
  for (std::size_t i = 1; i < gs.size(); ++i) CHECK(gs[i - 1].atoms.size() <= gs[i].atoms.size());
  CHECK(gs.front().atoms.empty());
}

TEST_CASE("mkS and mkSigma are inverse") {
  for (const auto& ops : {writer3(), GradeOps(MonadInstance::reader(FinSet{"a", "b", "c"})),
                          GradeOps(MonadInstance::state(FinSet{"a", "b"})), GradeOps(MonadInstance::list(3)),
                          GradeOps(MonadInstance::state(FinSet{"a", "b"}, GradeKind::state_shapewise))}) {
    for (const auto& g : ops.enumerate_grades(1000)) {
      auto fam = ops.mkS_family(g);
      CHECK(ops.mkSigma(fam) == g);
      auto again = ops.mkS_family(ops.mkSigma(fam));
      REQUIRE(again.size() == fam.size());
      for (std::size_t i = 0; i < fam.size(); ++i) CHECK(again[i].elements == fam[i].elements);
    }
  }
}

TEST_CASE("mkSigma rejects a family that is not closed under maps") {
  GradeOps ops(MonadInstance::reader(FinSet{"a", "b"}));
  auto fam = ops.mkS_family(ops.full());
  // Drop the constant functions at every probe: the rest is not closed under
  // maps that collapse the probe.
  for (auto& c : fam) {
    std::vector<Computation> keep;
    for (const auto& t : c.elements)
      if (c.probe.size() < 2 || t.cells[0] != t.cells[1]) keep.push_back(t);
    c.elements = keep;
  }
  try {
    ops.mkSigma(fam);
    FAIL("expected not_functorial");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_functorial);
  }
}

TEST_CASE("writer membership is the monoid component") {
  auto ops = writer3();
  auto g = ops.make({0, 2});
  for (const auto& t : ops.monad().enumerate(2)) CHECK(ops.member(g, t, 2) == (t.cells[0] != 1));
}

TEST_CASE("principal grades are least") {
  for (const auto& ops : {writer3(), GradeOps(MonadInstance::state(FinSet{"a", "b"})), GradeOps(MonadInstance::list(3)),
                          GradeOps(MonadInstance::reader(FinSet{"a", "b", "c"}))}) {
    oracle::Components table(ops, ops.enumerate_grades(1000));
    for (std::size_t p = 0; p < table.probes.size(); ++p) {
      const auto n = table.probes[p].size();
      if (n > 2) continue;
      for (const auto& t : ops.monad().enumerate(n)) {
        auto least = table.least_containing(t, p);
        REQUIRE(least.has_value());
        CHECK(ops.principal(t, n) == *least);
      }
    }
  }
}

TEST_CASE("principal of sample elements") {
  auto list = GradeOps(MonadInstance::list(4));
  FinSet abc{"a", "b", "c"};
  CHECK(list.label(list.principal(list.monad().parse("[a,b,c]", abc), 3)) == "{3}");
  auto w = GradeOps(MonadInstance::writer(Monoid::cyclic(2)));
  CHECK(w.label(w.principal(Computation{{0, 0}}, 1)) == "{0}");
}

TEST_CASE("grade JSON round trip") {
  for (const auto& ops : {writer3(), GradeOps(MonadInstance::reader(FinSet{"a", "b"})),
                          GradeOps(MonadInstance::state(FinSet{"a", "b"})), GradeOps(MonadInstance::list(2)),
                          GradeOps(MonadInstance::state(FinSet{"a", "b"}, GradeKind::state_shapewise))})
    for (const auto& g : ops.enumerate_grades(1000)) CHECK(ops.from_json(ops.to_json(g)) == g);
}

TEST_CASE("grade JSON errors") {
  GradeOps ops(MonadInstance::list(2));
  CHECK_THROWS_AS(ops.from_json(nlohmann::json{{"kind", "writer"}, {"elements", {"0"}}}), Error);
  CHECK_THROWS_AS(ops.from_json(nlohmann::json{{"kind", "list"}, {"lengths", {5}}}), Error);
  CHECK_THROWS_AS(ops.from_json(nlohmann::json{{"kind", "list"}}), Error);
}

TEST_CASE("make validates canonicity") {
  GradeOps reader(MonadInstance::reader(FinSet{"a", "b"}));
  const auto& u = reader.universe();
  auto disc = u.relation_index(EquivRel::discrete(FinSet{"a", "b"}));
  // {discrete} alone is not up-closed.
  CHECK_THROWS_AS(reader.make({disc}), Error);
  CHECK_THROWS_AS(GradeOps(MonadInstance::list(2)).make({3}), Error);
}
