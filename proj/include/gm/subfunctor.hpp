#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gm/finset.hpp"
#include "gm/monad.hpp"

namespace gm {

/// A function V → V stored as its index table.
using Endo = std::vector<std::size_t>;

/// The atoms a grade of a given kind is built from:
///   writer             elements of M
///   reader             equivalence relations on V
///   state-componentwise pairs (p, R), atom index = p * |Equiv V| + R
///   state-shapewise    functions p : V → V
///   list               lengths 0..N
class GradeUniverse {
 public:
  explicit GradeUniverse(const MonadInstance& m);

  GradeKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return size_; }

  const std::vector<EquivRel>& relations() const noexcept { return relations_; }
  const std::vector<Endo>& endos() const noexcept { return endos_; }
  std::size_t endo_index(const Endo& p) const;
  std::size_t relation_index(const EquivRel& r) const;
  std::size_t pair_atom(std::size_t p, std::size_t r) const { return p * relations_.size() + r; }
  std::size_t pair_endo(std::size_t atom) const { return atom / relations_.size(); }
  std::size_t pair_relation(std::size_t atom) const { return atom % relations_.size(); }

  std::size_t identity_endo() const { return identity_; }
  /// Index of the constant function onto state v.
  std::size_t constant_endo(std::size_t v) const;

  /// "id", "c<i>" for the constant at state i, otherwise "[v0',v1',...]".
  std::string endo_label(std::size_t p) const;
  std::string atom_label(std::size_t atom) const;

 private:
  GradeKind kind_;
  FinSet states_;
  FinSet monoid_;
  std::size_t size_ = 0;
  std::size_t identity_ = 0;
  std::vector<EquivRel> relations_;
  std::vector<Endo> endos_;
  std::vector<std::vector<std::size_t>> up_;  // up_[r] = relations containing r
  friend class GradeOps;
};

/// Canonical representation of a subfunctor of T: a sorted set of atoms.
/// Reader grades are up-closed in the relation order; state-componentwise
/// grades are up-closed in the relation coordinate for each shape.
struct GradeObject {
  GradeKind kind = GradeKind::writer;
  std::vector<std::size_t> atoms;

  friend bool operator==(const GradeObject&, const GradeObject&) = default;
};

/// Orders grades by size first and then lexicographically, which is a linear
/// extension of inclusion.
bool grade_order(const GradeObject& a, const GradeObject& b);

/// A computation t ∈ T X together with its probe set.
struct Element {
  FinSet probe;
  Computation value;
};

/// The per-probe components of a candidate subfunctor of T.
struct ProbeComponent {
  FinSet probe;
  std::vector<Computation> elements;  // sorted
};
using ProbeFamily = std::vector<ProbeComponent>;

/// Everything that needs both a monad instance and its grade universe.
class GradeOps {
 public:
  explicit GradeOps(MonadInstance m);

  const MonadInstance& monad() const noexcept { return monad_; }
  const GradeUniverse& universe() const noexcept { return universe_; }
  GradeKind kind() const noexcept { return universe_.kind(); }

  /// Builds a grade from atoms, sorting them; throws invalid_argument unless
  /// the result is canonical (in range and up-closed where required).
  GradeObject make(std::vector<std::size_t> atoms) const;
  bool is_canonical(const GradeObject& g) const;
  GradeObject empty() const { return {kind(), {}}; }
  GradeObject full() const;

  bool leq(const GradeObject& a, const GradeObject& b) const;
  GradeObject meet(const GradeObject& a, const GradeObject& b) const;

  /// The standard probe sets for this kind.
  std::vector<FinSet> probes() const;
  /// The probes a grade is read back from (a subset of probes()).
  std::vector<FinSet> readback_probes() const;

  /// t ∈ mkS(Σ, X) by the pointwise characterization of each kind.
  bool member(const GradeObject& g, const Computation& t, std::size_t x_size) const;
  bool member(const GradeObject& g, const Element& e) const { return member(g, e.value, e.probe.size()); }
  /// The X-component of the subfunctor denoted by Σ, sorted.
  std::vector<Computation> mkS(const GradeObject& g, std::size_t x_size) const;
  ProbeFamily mkS_family(const GradeObject& g) const;

  /// Reads a grade back from a membership predicate on the readback probes.
  /// The predicate receives the probe and the generic element for one atom.
  GradeObject read_grade(const std::function<bool(const FinSet&, const Computation&)>& contains) const;
  /// The element whose presence at its probe decides membership of an atom,
  /// together with that probe.
  Element generic_element(std::size_t atom) const;

  /// Inverse of mkS. Validates closure under T f for every function between
  /// probes, and that the family is the restriction of a canonical grade.
  GradeObject mkSigma(const ProbeFamily& family) const;

  /// The least canonical grade containing t.
  GradeObject principal(const Computation& t, std::size_t x_size) const;
  GradeObject principal(const Element& e) const { return principal(e.value, e.probe.size()); }

  /// Number of canonical grades (floating, may be huge).
  double grade_count() const;
  /// All canonical grades in grade_order; throws bound_exceeded above limit.
  std::vector<GradeObject> enumerate_grades(std::size_t limit) const;

  std::string label(const GradeObject& g) const;
  nlohmann::json to_json(const GradeObject& g) const;
  GradeObject from_json(const nlohmann::json& j) const;

  /// Atom lookups used by tests and the CLI.
  Endo endo_of(const Computation& t) const;  // π1 ∘ f for state
  std::size_t shape_atom(const Computation& t) const;

 private:
  void check_kind(const GradeObject& g) const;
  std::vector<std::size_t> up_close(std::vector<std::size_t> atoms) const;

  MonadInstance monad_;
  GradeUniverse universe_;
};

}  // namespace gm
