#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gm/grade_algebra.hpp"
#include "gm/subfunctor.hpp"

namespace gm {

enum class TensorMethod {
  automatic,  // enumerate when the outer carrier fits the budget, else witness search
  enumerate,  // image of μ over every element of mkS(Σ, mkS(Σ', X))
  witness,    // per generic element, search for an outer element μ sends onto it
};

struct TensorOptions {
  TensorMethod method = TensorMethod::automatic;
  double enumerate_budget = 200000;
};

/// The canonical representation of the image of η (factorized at each probe).
GradeObject unit_grade(const GradeOps& ops);

/// Σ ⊡ Σ' as the image of μ ∘ (s ⊗ s'), read back at the probes. Every witness
/// is checked by running μ. Throws bound_exceeded when a list flattening
/// would pass the bound.
GradeObject tensor_semantic(const GradeOps& ops, const GradeObject& a, const GradeObject& b,
                            const TensorOptions& options = {});

/// Closed forms: writer {z·z'}, list sums, state-shapewise
/// {v ↦ g_v(σ v) | σ ∈ Σ, g_v ∈ Σ'} (Cl read with the witness chosen per
/// initial state). Other kinds throw unsupported_kind.
GradeObject tensor_closed_form(const GradeOps& ops, const GradeObject& a, const GradeObject& b);

/// Cl(Σ') = {h | ∀v ∃g ∈ Σ'. h v = g v} on shapes.
GradeObject shape_closure(const GradeOps& ops, const GradeObject& a);
/// The composition reading {h ∘ σ | σ ∈ Σ, h ∈ Cl(Σ')}, kept as a diagnostic.
GradeObject tensor_literal_composition(const GradeOps& ops, const GradeObject& a, const GradeObject& b);

/// The flavor each instance is declared with (and checked against).
SkewFlavor declared_flavor(GradeKind kind);

struct BuildOptions {
  std::size_t max_grades = 4096;
  TensorOptions tensor;
  bool closed_form_fast_path = true;
};

/// The canonical grading of a monad instance. With a carrier, all tensors are
/// tabulated; a lazy instance computes tensors on demand.
class CanonicalGrading {
 public:
  static CanonicalGrading build(MonadInstance m, const BuildOptions& options = {});
  static CanonicalGrading lazy(MonadInstance m, const BuildOptions& options = {});

  const GradeOps& ops() const noexcept { return ops_; }
  const MonadInstance& monad() const noexcept { return ops_.monad(); }
  const GradeObject& unit() const noexcept { return unit_; }
  SkewFlavor flavor() const noexcept { return flavor_; }

  bool has_carrier() const noexcept { return poset_.has_value(); }
  /// True when the carrier is every canonical grade (not a seed closure).
  bool enumerated() const noexcept { return enumerated_; }
  const std::vector<GradeObject>& grades() const;
  const GradePoset& poset() const;
  std::optional<std::size_t> index_of(const GradeObject& g) const;

  /// Σ ⊡ Σ'; uses the table when both are listed. Throws bound_exceeded.
  GradeObject tensor(const GradeObject& a, const GradeObject& b) const;

 private:
  CanonicalGrading(MonadInstance m, const BuildOptions& options);
  GradeObject compute_tensor(const GradeObject& a, const GradeObject& b) const;

  GradeOps ops_;
  BuildOptions options_;
  GradeObject unit_;
  SkewFlavor flavor_ = SkewFlavor::monoidal;
  bool enumerated_ = false;
  std::vector<GradeObject> grades_;
  std::map<std::vector<std::size_t>, std::size_t> index_;
  std::optional<GradePoset> poset_;
};

/// η_X x, checked to lie in mkS(J, X).
Computation graded_eta(const CanonicalGrading& c, std::size_t x, std::size_t x_size);
/// μ on an element of mkS(Σ, mkS(Σ', X)), checked to lie in mkS(Σ ⊡ Σ', X).
/// inner lists the carrier mkS(Σ', X) (or any subset of it) the outer element indexes.
Computation graded_mu(const CanonicalGrading& c, const GradeObject& a, const GradeObject& b,
                      const Computation& outer, const std::vector<Computation>& inner, std::size_t x_size);

/// A grading by a finite poset of user grade names.
struct UserGrading {
  std::vector<std::string> names;
  std::vector<char> order;           // order[d * n + d'] is d ≤ d'
  std::vector<std::size_t> product;  // product[d * n + d'] is d ⊙ d'
  std::size_t unit = 0;
  SkewFlavor flavor = SkewFlavor::monoidal;
  std::vector<GradeObject> assignment;  // G d
  /// Optional element-level definition of G d, used to cross-check assignment.
  std::function<bool(std::size_t d, const Computation& t, std::size_t x_size)> member;

  std::size_t size() const noexcept { return names.size(); }
  std::optional<std::size_t> find(const std::string& name) const;
};

/// The four-grade grading of state by subsets of {get, put}. Grade indices
/// use bit 0 for get and bit 1 for put. Requires the componentwise instance.
UserGrading getput_grading(const GradeOps& ops);

struct CanonicityResult {
  std::vector<GradeObject> F;  // F d = G d
  std::vector<LawReport> reports;
};

/// The grading morphism into the canonical grading. Throws not_a_grading
/// when the user grading fails its own laws.
CanonicityResult canonicity_morphism(const UserGrading& u, const CanonicalGrading& c);

/// The least user grade d with principal ⊆ G d, if any.
std::optional<std::size_t> least_user_grade(const UserGrading& u, const GradeOps& ops, const GradeObject& g);

}  // namespace gm
