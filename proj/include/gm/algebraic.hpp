#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gm/grading.hpp"
#include "gm/law_report.hpp"
#include "gm/monad.hpp"
#include "gm/subfunctor.hpp"

namespace gm {

/// φ_X : (T X)^n → T X, given at any set X.
struct AlgebraicOp {
  std::string name;
  std::size_t arity = 0;
  std::function<Computation(const FinSet& x, std::span<const Computation> args)> apply;
};

/// φ_z(z', x) = (z · z', x) for the writer monad.
AlgebraicOp writer_act(const MonadInstance& m, std::size_t z);
/// Binary concatenation; throws bound_exceeded past the list bound.
AlgebraicOp list_concat(const MonadInstance& m);
/// The nullary operation returning the empty list.
AlgebraicOp list_empty();
/// The unary identity operation.
AlgebraicOp identity_op();
/// An operation given by a table from printed argument tuples ("a;b") to a
/// printed result. Undefined inputs throw invalid_argument.
AlgebraicOp custom_op(const MonadInstance& m, std::string name, std::size_t arity,
                      std::map<std::string, std::string> table);

struct AlgebraicCheckOptions {
  std::uint64_t seed = 0;
  double exhaustive_limit = 1e6;
  std::size_t samples = 20000;
};

/// φ_X ∘ (μ_X)^n = μ_X ∘ φ_{TX} on T(T X)^n for X of size 1 and 2. Cases
/// where both sides pass the list bound are skipped.
LawReport check_algebraic(const AlgebraicOp& op, const MonadInstance& m, const AlgebraicCheckOptions& options = {});
/// T f ∘ φ_X = φ_Y ∘ (T f)^n for every f between sets of size ≤ 2.
LawReport check_op_natural(const AlgebraicOp& op, const MonadInstance& m, const AlgebraicCheckOptions& options = {});

/// Throws skew_not_supported for the right-skew state-shapewise grading.
void require_monoidal(const GradeOps& ops);

/// The image of φ restricted to ∏ mkS(R_i), read back as a grade.
GradeObject canonical_output_grade(const GradeOps& ops, const AlgebraicOp& op, const std::vector<GradeObject>& inputs);

/// p : ∏ R_i → R' given at any set X.
struct PMorphism {
  std::vector<GradeObject> inputs;
  GradeObject output;
  std::function<Computation(const FinSet& x, std::span<const Computation> args)> apply;
};

/// ψ_S : ∏ mkS(R_i ⊡ S) → mkS(R' ⊡ S).
struct GradedOp {
  std::vector<GradeObject> inputs;
  GradeObject output;
  std::function<Computation(const GradeObject& s, const FinSet& x, std::span<const Computation> args)> psi;
};

/// The corestriction of φ onto its canonical output grade.
PMorphism canonical_p(const GradeOps& ops, const AlgebraicOp& op, const std::vector<GradeObject>& inputs);
/// Throws square_does_not_commute unless p lands in R' and agrees with φ on
/// every probe.
void check_p_square(const GradeOps& ops, const AlgebraicOp& op, const PMorphism& p);

/// ψ_S as the unique diagonal of the square through ∏ μ and μ ∘ (p S).
GradedOp psi_from_p(const CanonicalGrading& c, const AlgebraicOp& op, const PMorphism& p);
/// p = ψ_J, using R ⊡ J = R.
PMorphism p_from_psi(const CanonicalGrading& c, const GradedOp& psi);
/// ψ_S = φ restricted, for the cross-check against the fill-in route.
GradedOp restrict_op(const CanonicalGrading& c, const AlgebraicOp& op, const std::vector<GradeObject>& inputs,
                     const GradeObject& output);

/// All argument tuples of ∏ mkS(R_i ⊡ S, X).
std::vector<std::vector<Computation>> psi_domain(const CanonicalGrading& c, const GradedOp& psi,
                                                 const GradeObject& s, const FinSet& x);

/// Equal outputs of two graded operations on every S in grades and probe X.
/// Grades S whose tensors pass the list bound are skipped.
LawReport compare_graded(const CanonicalGrading& c, const GradedOp& a, const GradedOp& b,
                         const std::vector<GradeObject>& grades, std::string name);
/// Both p agree on every probe.
LawReport compare_p(const GradeOps& ops, const PMorphism& a, const PMorphism& b, std::string name);

/// ψ grades φ: g ∘ ψ_S = φ ∘ ∏ g and ψ_S lands in R' ⊡ S.
LawReport check_grades_op(const CanonicalGrading& c, const GradedOp& psi, const AlgebraicOp& op,
                          const std::vector<GradeObject>& grades);
/// The graded algebraicity square for all S, S' in grades at X = 1.
LawReport check_graded_algebraic(const CanonicalGrading& c, const GradedOp& psi, const std::vector<GradeObject>& grades,
                                 const AlgebraicCheckOptions& options = {});
/// Each ψ_S is surjective onto mkS(R' ⊡ S, X).
LawReport check_psi_surjective(const CanonicalGrading& c, const GradedOp& psi, const std::vector<GradeObject>& grades);

/// R' ⊆ R'' and (f ⊡ S) ∘ ψ_S = ψ'_S for the inclusion f. Throws
/// not_a_grading when ψ' does not grade φ.
LawReport check_universal(const CanonicalGrading& c, const AlgebraicOp& op, const std::vector<GradeObject>& inputs,
                          const GradedOp& psi_prime, const std::vector<GradeObject>& grades);

}  // namespace gm
