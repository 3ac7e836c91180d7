#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gm/law_report.hpp"

namespace gm {

enum class SkewFlavor { left_skew, right_skew, monoidal, left_normal };

std::string_view to_string(SkewFlavor flavor);
SkewFlavor flavor_from_string(std::string_view name);

/// A finite skeletal poset with a unit and a (possibly partial) tensor. In a
/// poset the structural maps of a skew monoidal category are inequalities and
/// the coherence diagrams commute automatically.
struct GradePoset {
  static constexpr long undefined = -1;  // e.g. a list tensor over the bound
  static constexpr long outside = -2;    // result is not a listed grade

  std::vector<std::string> labels;
  std::vector<char> order;   // order[i * n + j] is i ≤ j
  std::vector<long> tensor;  // tensor[i * n + j] is the index of i ⊡ j
  std::size_t unit = 0;
  SkewFlavor flavor = SkewFlavor::monoidal;

  std::size_t size() const noexcept { return labels.size(); }
  bool leq(std::size_t i, std::size_t j) const { return order[i * size() + j] != 0; }
  /// Throws TensorNotClosed for a cell outside the carrier.
  std::optional<std::size_t> tensor_at(std::size_t i, std::size_t j) const;

  /// The one-object poset {J} with J ⊡ J = J.
  static GradePoset singleton(std::string label = "J");
};

/// Partial order, monotonicity of ⊡, the unitor and associator inequalities in
/// the direction of the flavor (equalities when monoidal), and the vacuous
/// coherence equations. Cells where ⊡ is undefined are skipped.
std::vector<LawReport> check_skew_laws(const GradePoset& p, std::optional<SkewFlavor> as = std::nullopt);

/// J ⊡ x = x for every x.
LawReport check_left_normal(const GradePoset& p);

/// Covering pairs (i, j): i < j with nothing strictly between.
std::vector<std::pair<std::size_t, std::size_t>> covering_edges(const GradePoset& p);

}  // namespace gm
