#include "gm/grade_algebra.hpp"

#include "gm/error.hpp"

namespace gm {

std::string_view to_string(SkewFlavor flavor) {
  switch (flavor) {
    case SkewFlavor::left_skew: return "left-skew";
    case SkewFlavor::right_skew: return "right-skew";
    case SkewFlavor::monoidal: return "monoidal";
    case SkewFlavor::left_normal: return "left-normal";
  }
  return "?";
}

SkewFlavor flavor_from_string(std::string_view name) {
  for (auto f : {SkewFlavor::left_skew, SkewFlavor::right_skew, SkewFlavor::monoidal, SkewFlavor::left_normal})
    if (to_string(f) == name) return f;
  throw Error(ErrorCode::parse_error, "unknown flavor '" + std::string(name) + "'");
}

std::optional<std::size_t> GradePoset::tensor_at(std::size_t i, std::size_t j) const {
  const long c = tensor[i * size() + j];
  if (c == outside)
    throw Error(ErrorCode::tensor_not_closed, labels[i] + " ⊡ " + labels[j] + " is not a listed grade");
  if (c == undefined) return std::nullopt;
  return static_cast<std::size_t>(c);
}

GradePoset GradePoset::singleton(std::string label) {
  GradePoset p;
  p.labels = {std::move(label)};
  p.order = {1};
  p.tensor = {0};
  p.unit = 0;
  return p;
}

std::vector<LawReport> check_skew_laws(const GradePoset& p, std::optional<SkewFlavor> as) {
  const SkewFlavor flavor = as.value_or(p.flavor);
  const std::size_t n = p.size();
  const auto& L = p.labels;
  if (p.order.size() != n * n || p.tensor.size() != n * n || p.unit >= n)
    throw Error(ErrorCode::invalid_argument, "grade poset tables have the wrong size");
  // Touch every cell first so a non-closed tensor is reported as an error.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p.tensor_at(i, j);

  LawCheck order("partial-order");
  for (std::size_t i = 0; i < n; ++i) {
    if (!p.leq(i, i)) order.fail("x=" + L[i] + " not reflexive");
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && p.leq(i, j) && p.leq(j, i)) order.fail("x=" + L[i] + ",y=" + L[j] + " not antisymmetric");
      if (!p.leq(i, j)) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (p.leq(j, k) && !p.leq(i, k)) order.fail("x=" + L[i] + ",y=" + L[j] + ",z=" + L[k] + " not transitive");
    }
  }

  LawCheck mono_left("tensor-monotone-left");
  LawCheck mono_right("tensor-monotone-right");
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t x2 = 0; x2 < n; ++x2) {
      if (x == x2 || !p.leq(x, x2)) continue;
      for (std::size_t y = 0; y < n; ++y) {
        auto a = p.tensor_at(x, y), b = p.tensor_at(x2, y);
        if (a && b && !p.leq(*a, *b)) mono_left.fail("x=" + L[x] + ",x'=" + L[x2] + ",y=" + L[y]);
        auto c = p.tensor_at(y, x), d = p.tensor_at(y, x2);
        if (c && d && !p.leq(*c, *d)) mono_right.fail("y=" + L[y] + ",x=" + L[x] + ",x'=" + L[x2]);
      }
    }

  // holds(a, b) checks the structural map a → b, or both directions when monoidal.
  const bool reversed = flavor == SkewFlavor::right_skew;
  auto holds = [&](std::size_t a, std::size_t b, bool strict_eq) {
    if (strict_eq) return a == b;
    return reversed ? p.leq(b, a) : p.leq(a, b);
  };
  const bool eq_all = flavor == SkewFlavor::monoidal;
  const bool eq_left = eq_all || flavor == SkewFlavor::left_normal;

  LawCheck left_unitor("left-unitor");    // J ⊡ x ≤ x
  LawCheck right_unitor("right-unitor");  // x ≤ x ⊡ J
  for (std::size_t x = 0; x < n; ++x) {
    if (auto jx = p.tensor_at(p.unit, x); jx && !holds(*jx, x, eq_left))
      left_unitor.fail("x=" + L[x] + " J⊡x=" + L[*jx]);
    if (auto xj = p.tensor_at(x, p.unit); xj && !holds(x, *xj, eq_all))
      right_unitor.fail("x=" + L[x] + " x⊡J=" + L[*xj]);
  }

  LawCheck assoc("associator");  // (x ⊡ y) ⊡ z ≤ x ⊡ (y ⊡ z)
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      auto xy = p.tensor_at(x, y);
      if (!xy) continue;
      for (std::size_t z = 0; z < n; ++z) {
        auto yz = p.tensor_at(y, z);
        if (!yz) continue;
        auto lhs = p.tensor_at(*xy, z), rhs = p.tensor_at(x, *yz);
        if (lhs && rhs && !holds(*lhs, *rhs, eq_all))
          assoc.fail("x=" + L[x] + ",y=" + L[y] + ",z=" + L[z]);
      }
    }

  std::vector<LawReport> out{order.report(),        mono_left.report(), mono_right.report(),
                             left_unitor.report(),  right_unitor.report(), assoc.report()};
  // Hom-sets of a poset have at most one element, so (m1)-(m5) hold.
  for (int i = 1; i <= 5; ++i) out.push_back(LawReport::ok("coherence-m" + std::to_string(i)));
  return out;
}

LawReport check_left_normal(const GradePoset& p) {
  LawCheck check("left-normal");
  for (std::size_t x = 0; x < p.size(); ++x)
    if (auto jx = p.tensor_at(p.unit, x); jx && *jx != x)
      check.fail("x=" + p.labels[x] + " J⊡x=" + p.labels[*jx]);
  return check.report();
}

std::vector<std::pair<std::size_t, std::size_t>> covering_edges(const GradePoset& p) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !p.leq(i, j)) continue;
      bool covers = true;
      for (std::size_t k = 0; k < n && covers; ++k)
        if (k != i && k != j && p.leq(i, k) && p.leq(k, j)) covers = false;
      if (covers) edges.emplace_back(i, j);
    }
  return edges;
}

}  // namespace gm
