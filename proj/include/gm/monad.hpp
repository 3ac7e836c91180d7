#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gm/finset.hpp"
#include "gm/law_report.hpp"

namespace gm {

enum class MonadKind { writer, reader, state, list };

/// Which canonical grading a monad instance is studied under.
enum class GradeKind { writer, reader, state_componentwise, state_shapewise, list };

std::string_view to_string(MonadKind kind);
std::string_view to_string(GradeKind kind);

/// An element of T X, stored as indices into the carrier X (and into the
/// monoid or the state set where the functor needs them).
///
/// Layout per monad:
///   writer  [z, x]
///   reader  [f(v_0), ..., f(v_{n-1})]
///   state   [next(v_0), ..., next(v_{n-1}), out(v_0), ..., out(v_{n-1})]
///   list    [x_0, ..., x_{k-1}]
struct Computation {
  std::vector<std::size_t> cells;

  friend bool operator==(const Computation&, const Computation&) = default;
  friend auto operator<=>(const Computation&, const Computation&) = default;
};

/// A finite monoid given by its multiplication table. Associativity and the
/// unit laws are not enforced here; check_laws reports them.
class Monoid {
 public:
  Monoid() = default;
  /// table[a * n + b] = a · b, indices into elements.
  Monoid(FinSet elements, std::string_view unit, std::vector<std::size_t> table);
  /// Z_n written additively with atoms "0".."n-1".
  static Monoid cyclic(std::size_t n);

  const FinSet& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  std::size_t unit() const noexcept { return unit_; }
  std::size_t multiply(std::size_t a, std::size_t b) const { return table_[a * size() + b]; }

  std::vector<LawReport> check_laws() const;

 private:
  FinSet elements_;
  std::size_t unit_ = 0;
  std::vector<std::size_t> table_;
};

/// A set whose atoms are computations over some inner set, with the
/// computations kept alongside their printed atoms.
struct Carrier {
  FinSet atoms;
  std::vector<Computation> elements;  // elements[i] is printed as atoms[i]
};

struct MonadLawOptions {
  std::uint64_t seed = 0;
  /// Above this many T(T(T X)) elements the associativity law is sampled.
  double exhaustive_limit = 200000;
  std::size_t samples = 20000;
};

/// A finite presentation of one of the supported monads on Set: writer over a
/// finite monoid, reader and state over a finite state set, and lists
/// truncated at a length bound.
class MonadInstance {
 public:
  static MonadInstance writer(Monoid monoid);
  static MonadInstance reader(FinSet states);
  static MonadInstance state(FinSet states, GradeKind grading = GradeKind::state_componentwise);
  static MonadInstance list(std::size_t bound);

  MonadKind kind() const noexcept { return kind_; }
  GradeKind grade_kind() const noexcept { return grade_kind_; }
  const Monoid& monoid() const noexcept { return monoid_; }
  const FinSet& states() const noexcept { return states_; }
  std::size_t bound() const noexcept { return bound_; }
  std::string name() const;

  /// All of T X for |X| = x_size, sorted.
  std::vector<Computation> enumerate(std::size_t x_size) const;
  /// |T X| as a floating estimate (saturates instead of overflowing).
  double count(std::size_t x_size) const;
  bool well_typed(const Computation& t, std::size_t x_size) const;
  Computation random(std::size_t x_size, std::mt19937_64& rng) const;

  Computation eta(std::size_t x) const;
  /// μ for an outer computation over a carrier whose i-th atom is inner[i].
  /// Throws bound_exceeded for lists longer than the bound.
  Computation mu(const Computation& outer, std::span<const Computation> inner) const;
  /// T f, with f given by its index table.
  Computation fmap(std::span<const std::size_t> f, const Computation& t) const;
  Computation fmap(const FinFn& f, const Computation& t) const { return fmap(f.map(), t); }

  /// π1 ∘ f for state, the length for lists: the component at 1 up to iso.
  std::vector<std::size_t> next_states(const Computation& t) const;
  std::vector<std::size_t> outputs(const Computation& t) const;

  std::string format(const Computation& t, const FinSet& x) const;
  Computation parse(std::string_view text, const FinSet& x) const;

  /// Prints and sorts the given elements of T X into a carrier.
  Carrier carrier(const FinSet& x, std::vector<Computation> elements) const;
  Carrier full_carrier(const FinSet& x) const { return carrier(x, enumerate(x.size())); }

  /// Unit, multiplication and (for writer) monoid laws, element-wise.
  std::vector<LawReport> check_laws(const MonadLawOptions& options = {}) const;

 private:
  MonadKind kind_ = MonadKind::writer;
  GradeKind grade_kind_ = GradeKind::writer;
  Monoid monoid_;
  FinSet states_;
  std::size_t bound_ = 0;
};

/// Splits "a,(b,c),[d]" at top-level commas. Brackets (), [], {} nest.
/// Parts are trimmed of surrounding whitespace.
std::vector<std::string> split_top_level(std::string_view text, char sep);

}  // namespace gm
