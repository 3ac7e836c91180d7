#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gm {

/// A finite set of string atoms, kept sorted so equal sets compare equal.
class FinSet {
 public:
  FinSet() = default;
  /// Sorts the atoms; throws invalid_argument on duplicates.
  explicit FinSet(std::vector<std::string> elements);
  FinSet(std::initializer_list<std::string> elements)
      : FinSet(std::vector<std::string>(elements)) {}

  /// {prefix0, prefix1, ...}; handy for anonymous probe sets.
  static FinSet numbered(std::string_view prefix, std::size_t n);

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  const std::string& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<std::string>& elements() const noexcept { return elements_; }
  auto begin() const noexcept { return elements_.begin(); }
  auto end() const noexcept { return elements_.end(); }

  std::optional<std::size_t> find(std::string_view atom) const;
  /// Like find, but throws invalid_argument when absent.
  std::size_t index_of(std::string_view atom) const;
  bool contains(std::string_view atom) const { return find(atom).has_value(); }

  std::string to_string() const;

  friend bool operator==(const FinSet&, const FinSet&) = default;
  friend auto operator<=>(const FinSet&, const FinSet&) = default;

 private:
  std::vector<std::string> elements_;
};

/// A total function between finite sets, stored as indices into the codomain.
class FinFn {
 public:
  FinFn() = default;
  FinFn(FinSet dom, FinSet cod, std::vector<std::size_t> map);

  static FinFn identity(const FinSet& x);
  /// The unique map into a one-element set.
  static FinFn to_terminal(const FinSet& x, const FinSet& one);
  /// Builds a function from atom names.
  static FinFn from_pairs(FinSet dom, FinSet cod,
                          const std::vector<std::pair<std::string, std::string>>& pairs);

  const FinSet& dom() const noexcept { return dom_; }
  const FinSet& cod() const noexcept { return cod_; }
  const std::vector<std::size_t>& map() const noexcept { return map_; }
  std::size_t operator()(std::size_t i) const { return map_[i]; }
  const std::string& apply(std::string_view atom) const;

  bool is_injective() const;
  bool is_surjective() const;
  bool is_bijective() const { return is_injective() && is_surjective(); }
  /// Sorted, distinct codomain indices hit by the function.
  std::vector<std::size_t> image_indices() const;

  std::string to_string() const;

  friend bool operator==(const FinFn&, const FinFn&) = default;
  friend auto operator<=>(const FinFn&, const FinFn&) = default;

 private:
  FinSet dom_;
  FinSet cod_;
  std::vector<std::size_t> map_;
};

/// g ∘ f; throws invalid_argument unless cod f == dom g.
FinFn compose(const FinFn& g, const FinFn& f);

/// All functions dom → cod in lexicographic order of their index tables.
std::vector<FinFn> all_functions(const FinSet& dom, const FinSet& cod);

/// Surjection onto the image followed by the inclusion of the image.
struct Factorization {
  FinSet mid;
  FinFn e;
  FinFn m;
};

Factorization factorize_surj_inj(const FinFn& f);

struct Pullback {
  FinSet apex;
  FinFn p1;
  FinFn p2;
};

/// Pullback of f : X → Z and g : Y → Z, with atoms "(x,y)".
Pullback pullback(const FinFn& f, const FinFn& g);

/// True when the commuting square
///   a --top--> b
///   |left      |right
///   c --bottom-> d
/// is a pullback, i.e. a → c ×_d b is a bijection.
bool is_pullback_square(const FinFn& top, const FinFn& left, const FinFn& right,
                        const FinFn& bottom);

/// The unique d with d ∘ e = f and m ∘ d = g for e surjective, m injective.
/// Throws non_commuting_square when m ∘ f != g ∘ e.
FinFn fillin(const FinFn& e, const FinFn& m, const FinFn& f, const FinFn& g);

/// Cartesian product of finite sets; atoms are "<a;b;...>".
struct Product {
  FinSet set;
  std::vector<FinFn> projections;
  std::vector<std::vector<std::size_t>> tuples;  // aligned with set
};

Product product(const std::vector<FinSet>& factors);
/// ∏ f_i between the products of domains and codomains.
FinFn product_map(const std::vector<FinFn>& fns);

/// An equivalence relation on a finite carrier. Blocks are numbered by first
/// occurrence (restricted growth form), which makes the representation canonical.
class EquivRel {
 public:
  EquivRel() = default;
  /// From explicit blocks; throws invalid_argument unless they partition carrier.
  EquivRel(FinSet carrier, const std::vector<std::vector<std::string>>& blocks);
  /// From arbitrary block labels; renumbers them canonically.
  static EquivRel from_labels(FinSet carrier, const std::vector<std::size_t>& labels);
  static EquivRel discrete(const FinSet& carrier);
  static EquivRel total(const FinSet& carrier);

  const FinSet& carrier() const noexcept { return carrier_; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  std::size_t block_count() const noexcept { return blocks_; }
  std::vector<std::vector<std::size_t>> blocks() const;
  bool related(std::size_t a, std::size_t b) const { return labels_[a] == labels_[b]; }
  /// R ⊆ R' as subsets of carrier × carrier.
  bool subset_of(const EquivRel& other) const;

  /// "[[a,b],[c]]"
  std::string to_string() const;

  friend bool operator==(const EquivRel&, const EquivRel&) = default;
  friend auto operator<=>(const EquivRel&, const EquivRel&) = default;

 private:
  FinSet carrier_;
  std::vector<std::size_t> labels_;
  std::size_t blocks_ = 0;
};

EquivRel kernel(const FinFn& f);
bool respects(const FinFn& f, const EquivRel& r);

struct Quotient {
  FinSet set;
  FinFn proj;
};

/// One atom per block, spelled as the block's elements joined by '|'.
Quotient quotient(const FinSet& v, const EquivRel& r);

/// Every equivalence relation on v, sorted.
std::vector<EquivRel> equiv_lattice(const FinSet& v);
/// {R' | R ⊆ R' for some R in rels}, sorted. All relations share one carrier.
std::vector<EquivRel> up_closure(const std::vector<EquivRel>& rels);
bool is_up_closed(const std::vector<EquivRel>& rels);
EquivRel join(const EquivRel& a, const EquivRel& b);

}  // namespace gm
