#include "gm/finset.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "gm/error.hpp"

namespace gm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::non_commuting_square: return "NonCommutingSquare";
    case ErrorCode::tensor_not_closed: return "TensorNotClosed";
    case ErrorCode::kind_mismatch: return "KindMismatch";
    case ErrorCode::not_functorial: return "NotFunctorial";
    case ErrorCode::bound_exceeded: return "BoundExceeded";
    case ErrorCode::unsupported_kind: return "UnsupportedKind";
    case ErrorCode::grade_violation: return "GradeViolation";
    case ErrorCode::not_a_grading: return "NotAGrading";
    case ErrorCode::precondition_failed: return "PreconditionFailed";
    case ErrorCode::square_does_not_commute: return "SquareDoesNotCommute";
    case ErrorCode::skew_not_supported: return "SkewNotSupported";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- FinSet

FinSet::FinSet(std::vector<std::string> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
    throw Error(ErrorCode::invalid_argument, "duplicate atom in finite set");
}

FinSet FinSet::numbered(std::string_view prefix, std::size_t n) {
  std::vector<std::string> atoms;
  atoms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(std::string(prefix) + std::to_string(i));
  return FinSet(std::move(atoms));
}

std::optional<std::size_t> FinSet::find(std::string_view atom) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), atom,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == elements_.end() || *it != atom) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

std::size_t FinSet::index_of(std::string_view atom) const {
  if (auto i = find(atom)) return *i;
  throw Error(ErrorCode::invalid_argument, "atom '" + std::string(atom) + "' not in set");
}

std::string FinSet::to_string() const { return "{" + join(elements_, ",") + "}"; }

// ---------------------------------------------------------------- FinFn

FinFn::FinFn(FinSet dom, FinSet cod, std::vector<std::size_t> map)
    : dom_(std::move(dom)), cod_(std::move(cod)), map_(std::move(map)) {
  if (map_.size() != dom_.size())
    throw Error(ErrorCode::invalid_argument, "function table is not total on its domain");
  for (auto y : map_)
    if (y >= cod_.size()) throw Error(ErrorCode::invalid_argument, "function value outside codomain");
}

FinFn FinFn::identity(const FinSet& x) {
  std::vector<std::size_t> map(x.size());
  std::iota(map.begin(), map.end(), 0);
  return FinFn(x, x, std::move(map));
}

FinFn FinFn::to_terminal(const FinSet& x, const FinSet& one) {
  if (one.size() != 1) throw Error(ErrorCode::invalid_argument, "terminal set must have one atom");
  return FinFn(x, one, std::vector<std::size_t>(x.size(), 0));
}

FinFn FinFn::from_pairs(FinSet dom, FinSet cod,
                        const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::size_t> map(dom.size(), 0);
  std::vector<bool> seen(dom.size(), false);
  for (const auto& [a, b] : pairs) {
    auto i = dom.index_of(a);
    map[i] = cod.index_of(b);
    seen[i] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw Error(ErrorCode::invalid_argument, "function is not total");
  return FinFn(std::move(dom), std::move(cod), std::move(map));
}

const std::string& FinFn::apply(std::string_view atom) const { return cod_[map_[dom_.index_of(atom)]]; }

bool FinFn::is_injective() const {
  std::vector<bool> hit(cod_.size(), false);
  for (auto y : map_) {
    if (hit[y]) return false;
    hit[y] = true;
  }
  return true;
}

bool FinFn::is_surjective() const { return image_indices().size() == cod_.size(); }

std::vector<std::size_t> FinFn::image_indices() const {
  std::vector<std::size_t> img = map_;
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  return img;
}

std::string FinFn::to_string() const {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < dom_.size(); ++i) parts.push_back(dom_[i] + ":" + cod_[map_[i]]);
  return "{" + join(parts, ",") + "}";
}

FinFn compose(const FinFn& g, const FinFn& f) {
  if (f.cod() != g.dom()) throw Error(ErrorCode::invalid_argument, "compose: codomain/domain mismatch");
  std::vector<std::size_t> map(f.dom().size());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = g(f(i));
  return FinFn(f.dom(), g.cod(), std::move(map));
}

std::vector<FinFn> all_functions(const FinSet& dom, const FinSet& cod) {
  std::vector<FinFn> out;
  if (cod.empty() && !dom.empty()) return out;
  std::vector<std::size_t> map(dom.size(), 0);
  while (true) {
    out.emplace_back(dom, cod, map);
    std::size_t i = map.size();
    while (i > 0) {
      --i;
      if (++map[i] < cod.size()) break;
      map[i] = 0;
      if (i == 0) return out;
    }
    if (map.empty()) return out;
  }
}

// ---------------------------------------------------------------- factorization

Factorization factorize_surj_inj(const FinFn& f) {
  auto img = f.image_indices();
  std::vector<std::string> atoms;
  atoms.reserve(img.size());
  for (auto y : img) atoms.push_back(f.cod()[y]);
  FinSet mid(std::move(atoms));

  // img is sorted by codomain index and the codomain is sorted, so the image
  // keeps its order inside mid.
  std::vector<std::size_t> e_map(f.dom().size());
  for (std::size_t i = 0; i < e_map.size(); ++i)
    e_map[i] = static_cast<std::size_t>(std::lower_bound(img.begin(), img.end(), f(i)) - img.begin());
  FinFn e(f.dom(), mid, std::move(e_map));
  FinFn m(mid, f.cod(), img);
  return {std::move(mid), std::move(e), std::move(m)};
}

Pullback pullback(const FinFn& f, const FinFn& g) {
  if (f.cod() != g.cod()) throw Error(ErrorCode::invalid_argument, "pullback: cospan codomains differ");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::string> atoms;
  for (std::size_t x = 0; x < f.dom().size(); ++x)
    for (std::size_t y = 0; y < g.dom().size(); ++y)
      if (f(x) == g(y)) {
        pairs.emplace_back(x, y);
        atoms.push_back("(" + f.dom()[x] + "," + g.dom()[y] + ")");
      }
  FinSet apex(atoms);
  std::vector<std::size_t> m1(apex.size()), m2(apex.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto idx = apex.index_of(atoms[k]);
    m1[idx] = pairs[k].first;
    m2[idx] = pairs[k].second;
  }
  FinFn p1(apex, f.dom(), std::move(m1));
  FinFn p2(apex, g.dom(), std::move(m2));
  return {std::move(apex), std::move(p1), std::move(p2)};
}

bool is_pullback_square(const FinFn& top, const FinFn& left, const FinFn& right,
                        const FinFn& bottom) {
  if (top.dom() != left.dom() || top.cod() != right.dom() || left.cod() != bottom.dom() ||
      right.cod() != bottom.cod())
    throw Error(ErrorCode::invalid_argument, "is_pullback_square: ill-shaped square");
  for (std::size_t a = 0; a < top.dom().size(); ++a)
    if (right(top(a)) != bottom(left(a))) return false;
  // a ↦ (left a, top a) must hit each matching pair exactly once.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> hits;
  for (std::size_t a = 0; a < top.dom().size(); ++a) {
    if (++hits[{left(a), top(a)}] > 1) return false;
  }
  std::size_t matching = 0;
  for (std::size_t c = 0; c < left.cod().size(); ++c)
    for (std::size_t b = 0; b < top.cod().size(); ++b)
      if (bottom(c) == right(b)) ++matching;
  return matching == hits.size();
}

FinFn fillin(const FinFn& e, const FinFn& m, const FinFn& f, const FinFn& g) {
  if (e.dom() != f.dom() || e.cod() != g.dom() || f.cod() != m.dom() || m.cod() != g.cod())
    throw Error(ErrorCode::invalid_argument, "fillin: ill-shaped square");
  if (!e.is_surjective()) throw Error(ErrorCode::invalid_argument, "fillin: e is not surjective");
  if (!m.is_injective()) throw Error(ErrorCode::invalid_argument, "fillin: m is not injective");
  for (std::size_t a = 0; a < e.dom().size(); ++a)
    if (m(f(a)) != g(e(a)))
      throw Error(ErrorCode::non_commuting_square,
                  "m(f(" + e.dom()[a] + ")) != g(e(" + e.dom()[a] + "))");
  // e is surjective, so every b has a preimage; commutativity plus injectivity of m
  // make the choice irrelevant.
  std::vector<std::size_t> d(e.cod().size(), 0);
  for (std::size_t a = 0; a < e.dom().size(); ++a) d[e(a)] = f(a);
  return FinFn(e.cod(), f.cod(), std::move(d));
}

// ---------------------------------------------------------------- products

namespace {

std::vector<std::vector<std::size_t>> index_tuples(const std::vector<std::size_t>& sizes) {
  std::vector<std::vector<std::size_t>> out;
  for (auto s : sizes)
    if (s == 0) return out;
  std::vector<std::size_t> cur(sizes.size(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = cur.size();
    while (i > 0) {
      --i;
      if (++cur[i] < sizes[i]) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
    if (cur.empty()) return out;
  }
}

std::string tuple_token(const std::vector<FinSet>& factors, const std::vector<std::size_t>& t) {
  std::string s = "<";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ";";
    s += factors[i][t[i]];
  }
  return s + ">";
}

}  // namespace

Product product(const std::vector<FinSet>& factors) {
  std::vector<std::size_t> sizes;
  for (const auto& f : factors) sizes.push_back(f.size());
  auto raw = index_tuples(sizes);
  std::vector<std::string> atoms;
  atoms.reserve(raw.size());
  for (const auto& t : raw) atoms.push_back(tuple_token(factors, t));
  FinSet set(atoms);
  std::vector<std::vector<std::size_t>> tuples(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) tuples[set.index_of(atoms[k])] = raw[k];
  std::vector<FinFn> projections;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    std::vector<std::size_t> map(tuples.size());
    for (std::size_t k = 0; k < tuples.size(); ++k) map[k] = tuples[k][i];
    projections.emplace_back(set, factors[i], std::move(map));
  }
  return {std::move(set), std::move(projections), std::move(tuples)};
}

FinFn product_map(const std::vector<FinFn>& fns) {
  std::vector<FinSet> doms, cods;
  for (const auto& f : fns) {
    doms.push_back(f.dom());
    cods.push_back(f.cod());
  }
  auto src = product(doms);
  auto dst = product(cods);
  std::vector<std::size_t> map(src.tuples.size());
  for (std::size_t k = 0; k < src.tuples.size(); ++k) {
    std::vector<std::size_t> t(fns.size());
    for (std::size_t i = 0; i < fns.size(); ++i) t[i] = fns[i](src.tuples[k][i]);
    map[k] = dst.set.index_of(tuple_token(cods, t));
  }
  return FinFn(src.set, dst.set, std::move(map));
}

// ---------------------------------------------------------------- equivalence relations

EquivRel::EquivRel(FinSet carrier, const std::vector<std::vector<std::string>>& blocks)
    : carrier_(std::move(carrier)) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> raw(carrier_.size(), unset);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw Error(ErrorCode::invalid_argument, "empty block");
    for (const auto& a : blocks[b]) {
      auto i = carrier_.index_of(a);
      if (raw[i] != unset) throw Error(ErrorCode::invalid_argument, "blocks overlap at " + a);
      raw[i] = b;
    }
  }
  if (std::find(raw.begin(), raw.end(), unset) != raw.end())
    throw Error(ErrorCode::invalid_argument, "blocks do not cover the carrier");
  *this = from_labels(carrier_, raw);
}

EquivRel EquivRel::from_labels(FinSet carrier, const std::vector<std::size_t>& labels) {
  if (labels.size() != carrier.size()) throw Error(ErrorCode::invalid_argument, "label count mismatch");
  EquivRel r;
  r.carrier_ = std::move(carrier);
  std::map<std::size_t, std::size_t> renumber;
  r.labels_.resize(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, fresh] = renumber.try_emplace(labels[i], renumber.size());
    r.labels_[i] = it->second;
  }
  r.blocks_ = renumber.size();
  return r;
}

EquivRel EquivRel::discrete(const FinSet& carrier) {
  std::vector<std::size_t> labels(carrier.size());
  std::iota(labels.begin(), labels.end(), 0);
  return from_labels(carrier, labels);
}

EquivRel EquivRel::total(const FinSet& carrier) {
  return from_labels(carrier, std::vector<std::size_t>(carrier.size(), 0));
}

std::vector<std::vector<std::size_t>> EquivRel::blocks() const {
  std::vector<std::vector<std::size_t>> out(blocks_);
  for (std::size_t i = 0; i < labels_.size(); ++i) out[labels_[i]].push_back(i);
  return out;
}

bool EquivRel::subset_of(const EquivRel& other) const {
  if (carrier_ != other.carrier_) throw Error(ErrorCode::invalid_argument, "relations over different carriers");
  // Each block of this must sit inside one block of other.
  std::vector<std::size_t> target(blocks_, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto& t = target[labels_[i]];
    if (t == static_cast<std::size_t>(-1)) t = other.labels_[i];
    else if (t != other.labels_[i]) return false;
  }
  return true;
}

std::string EquivRel::to_string() const {
  std::vector<std::string> parts;
  for (const auto& b : blocks()) {
    std::vector<std::string> names;
    for (auto i : b) names.push_back(carrier_[i]);
    parts.push_back("[" + join(names, ",") + "]");
  }
  return "[" + join(parts, ",") + "]";
}

EquivRel kernel(const FinFn& f) { return EquivRel::from_labels(f.dom(), f.map()); }

bool respects(const FinFn& f, const EquivRel& r) { return r.subset_of(kernel(f)); }

Quotient quotient(const FinSet& v, const EquivRel& r) {
  if (r.carrier() != v) throw Error(ErrorCode::invalid_argument, "quotient: relation over another set");
  std::vector<std::string> tokens;
  for (const auto& b : r.blocks()) {
    std::vector<std::string> names;
    for (auto i : b) names.push_back(v[i]);
    tokens.push_back(join(names, "|"));
  }
  FinSet q(tokens);
  std::vector<std::size_t> map(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) map[i] = q.index_of(tokens[r.labels()[i]]);
  return {q, FinFn(v, q, std::move(map))};
}

std::vector<EquivRel> equiv_lattice(const FinSet& v) {
  std::vector<EquivRel> out;
  std::vector<std::size_t> labels(v.size(), 0);
  // Restricted growth strings: labels[i] <= 1 + max(labels[0..i)).
  auto rec = [&](auto& self, std::size_t i, std::size_t max_label) -> void {
    if (i == labels.size()) {
      out.push_back(EquivRel::from_labels(v, labels));
      return;
    }
    for (std::size_t l = 0; l <= max_label + 1; ++l) {
      labels[i] = l;
      self(self, i + 1, std::max(max_label, l));
    }
  };
  if (v.empty()) {
    out.push_back(EquivRel::from_labels(v, {}));
    return out;
  }
  labels[0] = 0;
  rec(rec, 1, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EquivRel> up_closure(const std::vector<EquivRel>& rels) {
  if (rels.empty()) return {};
  std::vector<EquivRel> out;
  for (const auto& candidate : equiv_lattice(rels.front().carrier()))
    for (const auto& r : rels)
      if (r.subset_of(candidate)) {
        out.push_back(candidate);
        break;
      }
  return out;
}

bool is_up_closed(const std::vector<EquivRel>& rels) {
  auto sorted = rels;
  std::sort(sorted.begin(), sorted.end());
  return up_closure(sorted) == sorted;
}

EquivRel join(const EquivRel& a, const EquivRel& b) {
  if (a.carrier() != b.carrier()) throw Error(ErrorCode::invalid_argument, "join: different carriers");
  std::vector<std::size_t> parent(a.carrier().size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto* r : {&a, &b})
    for (const auto& block : r->blocks())
      for (auto i : block) parent[find(i)] = find(block.front());
  std::vector<std::size_t> labels(parent.size());
  for (std::size_t i = 0; i < parent.size(); ++i) labels[i] = find(i);
  return EquivRel::from_labels(a.carrier(), labels);
}

}  // namespace gm
