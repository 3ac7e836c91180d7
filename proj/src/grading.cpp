#include "gm/grading.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gm/error.hpp"

namespace gm {

namespace {

void require_kind(const GradeOps& ops, const GradeObject& g) {
  if (g.kind != ops.kind())
    throw Error(ErrorCode::kind_mismatch, "grade of kind " + std::string(to_string(g.kind)) + " used with " +
                                              std::string(to_string(ops.kind())));
}

GradeObject from_set(GradeKind kind, const std::set<std::size_t>& atoms) {
  return {kind, std::vector<std::size_t>(atoms.begin(), atoms.end())};
}

/// An outer element over an explicit inner carrier.
struct Witness {
  Computation outer;
  std::vector<Computation> inner;
};

void list_bound_check(const GradeOps& ops, const GradeObject& a, const GradeObject& b) {
  if (a.atoms.empty() || b.atoms.empty()) return;
  const std::size_t longest_inner = b.atoms.back();
  for (auto k : a.atoms)
    if (k >= 1 && k * longest_inner > ops.monad().bound())
      throw Error(ErrorCode::bound_exceeded, "flattening " + std::to_string(k) + " lists of length " +
                                                 std::to_string(longest_inner) + " passes the bound " +
                                                 std::to_string(ops.monad().bound()));
}

std::optional<Witness> writer_witness(const GradeOps& ops, const GradeObject& a, const GradeObject& b,
                                      const Computation& t) {
  const auto& m = ops.monad().monoid();
  for (auto z1 : a.atoms)
    for (auto z2 : b.atoms)
      if (m.multiply(z1, z2) == t.cells[0]) return Witness{Computation{{z1, 0}}, {Computation{{z2, t.cells[1]}}}};
  return std::nullopt;
}

std::optional<Witness> list_witness(const GradeObject& a, const GradeObject& b, const Computation& t) {
  const auto& xs = t.cells;
  // pieces(k, pos): split xs[pos..] into k pieces with lengths in b.
  std::set<std::pair<std::size_t, std::size_t>> dead;
  std::vector<std::size_t> cuts;
  std::function<bool(std::size_t, std::size_t)> pieces = [&](std::size_t k, std::size_t pos) {
    if (k == 0) return pos == xs.size();
    if (dead.count({k, pos})) return false;
    for (auto len : b.atoms) {
      if (pos + len > xs.size()) break;
      cuts.push_back(len);
      if (pieces(k - 1, pos + len)) return true;
      cuts.pop_back();
    }
    dead.insert({k, pos});
    return false;
  };
  for (auto k : a.atoms) {
    cuts.clear();
    if (!pieces(k, 0)) continue;
    Witness w;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      w.inner.push_back(Computation{{xs.begin() + static_cast<std::ptrdiff_t>(pos),
                                     xs.begin() + static_cast<std::ptrdiff_t>(pos + cuts[i])}});
      w.outer.cells.push_back(i);
      pos += cuts[i];
    }
    return w;
  }
  return std::nullopt;
}

std::optional<Witness> shape_witness(const GradeOps& ops, const GradeObject& a, const GradeObject& b,
                                     const Computation& t) {
  const auto& u = ops.universe();
  const std::size_t n = ops.monad().states().size();
  for (auto s : a.atoms) {
    const auto& sigma = u.endos()[s];
    Witness w;
    w.outer.cells = sigma;
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v) {
      // g_v with g_v(σ v) = t.next(v); its output is t.out(v) everywhere
      auto it = std::find_if(b.atoms.begin(), b.atoms.end(),
                             [&](std::size_t g) { return u.endos()[g][sigma[v]] == t.cells[v]; });
      if (it == b.atoms.end()) {
        ok = false;
        break;
      }
      Computation g{u.endos()[*it]};
      g.cells.resize(2 * n, t.cells[n + v]);
      w.inner.push_back(std::move(g));
    }
    if (!ok) continue;
    for (std::size_t v = 0; v < n; ++v) w.outer.cells.push_back(v);
    return w;
  }
  return std::nullopt;
}

/// Finds g respecting some R' ∈ b with g(w) = want[w] on the states where want
/// is set; returns its output table.
std::optional<std::vector<std::size_t>> reader_inner(const GradeOps& ops, const GradeObject& b,
                                                     const std::vector<std::optional<std::size_t>>& want,
                                                     std::size_t relation_atom_offset = 0,
                                                     std::optional<std::size_t> shape = std::nullopt) {
  const auto& u = ops.universe();
  const std::size_t n = want.size();
  for (auto atom : b.atoms) {
    std::size_t r = atom - relation_atom_offset;
    if (shape) {
      if (u.pair_endo(atom) != *shape) continue;
      r = u.pair_relation(atom);
    }
    const auto& rel = u.relations()[r];
    std::vector<std::optional<std::size_t>> block_value(rel.block_count());
    bool ok = true;
    for (std::size_t w = 0; w < n && ok; ++w) {
      if (!want[w]) continue;
      auto& slot = block_value[rel.labels()[w]];
      if (slot && *slot != *want[w]) ok = false;
      slot = want[w];
    }
    if (!ok) continue;
    std::vector<std::size_t> out(n);
    for (std::size_t w = 0; w < n; ++w) out[w] = block_value[rel.labels()[w]].value_or(0);
    return out;
  }
  return std::nullopt;
}

std::optional<Witness> reader_witness(const GradeOps& ops, const GradeObject& a, const GradeObject& b,
                                      const Computation& t) {
  const auto& u = ops.universe();
  const std::size_t n = ops.monad().states().size();
  for (auto r1 : a.atoms) {
    Witness w;
    w.outer.cells.resize(n);
    bool ok = true;
    for (const auto& block : u.relations()[r1].blocks()) {
      std::vector<std::optional<std::size_t>> want(n);
      for (auto v : block) want[v] = t.cells[v];
      auto g = reader_inner(ops, b, want);
      if (!g) {
        ok = false;
        break;
      }
      for (auto v : block) w.outer.cells[v] = w.inner.size();
      w.inner.push_back(Computation{*g});
    }
    if (ok) return w;
  }
  return std::nullopt;
}

std::optional<Witness> state_cw_witness(const GradeOps& ops, const GradeObject& a, const GradeObject& b,
                                        const Computation& t) {
  const auto& u = ops.universe();
  const std::size_t n = ops.monad().states().size();
  for (auto atom : a.atoms) {
    const auto& p1 = u.endos()[u.pair_endo(atom)];
    const auto& r1 = u.relations()[u.pair_relation(atom)];
    Witness w;
    w.outer.cells.assign(2 * n, 0);
    std::copy(p1.begin(), p1.end(), w.outer.cells.begin());
    bool ok = true;
    for (const auto& block : r1.blocks()) {
      // g(p1 v) = (next(v), out(v)) for v in the block
      std::vector<std::optional<std::size_t>> want_next(n), want_out(n);
      for (auto v : block) {
        const auto at = p1[v];
        if ((want_next[at] && *want_next[at] != t.cells[v]) || (want_out[at] && *want_out[at] != t.cells[n + v])) {
          ok = false;
          break;
        }
        want_next[at] = t.cells[v];
        want_out[at] = t.cells[n + v];
      }
      if (!ok) break;
      std::optional<Computation> found;
      for (std::size_t shape = 0; shape < u.endos().size() && !found; ++shape) {
        const auto& p2 = u.endos()[shape];
        bool agrees = true;
        for (std::size_t s = 0; s < n; ++s)
          if (want_next[s] && p2[s] != *want_next[s]) agrees = false;
        if (!agrees) continue;
        if (auto out = reader_inner(ops, b, want_out, 0, shape)) {
          Computation g{p2};
          g.cells.insert(g.cells.end(), out->begin(), out->end());
          found = std::move(g);
        }
      }
      if (!found) {
        ok = false;
        break;
      }
      for (auto v : block) w.outer.cells[n + v] = w.inner.size();
      w.inner.push_back(std::move(*found));
    }
    if (ok) return w;
  }
  return std::nullopt;
}

bool witness_exists(const GradeOps& ops, const GradeObject& a, const GradeObject& b, std::size_t x_size,
                    const Computation& t) {
  std::optional<Witness> w;
  switch (ops.kind()) {
    case GradeKind::writer: w = writer_witness(ops, a, b, t); break;
    case GradeKind::list: w = list_witness(a, b, t); break;
    case GradeKind::state_shapewise: w = shape_witness(ops, a, b, t); break;
    case GradeKind::reader: w = reader_witness(ops, a, b, t); break;
    case GradeKind::state_componentwise: w = state_cw_witness(ops, a, b, t); break;
  }
  if (!w) return false;
  // The witness must really live in mkS(Σ, mkS(Σ', X)) and flatten onto t.
  bool valid = ops.member(a, w->outer, w->inner.size());
  for (const auto& g : w->inner) valid = valid && ops.member(b, g, x_size);
  valid = valid && ops.monad().mu(w->outer, w->inner) == t;
  if (!valid) throw Error(ErrorCode::grade_violation, "tensor witness failed verification");
  return true;
}

}  // namespace

GradeObject unit_grade(const GradeOps& ops) {
  const auto& m = ops.monad();
  ProbeFamily family;
  for (const auto& x : ops.probes()) {
    auto carrier = m.full_carrier(x);
    std::vector<std::size_t> map;
    for (std::size_t i = 0; i < x.size(); ++i) map.push_back(carrier.atoms.index_of(m.format(m.eta(i), x)));
    auto fact = factorize_surj_inj(FinFn(x, carrier.atoms, map));
    ProbeComponent comp{x, {}};
    for (auto i : fact.m.map()) comp.elements.push_back(carrier.elements[i]);
    std::sort(comp.elements.begin(), comp.elements.end());
    family.push_back(std::move(comp));
  }
  return ops.mkSigma(family);
}

GradeObject tensor_semantic(const GradeOps& ops, const GradeObject& a, const GradeObject& b,
                            const TensorOptions& options) {
  require_kind(ops, a);
  require_kind(ops, b);
  const auto& m = ops.monad();
  const auto probes = ops.readback_probes();

  TensorMethod method = options.method;
  std::map<std::size_t, std::vector<Computation>> inner;
  if (method != TensorMethod::witness) {
    bool fits = true;
    for (const auto& x : probes)
      if (!inner.count(x.size())) {
        inner[x.size()] = ops.mkS(b, x.size());
        fits = fits && m.count(inner[x.size()].size()) <= options.enumerate_budget;
      }
    if (method == TensorMethod::automatic) method = fits ? TensorMethod::enumerate : TensorMethod::witness;
  }

  if (method == TensorMethod::enumerate) {
    std::map<std::size_t, std::set<Computation>> image;
    for (const auto& [size, carrier] : inner) {
      auto& out = image[size];
      for (const auto& outer : m.enumerate(carrier.size()))
        if (ops.member(a, outer, carrier.size())) out.insert(m.mu(outer, carrier));
    }
    return ops.read_grade([&](const FinSet& x, const Computation& t) { return image[x.size()].count(t) > 0; });
  }

  if (ops.kind() == GradeKind::list) list_bound_check(ops, a, b);
  return ops.read_grade(
      [&](const FinSet& x, const Computation& t) { return witness_exists(ops, a, b, x.size(), t); });
}

GradeObject tensor_closed_form(const GradeOps& ops, const GradeObject& a, const GradeObject& b) {
  require_kind(ops, a);
  require_kind(ops, b);
  const auto& u = ops.universe();
  std::set<std::size_t> out;
  switch (ops.kind()) {
    case GradeKind::writer:
      for (auto z1 : a.atoms)
        for (auto z2 : b.atoms) out.insert(ops.monad().monoid().multiply(z1, z2));
      break;
    case GradeKind::list: {
      list_bound_check(ops, a, b);
      // sums[k] = {m_1 + ... + m_k | m_i ∈ Σ'}
      std::set<std::size_t> sums{0};
      std::size_t k = 0;
      for (auto n : a.atoms) {
        while (k < n) {
          std::set<std::size_t> next;
          for (auto s : sums)
            for (auto len : b.atoms) next.insert(s + len);
          sums = std::move(next);
          ++k;
        }
        out.insert(sums.begin(), sums.end());
      }
      break;
    }
    case GradeKind::state_shapewise: {
      const std::size_t n = ops.monad().states().size();
      for (auto s : a.atoms) {
        const auto& sigma = u.endos()[s];
        for (std::size_t h = 0; h < u.endos().size(); ++h) {
          bool ok = true;
          for (std::size_t v = 0; v < n && ok; ++v)
            ok = std::any_of(b.atoms.begin(), b.atoms.end(),
                             [&](std::size_t g) { return u.endos()[g][sigma[v]] == u.endos()[h][v]; });
          if (ok) out.insert(h);
        }
      }
      break;
    }
    default:
      throw Error(ErrorCode::unsupported_kind,
                  "no closed form for " + std::string(to_string(ops.kind())) + "; use the semantic tensor");
  }
  return from_set(ops.kind(), out);
}

GradeObject shape_closure(const GradeOps& ops, const GradeObject& a) {
  require_kind(ops, a);
  if (ops.kind() != GradeKind::state_shapewise)
    throw Error(ErrorCode::unsupported_kind, "Cl is defined for state-shapewise grades");
  const auto& u = ops.universe();
  std::set<std::size_t> out;
  for (std::size_t h = 0; h < u.endos().size(); ++h) {
    bool ok = true;
    for (std::size_t v = 0; v < u.endos()[h].size() && ok; ++v)
      ok = std::any_of(a.atoms.begin(), a.atoms.end(),
                       [&](std::size_t g) { return u.endos()[g][v] == u.endos()[h][v]; });
    if (ok) out.insert(h);
  }
  return from_set(ops.kind(), out);
}

GradeObject tensor_literal_composition(const GradeOps& ops, const GradeObject& a, const GradeObject& b) {
  const auto cl = shape_closure(ops, b);
  const auto& u = ops.universe();
  std::set<std::size_t> out;
  for (auto s : a.atoms)
    for (auto h : cl.atoms) {
      Endo composite(u.endos()[s].size());
      for (std::size_t v = 0; v < composite.size(); ++v) composite[v] = u.endos()[h][u.endos()[s][v]];
      out.insert(u.endo_index(composite));
    }
  return from_set(ops.kind(), out);
}

SkewFlavor declared_flavor(GradeKind kind) {
  return kind == GradeKind::state_shapewise ? SkewFlavor::right_skew : SkewFlavor::monoidal;
}

// ---------------------------------------------------------------- canonical grading

CanonicalGrading::CanonicalGrading(MonadInstance m, const BuildOptions& options)
    : ops_(std::move(m)), options_(options), unit_(unit_grade(ops_)), flavor_(declared_flavor(ops_.kind())) {}

CanonicalGrading CanonicalGrading::lazy(MonadInstance m, const BuildOptions& options) {
  return CanonicalGrading(std::move(m), options);
}

GradeObject CanonicalGrading::compute_tensor(const GradeObject& a, const GradeObject& b) const {
  const auto k = ops_.kind();
  if (options_.closed_form_fast_path &&
      (k == GradeKind::writer || k == GradeKind::list || k == GradeKind::state_shapewise))
    return tensor_closed_form(ops_, a, b);
  return tensor_semantic(ops_, a, b, options_.tensor);
}

CanonicalGrading CanonicalGrading::build(MonadInstance m, const BuildOptions& options) {
  CanonicalGrading c(std::move(m), options);
  const auto& ops = c.ops_;
  if (ops.grade_count() <= static_cast<double>(options.max_grades)) {
    c.grades_ = ops.enumerate_grades(options.max_grades);
    c.enumerated_ = true;
  } else {
    // Closure of a seed set under ⊡.
    std::set<std::vector<std::size_t>> seen;
    std::vector<GradeObject> all;
    auto add = [&](const GradeObject& g) {
      if (seen.insert(g.atoms).second) {
        all.push_back(g);
        if (all.size() > options.max_grades)
          throw Error(ErrorCode::bound_exceeded, "seed closure passes " + std::to_string(options.max_grades) +
                                                     " grades");
      }
    };
    add(c.unit_);
    add(ops.empty());
    add(ops.full());
    if (ops.monad().count(1) <= 4096)
      for (const auto& t : ops.monad().enumerate(1)) add(ops.principal(t, 1));
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j)
        for (auto [x, y] : {std::pair{i, j}, std::pair{j, i}}) {
          try {
            add(c.compute_tensor(all[x], all[y]));
          } catch (const Error& e) {
            if (e.code() != ErrorCode::bound_exceeded) throw;
          }
        }
    c.grades_ = std::move(all);
    std::sort(c.grades_.begin(), c.grades_.end(), grade_order);
  }
  for (std::size_t i = 0; i < c.grades_.size(); ++i) c.index_[c.grades_[i].atoms] = i;

  GradePoset p;
  const std::size_t n = c.grades_.size();
  for (const auto& g : c.grades_) p.labels.push_back(ops.label(g));
  p.order.resize(n * n);
  p.tensor.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      p.order[i * n + j] = ops.leq(c.grades_[i], c.grades_[j]);
      try {
        auto t = c.compute_tensor(c.grades_[i], c.grades_[j]);
        auto it = c.index_.find(t.atoms);
        p.tensor[i * n + j] = it == c.index_.end() ? GradePoset::outside : static_cast<long>(it->second);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::bound_exceeded) throw;
        p.tensor[i * n + j] = GradePoset::undefined;
      }
    }
  auto unit = c.index_.find(c.unit_.atoms);
  if (unit == c.index_.end()) throw Error(ErrorCode::tensor_not_closed, "unit grade is not in the carrier");
  p.unit = unit->second;
  p.flavor = c.flavor_;
  c.poset_ = std::move(p);
  return c;
}

const std::vector<GradeObject>& CanonicalGrading::grades() const {
  if (!poset_) throw Error(ErrorCode::invalid_argument, "lazy canonical grading has no carrier");
  return grades_;
}

const GradePoset& CanonicalGrading::poset() const {
  if (!poset_) throw Error(ErrorCode::invalid_argument, "lazy canonical grading has no carrier");
  return *poset_;
}

std::optional<std::size_t> CanonicalGrading::index_of(const GradeObject& g) const {
  auto it = index_.find(g.atoms);
  if (it == index_.end() || g.kind != ops_.kind()) return std::nullopt;
  return it->second;
}

GradeObject CanonicalGrading::tensor(const GradeObject& a, const GradeObject& b) const {
  if (poset_) {
    auto i = index_of(a), j = index_of(b);
    if (i && j) {
      const long cell = poset_->tensor[*i * grades_.size() + *j];
      if (cell == GradePoset::undefined)
        throw Error(ErrorCode::bound_exceeded, ops_.label(a) + " ⊡ " + ops_.label(b) + " passes the list bound");
      if (cell >= 0) return grades_[static_cast<std::size_t>(cell)];
    }
  }
  return compute_tensor(a, b);
}

Computation graded_eta(const CanonicalGrading& c, std::size_t x, std::size_t x_size) {
  auto t = c.monad().eta(x);
  if (!c.ops().member(c.unit(), t, x_size))
    throw Error(ErrorCode::grade_violation, "η lands outside J");
  return t;
}

Computation graded_mu(const CanonicalGrading& c, const GradeObject& a, const GradeObject& b,
                      const Computation& outer, const std::vector<Computation>& inner, std::size_t x_size) {
  const auto& ops = c.ops();
  if (!ops.member(a, outer, inner.size()))
    throw Error(ErrorCode::invalid_argument, "outer element is not in the first grade");
  for (const auto& g : inner)
    if (!ops.member(b, g, x_size)) throw Error(ErrorCode::invalid_argument, "inner element is not in the second grade");
  auto result = c.monad().mu(outer, inner);
  if (!ops.member(c.tensor(a, b), result, x_size))
    throw Error(ErrorCode::grade_violation, "μ lands outside Σ ⊡ Σ'");
  return result;
}

// ---------------------------------------------------------------- user gradings

std::optional<std::size_t> UserGrading::find(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

UserGrading getput_grading(const GradeOps& ops) {
  if (ops.kind() != GradeKind::state_componentwise)
    throw Error(ErrorCode::kind_mismatch, "the {get,put} grading needs the componentwise state instance");
  UserGrading u;
  u.names = {"{}", "{get}", "{put}", "{get,put}"};
  u.order.resize(16);
  u.product.resize(16);
  for (std::size_t d = 0; d < 4; ++d)
    for (std::size_t e = 0; e < 4; ++e) {
      u.order[d * 4 + e] = (d & e) == d;
      u.product[d * 4 + e] = d | e;
    }
  u.unit = 0;
  u.flavor = SkewFlavor::monoidal;
  const MonadInstance m = ops.monad();
  u.member = [m](std::size_t d, const Computation& t, std::size_t) {
    const auto p = m.next_states(t);
    const auto o = m.outputs(t);
    auto constant = [](const std::vector<std::size_t>& f) {
      return std::all_of(f.begin(), f.end(), [&](std::size_t v) { return v == f[0]; });
    };
    bool identity = true;
    for (std::size_t v = 0; v < p.size(); ++v) identity = identity && p[v] == v;
    const bool get = d & 1, put = d & 2;
    if (!get && !((constant(p) || identity) && constant(o))) return false;
    if (!put && !identity) return false;
    return true;
  };
  for (std::size_t d = 0; d < 4; ++d) {
    ProbeFamily family;
    for (const auto& x : ops.probes()) {
      ProbeComponent comp{x, {}};
      for (auto& t : m.enumerate(x.size()))
        if (u.member(d, t, x.size())) comp.elements.push_back(std::move(t));
      family.push_back(std::move(comp));
    }
    u.assignment.push_back(ops.mkSigma(family));
  }
  return u;
}

CanonicityResult canonicity_morphism(const UserGrading& u, const CanonicalGrading& c) {
  const auto& ops = c.ops();
  const std::size_t n = u.size();
  auto invalid = [](const std::string& why) { throw Error(ErrorCode::not_a_grading, why); };
  if (u.order.size() != n * n || u.product.size() != n * n || u.assignment.size() != n || u.unit >= n)
    invalid("user grading tables have the wrong size");

  GradePoset p;
  p.labels = u.names;
  p.order = u.order;
  for (auto d : u.product) p.tensor.push_back(static_cast<long>(d));
  p.unit = u.unit;
  p.flavor = u.flavor;
  for (const auto& r : check_skew_laws(p))
    if (!r.pass) invalid("user grade poset fails " + r.name + ": " + r.counterexample.value_or(""));

  for (const auto& g : u.assignment)
    if (!ops.is_canonical(g)) invalid("assignment is not a canonical grade: " + ops.label(g));

  LawCheck monotone("canonicity-monotone");
  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t e = 0; e < n; ++e)
      if (u.order[d * n + e] && !ops.leq(u.assignment[d], u.assignment[e]))
        invalid("G is not monotone at " + u.names[d] + " ≤ " + u.names[e]);

  if (!ops.leq(c.unit(), u.assignment[u.unit])) invalid("J is not contained in G I");

  for (std::size_t d = 0; d < n; ++d)
    for (std::size_t e = 0; e < n; ++e) {
      GradeObject t;
      try {
        t = c.tensor(u.assignment[d], u.assignment[e]);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::bound_exceeded) throw;
        continue;
      }
      if (!ops.leq(t, u.assignment[u.product[d * n + e]]))
        invalid("μ does not map G " + u.names[d] + " ∘ G " + u.names[e] + " into G " + u.names[u.product[d * n + e]]);
    }

  CanonicityResult result;
  result.F = u.assignment;
  result.reports.push_back(LawReport::ok("canonicity-unit"));
  result.reports.push_back(LawReport::ok("canonicity-lax-tensor"));
  result.reports.push_back(monotone.report());

  // g_d = g'_{F d}: both are the inclusion of the same subset at each probe.
  LawCheck inclusion("canonicity-inclusion");
  if (u.member)
    for (std::size_t d = 0; d < n && !inclusion.failed(); ++d)
      for (const auto& x : ops.probes()) {
        std::vector<Computation> direct;
        for (auto& t : ops.monad().enumerate(x.size()))
          if (u.member(d, t, x.size())) direct.push_back(std::move(t));
        if (direct != ops.mkS(result.F[d], x.size())) {
          inclusion.fail("d=" + u.names[d] + " probe=" + x.to_string());
          break;
        }
      }
  result.reports.push_back(inclusion.report());

  // F d is forced: a grade with the same subfunctor is the same grade.
  LawCheck unique("canonicity-unique");
  for (std::size_t d = 0; d < n; ++d)
    if (!(ops.mkSigma(ops.mkS_family(result.F[d])) == result.F[d])) unique.fail("d=" + u.names[d]);
  result.reports.push_back(unique.report());
  return result;
}

std::optional<std::size_t> least_user_grade(const UserGrading& u, const GradeOps& ops, const GradeObject& g) {
  const std::size_t n = u.size();
  std::vector<std::size_t> candidates;
  for (std::size_t d = 0; d < n; ++d)
    if (ops.leq(g, u.assignment[d])) candidates.push_back(d);
  for (auto d : candidates)
    if (std::all_of(candidates.begin(), candidates.end(), [&](std::size_t e) { return u.order[d * n + e] != 0; }))
      return d;
  return std::nullopt;
}

}  // namespace gm
