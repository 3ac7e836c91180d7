#include "gm/algebraic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <set>

#include "gm/error.hpp"

namespace gm {

namespace {

constexpr double fill_budget = 60000;

double product_size(const std::vector<std::vector<Computation>>& factors) {
  double n = 1;
  for (const auto& f : factors) n *= static_cast<double>(f.size());
  return n;
}

// Calls fn on every tuple of the product; fn returns false to stop early.
template <class Fn>
void for_each_tuple(const std::vector<std::vector<Computation>>& factors, Fn&& fn) {
  for (const auto& f : factors)
    if (f.empty()) return;
  std::vector<std::size_t> idx(factors.size(), 0);
  std::vector<Computation> args(factors.size());
  while (true) {
    for (std::size_t i = 0; i < factors.size(); ++i) args[i] = factors[i][idx[i]];
    if (!fn(std::span<const Computation>(args))) return;
    std::size_t i = factors.size();
    while (i > 0) {
      --i;
      if (++idx[i] < factors[i].size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (factors.empty()) return;
  }
}

std::string show_args(const MonadInstance& m, std::span<const Computation> args, const FinSet& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += "; ";
    s += m.format(args[i], x);
  }
  return s + ")";
}

bool is_bound(const Error& e) { return e.code() == ErrorCode::bound_exceeded; }

std::map<Computation, std::size_t> index_map(const std::vector<Computation>& elems) {
  std::map<Computation, std::size_t> out;
  for (std::size_t i = 0; i < elems.size(); ++i) out.emplace(elems[i], i);
  return out;
}

void check_arity(const std::vector<GradeObject>& inputs, std::size_t arity) {
  if (inputs.size() != arity)
    throw Error(ErrorCode::invalid_argument, "operation of arity " + std::to_string(arity) + " given " +
                                                 std::to_string(inputs.size()) + " input grades");
}

void check_kinds(const GradeOps& ops, const std::vector<GradeObject>& gs) {
  for (const auto& g : gs)
    if (g.kind != ops.kind()) throw Error(ErrorCode::kind_mismatch, "grade kind differs from the monad's grading");
}

}  // namespace

// ---------------------------------------------------------------- operations

AlgebraicOp writer_act(const MonadInstance& m, std::size_t z) {
  if (m.kind() != MonadKind::writer) throw Error(ErrorCode::kind_mismatch, "writer-act needs a writer monad");
  if (z >= m.monoid().size()) throw Error(ErrorCode::invalid_argument, "writer-act: z out of range");
  Monoid monoid = m.monoid();
  return {"writer-act(" + monoid.elements()[z] + ")", 1,
          [monoid, z](const FinSet&, std::span<const Computation> args) {
            return Computation{{monoid.multiply(z, args[0].cells[0]), args[0].cells[1]}};
          }};
}

AlgebraicOp list_concat(const MonadInstance& m) {
  if (m.kind() != MonadKind::list) throw Error(ErrorCode::kind_mismatch, "concat needs the list monad");
  std::size_t bound = m.bound();
  return {"concat", 2, [bound](const FinSet&, std::span<const Computation> args) {
            Computation out = args[0];
            out.cells.insert(out.cells.end(), args[1].cells.begin(), args[1].cells.end());
            if (out.cells.size() > bound)
              throw Error(ErrorCode::bound_exceeded, "concatenation longer than " + std::to_string(bound));
            return out;
          }};
}

AlgebraicOp list_empty() {
  return {"empty", 0, [](const FinSet&, std::span<const Computation>) { return Computation{}; }};
}

AlgebraicOp identity_op() {
  return {"identity", 1, [](const FinSet&, std::span<const Computation> args) { return args[0]; }};
}

AlgebraicOp custom_op(const MonadInstance& m, std::string name, std::size_t arity,
                      std::map<std::string, std::string> table) {
  auto shared = std::make_shared<const std::map<std::string, std::string>>(std::move(table));
  return {name, arity, [m, shared, name](const FinSet& x, std::span<const Computation> args) {
            std::string key;
            for (std::size_t i = 0; i < args.size(); ++i) {
              if (i) key += ";";
              key += m.format(args[i], x);
            }
            auto it = shared->find(key);
            if (it == shared->end())
              throw Error(ErrorCode::invalid_argument, name + " is undefined on " + key + " over " + x.to_string());
            return m.parse(it->second, x);
          }};
}

// ---------------------------------------------------------------- algebraicity

LawReport check_algebraic(const AlgebraicOp& op, const MonadInstance& m, const AlgebraicCheckOptions& options) {
  LawCheck law("algebraic(" + op.name + ")");
  std::mt19937_64 rng(options.seed);
  for (std::size_t n : {std::size_t{1}, std::size_t{2}}) {
    const FinSet x = FinSet::numbered("x", n);
    const Carrier tx = m.full_carrier(x);
    auto run = [&](std::span<const Computation> ts) {
      Computation lhs, rhs;
      try {
        std::vector<Computation> flat;
        for (const auto& t : ts) flat.push_back(m.mu(t, tx.elements));
        lhs = op.apply(x, flat);
        rhs = m.mu(op.apply(tx.atoms, ts), tx.elements);
      } catch (const Error& e) {
        if (is_bound(e)) return true;  // the truncated list monad has no value here
        throw;
      }
      law.expect(lhs == rhs, "X=" + x.to_string() + " t=" + show_args(m, ts, tx.atoms) + " lhs=" +
                                 m.format(lhs, x) + " rhs=" + m.format(rhs, x));
      return !law.failed();
    };
    double total = std::pow(m.count(tx.atoms.size()), static_cast<double>(op.arity));
    if (total <= options.exhaustive_limit) {
      auto all = m.enumerate(tx.atoms.size());
      for_each_tuple(std::vector<std::vector<Computation>>(op.arity, all), run);
    } else {
      for (std::size_t k = 0; k < options.samples && !law.failed(); ++k) {
        std::vector<Computation> ts;
        for (std::size_t i = 0; i < op.arity; ++i) ts.push_back(m.random(tx.atoms.size(), rng));
        run(ts);
      }
    }
    if (law.failed()) break;
  }
  return law.report();
}

LawReport check_op_natural(const AlgebraicOp& op, const MonadInstance& m, const AlgebraicCheckOptions& options) {
  LawCheck law("natural(" + op.name + ")");
  std::mt19937_64 rng(options.seed);
  for (std::size_t a = 0; a <= 2 && !law.failed(); ++a) {
    for (std::size_t b = 0; b <= 2 && !law.failed(); ++b) {
      const FinSet x = FinSet::numbered("x", a), y = FinSet::numbered("y", b);
      for (const auto& f : all_functions(x, y)) {
        auto run = [&](std::span<const Computation> ts) {
          Computation lhs, rhs;
          try {
            lhs = m.fmap(f, op.apply(x, ts));
            std::vector<Computation> mapped;
            for (const auto& t : ts) mapped.push_back(m.fmap(f, t));
            rhs = op.apply(y, mapped);
          } catch (const Error& e) {
            if (is_bound(e)) return true;
            throw;
          }
          law.expect(lhs == rhs, "f=" + f.to_string() + " t=" + show_args(m, ts, x));
          return !law.failed();
        };
        double total = std::pow(m.count(a), static_cast<double>(op.arity));
        if (total <= options.exhaustive_limit) {
          for_each_tuple(std::vector<std::vector<Computation>>(op.arity, m.enumerate(a)), run);
        } else if (a > 0) {
          for (std::size_t k = 0; k < options.samples / 10 && !law.failed(); ++k) {
            std::vector<Computation> ts;
            for (std::size_t i = 0; i < op.arity; ++i) ts.push_back(m.random(a, rng));
            run(ts);
          }
        }
        if (law.failed()) break;
      }
    }
  }
  return law.report();
}

// ---------------------------------------------------------------- canonical output grade

void require_monoidal(const GradeOps& ops) {
  if (ops.kind() == GradeKind::state_shapewise)
    throw Error(ErrorCode::skew_not_supported,
                "graded operations need a monoidal grading; state-shapewise is right-skew");
}

GradeObject canonical_output_grade(const GradeOps& ops, const AlgebraicOp& op, const std::vector<GradeObject>& inputs) {
  require_monoidal(ops);
  check_arity(inputs, op.arity);
  check_kinds(ops, inputs);
  const auto& m = ops.monad();
  std::map<std::string, std::set<Computation>> images;
  for (const auto& x : ops.readback_probes()) {
    std::vector<std::vector<Computation>> factors;
    for (const auto& r : inputs) factors.push_back(ops.mkS(r, x.size()));
    auto& img = images[x.to_string()];
    for_each_tuple(factors, [&](std::span<const Computation> args) {
      img.insert(op.apply(x, args));
      return true;
    });
  }
  (void)m;
  return ops.read_grade([&](const FinSet& probe, const Computation& t) {
    auto it = images.find(probe.to_string());
    return it != images.end() && it->second.count(t) > 0;
  });
}

PMorphism canonical_p(const GradeOps& ops, const AlgebraicOp& op, const std::vector<GradeObject>& inputs) {
  GradeObject out = canonical_output_grade(ops, op, inputs);
  return {inputs, out, op.apply};
}

void check_p_square(const GradeOps& ops, const AlgebraicOp& op, const PMorphism& p) {
  require_monoidal(ops);
  check_arity(p.inputs, op.arity);
  check_kinds(ops, p.inputs);
  check_kinds(ops, {p.output});
  const auto& m = ops.monad();
  for (const auto& x : ops.probes()) {
    std::vector<std::vector<Computation>> factors;
    for (const auto& r : p.inputs) factors.push_back(ops.mkS(r, x.size()));
    for_each_tuple(factors, [&](std::span<const Computation> args) {
      Computation v = p.apply(x, args);
      if (!ops.member(p.output, v, x.size()))
        throw Error(ErrorCode::square_does_not_commute,
                    "p" + show_args(m, args, x) + " = " + m.format(v, x) + " lies outside " + ops.label(p.output));
      if (!(v == op.apply(x, args)))
        throw Error(ErrorCode::square_does_not_commute, "p and " + op.name + " differ at " + show_args(m, args, x));
      return true;
    });
  }
}

// ---------------------------------------------------------------- ψ via fill-ins

namespace {

struct PsiTable {
  std::vector<std::map<Computation, std::size_t>> b_index;
  std::map<std::vector<std::size_t>, std::size_t> tuple_index;
  FinFn d;
  std::vector<Computation> outputs;
};

PsiTable build_psi_table(const CanonicalGrading& c, const AlgebraicOp& op, const PMorphism& p, const GradeObject& s,
                         const FinSet& x) {
  const auto& ops = c.ops();
  const auto& m = c.monad();
  const std::size_t n = p.inputs.size();
  if (m.count(x.size()) > fill_budget) throw Error(ErrorCode::bound_exceeded, "T X too large for a fill-in");
  const Carrier sx = m.carrier(x, ops.mkS(s, x.size()));
  if (m.count(sx.atoms.size()) > fill_budget)
    throw Error(ErrorCode::bound_exceeded, "T(S X) too large for a fill-in");

  std::vector<Carrier> a, b;
  for (const auto& r : p.inputs) {
    a.push_back(m.carrier(sx.atoms, ops.mkS(r, sx.atoms.size())));
    b.push_back(m.carrier(x, ops.mkS(c.tensor(r, s), x.size())));
  }
  double dom = 1;
  for (const auto& ai : a) dom *= static_cast<double>(ai.elements.size());
  if (dom > fill_budget) throw Error(ErrorCode::bound_exceeded, "fill-in domain too large");
  const Carrier d = m.carrier(x, ops.mkS(c.tensor(p.output, s), x.size()));
  const Carrier tx = m.full_carrier(x);

  std::vector<FinSet> a_sets, b_sets;
  for (std::size_t i = 0; i < n; ++i) {
    a_sets.push_back(a[i].atoms);
    b_sets.push_back(b[i].atoms);
  }
  const Product pa = product(a_sets), pb = product(b_sets);

  PsiTable table;
  for (const auto& bi : b) table.b_index.push_back(index_map(bi.elements));
  for (std::size_t k = 0; k < pb.tuples.size(); ++k) table.tuple_index.emplace(pb.tuples[k], k);
  const auto d_index = index_map(d.elements);
  const auto tx_index = index_map(tx.elements);

  std::vector<std::size_t> e_map(pa.tuples.size()), f_map(pa.tuples.size());
  for (std::size_t k = 0; k < pa.tuples.size(); ++k) {
    std::vector<Computation> args(n);
    std::vector<std::size_t> image(n);
    for (std::size_t i = 0; i < n; ++i) {
      args[i] = a[i].elements[pa.tuples[k][i]];
      auto it = table.b_index[i].find(m.mu(args[i], sx.elements));
      if (it == table.b_index[i].end())
        throw Error(ErrorCode::grade_violation, "μ leaves the tensor of an input grade with S");
      image[i] = it->second;
    }
    e_map[k] = table.tuple_index.at(image);
    Computation out = m.mu(p.apply(sx.atoms, args), sx.elements);
    auto it = d_index.find(out);
    if (it == d_index.end())
      throw Error(ErrorCode::square_does_not_commute, "μ ∘ p S leaves R' ⊡ S at " + show_args(m, args, sx.atoms));
    f_map[k] = it->second;
  }
  std::vector<std::size_t> m_map(d.elements.size()), g_map(pb.tuples.size());
  for (std::size_t j = 0; j < d.elements.size(); ++j) m_map[j] = tx_index.at(d.elements[j]);
  for (std::size_t k = 0; k < pb.tuples.size(); ++k) {
    std::vector<Computation> args(n);
    for (std::size_t i = 0; i < n; ++i) args[i] = b[i].elements[pb.tuples[k][i]];
    auto it = tx_index.find(op.apply(x, args));
    if (it == tx_index.end()) throw Error(ErrorCode::grade_violation, "φ leaves T X");
    g_map[k] = it->second;
  }
  FinFn e(pa.set, pb.set, std::move(e_map));
  FinFn f(pa.set, d.atoms, std::move(f_map));
  FinFn mm(d.atoms, tx.atoms, std::move(m_map));
  FinFn g(pb.set, tx.atoms, std::move(g_map));
  table.d = fillin(e, mm, f, g);
  table.outputs = d.elements;
  return table;
}

}  // namespace

GradedOp psi_from_p(const CanonicalGrading& c, const AlgebraicOp& op, const PMorphism& p) {
  check_p_square(c.ops(), op, p);
  using Key = std::pair<std::vector<std::size_t>, std::string>;
  auto cache = std::make_shared<std::map<Key, std::shared_ptr<const PsiTable>>>();
  return {p.inputs, p.output,
          [&c, op, p, cache](const GradeObject& s, const FinSet& x, std::span<const Computation> args) {
            Key key{s.atoms, x.to_string()};
            auto it = cache->find(key);
            if (it == cache->end())
              it = cache->emplace(key, std::make_shared<const PsiTable>(build_psi_table(c, op, p, s, x))).first;
            const PsiTable& t = *it->second;
            std::vector<std::size_t> idx(args.size());
            for (std::size_t i = 0; i < args.size(); ++i) {
              auto jt = t.b_index[i].find(args[i]);
              if (jt == t.b_index[i].end())
                throw Error(ErrorCode::invalid_argument, "ψ argument outside its input grade");
              idx[i] = jt->second;
            }
            return t.outputs[t.d(t.tuple_index.at(idx))];
          }};
}

PMorphism p_from_psi(const CanonicalGrading& c, const GradedOp& psi) {
  const auto& j = c.unit();
  for (const auto& r : psi.inputs)
    if (!(c.tensor(r, j) == r)) throw Error(ErrorCode::precondition_failed, "R ⊡ J differs from R");
  if (!(c.tensor(psi.output, j) == psi.output)) throw Error(ErrorCode::precondition_failed, "R' ⊡ J differs from R'");
  auto fn = psi.psi;
  return {psi.inputs, psi.output,
          [fn, j](const FinSet& x, std::span<const Computation> args) { return fn(j, x, args); }};
}

GradedOp restrict_op(const CanonicalGrading& c, const AlgebraicOp& op, const std::vector<GradeObject>& inputs,
                     const GradeObject& output) {
  require_monoidal(c.ops());
  check_arity(inputs, op.arity);
  return {inputs, output, [&c, op, inputs, output](const GradeObject& s, const FinSet& x,
                                                   std::span<const Computation> args) {
            const auto& ops = c.ops();
            for (std::size_t i = 0; i < args.size(); ++i)
              if (!ops.member(c.tensor(inputs[i], s), args[i], x.size()))
                throw Error(ErrorCode::invalid_argument, "ψ argument outside its input grade");
            Computation v = op.apply(x, args);
            if (!ops.member(c.tensor(output, s), v, x.size()))
              throw Error(ErrorCode::grade_violation, op.name + " leaves " + ops.label(c.tensor(output, s)));
            return v;
          }};
}

std::vector<std::vector<Computation>> psi_domain(const CanonicalGrading& c, const GradedOp& psi,
                                                 const GradeObject& s, const FinSet& x) {
  std::vector<std::vector<Computation>> factors;
  for (const auto& r : psi.inputs) factors.push_back(c.ops().mkS(c.tensor(r, s), x.size()));
  return factors;
}

// ---------------------------------------------------------------- checks

LawReport compare_graded(const CanonicalGrading& c, const GradedOp& a, const GradedOp& b,
                         const std::vector<GradeObject>& grades, std::string name) {
  LawCheck law(std::move(name));
  const auto& ops = c.ops();
  const auto& m = c.monad();
  std::size_t checked = 0;
  for (const auto& s : grades) {
    for (const auto& x : ops.readback_probes()) {
      try {
        auto factors = psi_domain(c, a, s, x);
        if (product_size(factors) > fill_budget) continue;
        for_each_tuple(factors, [&](std::span<const Computation> args) {
          Computation u = a.psi(s, x, args), v = b.psi(s, x, args);
          law.expect(u == v, "S=" + ops.label(s) + " X=" + x.to_string() + " args=" + show_args(m, args, x));
          return !law.failed();
        });
        ++checked;
      } catch (const Error& e) {
        if (!is_bound(e)) throw;
      }
      if (law.failed()) return law.report();
    }
  }
  if (checked == 0) law.fail("no grade within the enumeration budget");
  return law.report();
}

LawReport compare_p(const GradeOps& ops, const PMorphism& a, const PMorphism& b, std::string name) {
  LawCheck law(std::move(name));
  const auto& m = ops.monad();
  law.expect(a.output == b.output, "outputs " + ops.label(a.output) + " vs " + ops.label(b.output));
  for (const auto& x : ops.probes()) {
    std::vector<std::vector<Computation>> factors;
    for (const auto& r : a.inputs) factors.push_back(ops.mkS(r, x.size()));
    for_each_tuple(factors, [&](std::span<const Computation> args) {
      law.expect(a.apply(x, args) == b.apply(x, args), "X=" + x.to_string() + " args=" + show_args(m, args, x));
      return !law.failed();
    });
  }
  return law.report();
}

LawReport check_grades_op(const CanonicalGrading& c, const GradedOp& psi, const AlgebraicOp& op,
                          const std::vector<GradeObject>& grades) {
  LawCheck law("grades(" + op.name + ")");
  const auto& ops = c.ops();
  const auto& m = c.monad();
  for (const auto& s : grades) {
    for (const auto& x : ops.readback_probes()) {
      try {
        auto factors = psi_domain(c, psi, s, x);
        if (product_size(factors) > fill_budget) continue;
        const GradeObject out = c.tensor(psi.output, s);
        for_each_tuple(factors, [&](std::span<const Computation> args) {
          Computation v;
          try {
            v = psi.psi(s, x, args);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::grade_violation) throw;
            law.fail("S=" + ops.label(s) + " args=" + show_args(m, args, x) + ": " + e.what());
            return false;
          }
          law.expect(ops.member(out, v, x.size()),
                     "S=" + ops.label(s) + " ψ" + show_args(m, args, x) + " outside " + ops.label(out));
          law.expect(v == op.apply(x, args), "S=" + ops.label(s) + " ψ and φ differ at " + show_args(m, args, x));
          return !law.failed();
        });
      } catch (const Error& e) {
        if (!is_bound(e)) throw;
      }
      if (law.failed()) return law.report();
    }
  }
  return law.report();
}

LawReport check_graded_algebraic(const CanonicalGrading& c, const GradedOp& psi, const std::vector<GradeObject>& grades,
                                 const AlgebraicCheckOptions& options) {
  LawCheck law("graded-algebraic");
  const auto& ops = c.ops();
  const auto& m = c.monad();
  const FinSet x = FinSet::numbered("x", 1);
  std::mt19937_64 rng(options.seed);
  std::size_t checked = 0;
  for (const auto& s : grades) {
    for (const auto& s2 : grades) {
      try {
        const Carrier inner = m.carrier(x, ops.mkS(s2, 1));
        if (m.count(inner.atoms.size()) > fill_budget) continue;
        const GradeObject ss = c.tensor(s, s2);
        auto factors = psi_domain(c, psi, s, inner.atoms);
        auto run = [&](std::span<const Computation> ts) {
          std::vector<Computation> flat;
          for (const auto& t : ts) flat.push_back(m.mu(t, inner.elements));
          Computation lhs = psi.psi(ss, x, flat);
          Computation rhs = m.mu(psi.psi(s, inner.atoms, ts), inner.elements);
          law.expect(lhs == rhs, "S=" + ops.label(s) + " S'=" + ops.label(s2) +
                                     " t=" + show_args(m, ts, inner.atoms));
          return !law.failed();
        };
        double total = product_size(factors);
        if (total <= options.exhaustive_limit) {
          for_each_tuple(factors, run);
        } else {
          for (std::size_t k = 0; k < options.samples / 10 && !law.failed(); ++k) {
            std::vector<Computation> ts;
            for (const auto& f : factors) ts.push_back(f[std::uniform_int_distribution<std::size_t>(0, f.size() - 1)(rng)]);
            run(ts);
          }
        }
        ++checked;
      } catch (const Error& e) {
        if (!is_bound(e)) throw;
      }
      if (law.failed()) return law.report();
    }
  }
  if (checked == 0) law.fail("no grade pair within the enumeration budget");
  return law.report();
}

LawReport check_psi_surjective(const CanonicalGrading& c, const GradedOp& psi, const std::vector<GradeObject>& grades) {
  LawCheck law("psi-surjective");
  const auto& ops = c.ops();
  const auto& m = c.monad();
  for (const auto& s : grades) {
    for (const auto& x : ops.readback_probes()) {
      try {
        auto factors = psi_domain(c, psi, s, x);
        if (product_size(factors) > fill_budget) continue;
        std::set<Computation> image;
        for_each_tuple(factors, [&](std::span<const Computation> args) {
          image.insert(psi.psi(s, x, args));
          return true;
        });
        for (const auto& t : ops.mkS(c.tensor(psi.output, s), x.size()))
          law.expect(image.count(t) > 0, "S=" + ops.label(s) + " X=" + x.to_string() + " misses " + m.format(t, x));
      } catch (const Error& e) {
        if (!is_bound(e)) throw;
      }
      if (law.failed()) return law.report();
    }
  }
  return law.report();
}

LawReport check_universal(const CanonicalGrading& c, const AlgebraicOp& op, const std::vector<GradeObject>& inputs,
                          const GradedOp& psi_prime, const std::vector<GradeObject>& grades) {
  const auto& ops = c.ops();
  require_monoidal(ops);
  if (psi_prime.inputs != inputs) throw Error(ErrorCode::not_a_grading, "ψ' has different input grades");
  LawReport graded = check_grades_op(c, psi_prime, op, grades);
  if (!graded.pass) throw Error(ErrorCode::not_a_grading, "ψ' does not grade " + op.name + ": " + *graded.counterexample);

  LawCheck law("universal");
  const PMorphism p = canonical_p(ops, op, inputs);
  law.expect(ops.leq(p.output, psi_prime.output),
             "R'=" + ops.label(p.output) + " not below R''=" + ops.label(psi_prime.output));
  if (law.failed()) return law.report();
  const GradedOp psi = psi_from_p(c, op, p);
  LawReport same = compare_graded(c, psi, psi_prime, grades, "universal");
  if (!same.pass) law.fail(*same.counterexample);
  return law.report();
}

}  // namespace gm
