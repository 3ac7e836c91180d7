#include "gm/monad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gm/error.hpp"

namespace gm {

std::string_view to_string(MonadKind kind) {
  switch (kind) {
    case MonadKind::writer: return "writer";
    case MonadKind::reader: return "reader";
    case MonadKind::state: return "state";
    case MonadKind::list: return "list";
  }
  return "?";
}

std::string_view to_string(GradeKind kind) {
  switch (kind) {
    case GradeKind::writer: return "writer";
    case GradeKind::reader: return "reader";
    case GradeKind::state_componentwise: return "state-componentwise";
    case GradeKind::state_shapewise: return "state-shapewise";
    case GradeKind::list: return "list";
  }
  return "?";
}

// ---------------------------------------------------------------- Monoid

Monoid::Monoid(FinSet elements, std::string_view unit, std::vector<std::size_t> table)
    : elements_(std::move(elements)), table_(std::move(table)) {
  unit_ = elements_.index_of(unit);
  if (table_.size() != size() * size())
    throw Error(ErrorCode::invalid_argument, "monoid table must have |M|^2 entries");
  for (auto c : table_)
    if (c >= size()) throw Error(ErrorCode::invalid_argument, "monoid table value outside M");
}

Monoid Monoid::cyclic(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "Z_0 is not a monoid");
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back(std::to_string(i));
  FinSet elements(atoms);
  std::vector<std::size_t> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      table[elements.index_of(atoms[a]) * n + elements.index_of(atoms[b])] =
          elements.index_of(atoms[(a + b) % n]);
  return Monoid(elements, "0", table);
}

std::vector<LawReport> Monoid::check_laws() const {
  LawCheck unit_law("monoid-unit");
  LawCheck assoc("monoid-associativity");
  const auto& m = elements_;
  for (std::size_t a = 0; a < size(); ++a)
    if (multiply(unit_, a) != a || multiply(a, unit_) != a) unit_law.fail("(" + m[a] + ")");
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b)
      for (std::size_t c = 0; c < size(); ++c)
        if (multiply(multiply(a, b), c) != multiply(a, multiply(b, c)))
          assoc.fail("(" + m[a] + "," + m[b] + "," + m[c] + ")");
  return {unit_law.report(), assoc.report()};
}

// ---------------------------------------------------------------- construction

MonadInstance MonadInstance::writer(Monoid monoid) {
  MonadInstance m;
  m.kind_ = MonadKind::writer;
  m.grade_kind_ = GradeKind::writer;
  m.monoid_ = std::move(monoid);
  return m;
}

MonadInstance MonadInstance::reader(FinSet states) {
  if (states.empty()) throw Error(ErrorCode::invalid_argument, "reader needs at least one state");
  MonadInstance m;
  m.kind_ = MonadKind::reader;
  m.grade_kind_ = GradeKind::reader;
  m.states_ = std::move(states);
  return m;
}

MonadInstance MonadInstance::state(FinSet states, GradeKind grading) {
  if (states.empty()) throw Error(ErrorCode::invalid_argument, "state needs at least one state");
  if (grading != GradeKind::state_componentwise && grading != GradeKind::state_shapewise)
    throw Error(ErrorCode::invalid_argument, "state grading must be componentwise or shapewise");
  MonadInstance m;
  m.kind_ = MonadKind::state;
  m.grade_kind_ = grading;
  m.states_ = std::move(states);
  return m;
}

MonadInstance MonadInstance::list(std::size_t bound) {
  MonadInstance m;
  m.kind_ = MonadKind::list;
  m.grade_kind_ = GradeKind::list;
  m.bound_ = bound;
  return m;
}

std::string MonadInstance::name() const {
  switch (kind_) {
    case MonadKind::writer: return "writer" + monoid_.elements().to_string();
    case MonadKind::reader: return "reader" + states_.to_string();
    case MonadKind::state:
      return std::string(grade_kind_ == GradeKind::state_shapewise ? "state-shapewise" : "state-componentwise") +
             states_.to_string();
    case MonadKind::list: return "list<=" + std::to_string(bound_);
  }
  return "?";
}

// ---------------------------------------------------------------- enumeration

namespace {

/// Odometer over fixed-length tuples with per-position radix.
template <typename Visit>
void odometer(const std::vector<std::size_t>& radix, Visit&& visit) {
  for (auto r : radix)
    if (r == 0) return;
  std::vector<std::size_t> cur(radix.size(), 0);
  while (true) {
    visit(cur);
    std::size_t i = cur.size();
    while (i > 0) {
      --i;
      if (++cur[i] < radix[i]) break;
      cur[i] = 0;
      if (i == 0) return;
    }
    if (cur.empty()) return;
  }
}

}  // namespace

std::vector<Computation> MonadInstance::enumerate(std::size_t x) const {
  std::vector<Computation> out;
  auto push = [&](const std::vector<std::size_t>& cells) { out.push_back(Computation{cells}); };
  const std::size_t n = states_.size();
  switch (kind_) {
    case MonadKind::writer: odometer({monoid_.size(), x}, push); break;
    case MonadKind::reader: odometer(std::vector<std::size_t>(n, x), push); break;
    case MonadKind::state: {
      std::vector<std::size_t> radix(2 * n, x);
      std::fill(radix.begin(), radix.begin() + static_cast<std::ptrdiff_t>(n), n);
      odometer(radix, push);
      break;
    }
    case MonadKind::list:
      for (std::size_t len = 0; len <= bound_; ++len) {
        if (len == 0) {
          out.push_back(Computation{});
          continue;
        }
        odometer(std::vector<std::size_t>(len, x), push);
      }
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

double MonadInstance::count(std::size_t x) const {
  const double n = static_cast<double>(states_.size());
  const double xs = static_cast<double>(x);
  switch (kind_) {
    case MonadKind::writer: return static_cast<double>(monoid_.size()) * xs;
    case MonadKind::reader: return std::pow(xs, n);
    case MonadKind::state: return std::pow(n * xs, n);
    case MonadKind::list: {
      double total = 0, term = 1;
      for (std::size_t len = 0; len <= bound_; ++len) {
        total += term;
        term *= xs;
      }
      return total;
    }
  }
  return 0;
}

bool MonadInstance::well_typed(const Computation& t, std::size_t x) const {
  const auto& c = t.cells;
  const std::size_t n = states_.size();
  auto below = [&](std::size_t from, std::size_t to, std::size_t limit) {
    return std::all_of(c.begin() + static_cast<std::ptrdiff_t>(from), c.begin() + static_cast<std::ptrdiff_t>(to),
                       [&](std::size_t v) { return v < limit; });
  };
  switch (kind_) {
    case MonadKind::writer: return c.size() == 2 && c[0] < monoid_.size() && c[1] < x;
    case MonadKind::reader: return c.size() == n && below(0, n, x);
    case MonadKind::state: return c.size() == 2 * n && below(0, n, n) && below(n, 2 * n, x);
    case MonadKind::list: return c.size() <= bound_ && below(0, c.size(), x);
  }
  return false;
}

Computation MonadInstance::random(std::size_t x, std::mt19937_64& rng) const {
  auto pick = [&](std::size_t limit) { return std::uniform_int_distribution<std::size_t>(0, limit - 1)(rng); };
  if (x == 0 && kind_ != MonadKind::list)
    throw Error(ErrorCode::invalid_argument, "T(empty) has no elements to sample");
  Computation t;
  const std::size_t n = states_.size();
  switch (kind_) {
    case MonadKind::writer: t.cells = {pick(monoid_.size()), pick(x)}; break;
    case MonadKind::reader:
      for (std::size_t v = 0; v < n; ++v) t.cells.push_back(pick(x));
      break;
    case MonadKind::state:
      for (std::size_t v = 0; v < n; ++v) t.cells.push_back(pick(n));
      for (std::size_t v = 0; v < n; ++v) t.cells.push_back(pick(x));
      break;
    case MonadKind::list: {
      std::size_t len = x == 0 ? 0 : pick(bound_ + 1);
      for (std::size_t i = 0; i < len; ++i) t.cells.push_back(pick(x));
      break;
    }
  }
  return t;
}

// ---------------------------------------------------------------- monad structure

Computation MonadInstance::eta(std::size_t x) const {
  const std::size_t n = states_.size();
  switch (kind_) {
    case MonadKind::writer: return Computation{{monoid_.unit(), x}};
    case MonadKind::reader: return Computation{std::vector<std::size_t>(n, x)};
    case MonadKind::state: {
      Computation t;
      for (std::size_t v = 0; v < n; ++v) t.cells.push_back(v);
      for (std::size_t v = 0; v < n; ++v) t.cells.push_back(x);
      return t;
    }
    case MonadKind::list:
      if (bound_ < 1) throw Error(ErrorCode::bound_exceeded, "list bound 0 has no singleton lists");
      return Computation{{x}};
  }
  return {};
}

Computation MonadInstance::mu(const Computation& outer, std::span<const Computation> inner) const {
  const std::size_t n = states_.size();
  switch (kind_) {
    case MonadKind::writer: {
      const auto& g = inner[outer.cells[1]];
      return Computation{{monoid_.multiply(outer.cells[0], g.cells[0]), g.cells[1]}};
    }
    case MonadKind::reader: {
      Computation t;
      t.cells.resize(n);
      for (std::size_t v = 0; v < n; ++v) t.cells[v] = inner[outer.cells[v]].cells[v];
      return t;
    }
    case MonadKind::state: {
      // μ f v = g v' where (v', g) = f v
      Computation t;
      t.cells.resize(2 * n);
      for (std::size_t v = 0; v < n; ++v) {
        const std::size_t v1 = outer.cells[v];
        const auto& g = inner[outer.cells[n + v]];
        t.cells[v] = g.cells[v1];
        t.cells[n + v] = g.cells[n + v1];
      }
      return t;
    }
    case MonadKind::list: {
      Computation t;
      for (auto i : outer.cells) {
        const auto& xs = inner[i].cells;
        if (t.cells.size() + xs.size() > bound_)
          throw Error(ErrorCode::bound_exceeded, "flattened list longer than " + std::to_string(bound_));
        t.cells.insert(t.cells.end(), xs.begin(), xs.end());
      }
      return t;
    }
  }
  return {};
}

Computation MonadInstance::fmap(std::span<const std::size_t> f, const Computation& t) const {
  Computation out = t;
  const std::size_t n = states_.size();
  switch (kind_) {
    case MonadKind::writer: out.cells[1] = f[t.cells[1]]; break;
    case MonadKind::reader:
    case MonadKind::list:
      for (auto& c : out.cells) c = f[c];
      break;
    case MonadKind::state:
      for (std::size_t v = 0; v < n; ++v) out.cells[n + v] = f[t.cells[n + v]];
      break;
  }
  return out;
}

std::vector<std::size_t> MonadInstance::next_states(const Computation& t) const {
  if (kind_ != MonadKind::state) throw Error(ErrorCode::kind_mismatch, "next_states needs the state monad");
  return {t.cells.begin(), t.cells.begin() + static_cast<std::ptrdiff_t>(states_.size())};
}

std::vector<std::size_t> MonadInstance::outputs(const Computation& t) const {
  switch (kind_) {
    case MonadKind::reader: return t.cells;
    case MonadKind::state:
      return {t.cells.begin() + static_cast<std::ptrdiff_t>(states_.size()), t.cells.end()};
    default: throw Error(ErrorCode::kind_mismatch, "outputs needs the reader or state monad");
  }
}

// ---------------------------------------------------------------- text form

namespace {

std::string_view trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\n");
  if (a == std::string_view::npos) return {};
  return s.substr(a, s.find_last_not_of(" \t\n") - a + 1);
}

}  // namespace

std::vector<std::string> split_top_level(std::string_view text, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char ch : text) {
    if (ch == '(' || ch == '[' || ch == '{') ++depth;
    if (ch == ')' || ch == ']' || ch == '}') --depth;
    if (depth < 0) throw Error(ErrorCode::parse_error, "unbalanced brackets in '" + std::string(text) + "'");
    if (ch == sep && depth == 0) {
      parts.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (depth != 0) throw Error(ErrorCode::parse_error, "unbalanced brackets in '" + std::string(text) + "'");
  parts.emplace_back(trim(cur));
  return parts;
}

namespace {

std::string_view strip(std::string_view s, char open, char close) {
  s = trim(s);
  if (s.size() < 2 || s.front() != open || s.back() != close)
    throw Error(ErrorCode::parse_error, "expected " + std::string(1, open) + "..." + std::string(1, close) +
                                            " in '" + std::string(s) + "'");
  return s.substr(1, s.size() - 2);
}

std::size_t lookup(const FinSet& set, const std::string& atom, std::string_view what) {
  if (auto i = set.find(atom)) return *i;
  throw Error(ErrorCode::parse_error, "unknown " + std::string(what) + " '" + atom + "'");
}

}  // namespace

std::string MonadInstance::format(const Computation& t, const FinSet& x) const {
  std::string s;
  const std::size_t n = states_.size();
  switch (kind_) {
    case MonadKind::writer:
      return "(" + monoid_.elements()[t.cells[0]] + "," + x[t.cells[1]] + ")";
    case MonadKind::reader:
      s = "{";
      for (std::size_t v = 0; v < n; ++v) s += (v ? "," : "") + states_[v] + ":" + x[t.cells[v]];
      return s + "}";
    case MonadKind::state:
      s = "{";
      for (std::size_t v = 0; v < n; ++v)
        s += (v ? "," : "") + states_[v] + ":(" + states_[t.cells[v]] + "," + x[t.cells[n + v]] + ")";
      return s + "}";
    case MonadKind::list:
      s = "[";
      for (std::size_t i = 0; i < t.cells.size(); ++i) s += (i ? "," : "") + x[t.cells[i]];
      return s + "]";
  }
  return s;
}

Computation MonadInstance::parse(std::string_view text, const FinSet& x) const {
  const std::size_t n = states_.size();
  Computation t;
  switch (kind_) {
    case MonadKind::writer: {
      auto parts = split_top_level(strip(text, '(', ')'), ',');
      if (parts.size() != 2) throw Error(ErrorCode::parse_error, "writer element is (z,x)");
      t.cells = {lookup(monoid_.elements(), parts[0], "monoid element"), lookup(x, parts[1], "value")};
      return t;
    }
    case MonadKind::reader:
    case MonadKind::state: {
      const bool is_state = kind_ == MonadKind::state;
      auto body = strip(text, '{', '}');
      auto entries = body.empty() ? std::vector<std::string>{} : split_top_level(body, ',');
      std::vector<std::size_t> next(n, n), out(n, 0);
      for (const auto& entry : entries) {
        auto kv = split_top_level(entry, ':');
        if (kv.size() != 2) throw Error(ErrorCode::parse_error, "expected state:value in '" + entry + "'");
        auto v = lookup(states_, kv[0], "state");
        if (next[v] != n) throw Error(ErrorCode::parse_error, "state '" + kv[0] + "' given twice");
        if (is_state) {
          auto pair = split_top_level(strip(kv[1], '(', ')'), ',');
          if (pair.size() != 2) throw Error(ErrorCode::parse_error, "state entry is s:(s',x)");
          next[v] = lookup(states_, pair[0], "state");
          out[v] = lookup(x, pair[1], "value");
        } else {
          next[v] = 0;
          out[v] = lookup(x, kv[1], "value");
        }
      }
      if (std::find(next.begin(), next.end(), n) != next.end())
        throw Error(ErrorCode::parse_error, "element must be defined on every state");
      if (is_state) t.cells = next;
      t.cells.insert(t.cells.end(), out.begin(), out.end());
      return t;
    }
    case MonadKind::list: {
      auto body = strip(text, '[', ']');
      if (!body.empty())
        for (const auto& item : split_top_level(body, ',')) t.cells.push_back(lookup(x, item, "value"));
      if (t.cells.size() > bound_)
        throw Error(ErrorCode::bound_exceeded, "list longer than bound " + std::to_string(bound_));
      return t;
    }
  }
  return t;
}

Carrier MonadInstance::carrier(const FinSet& x, std::vector<Computation> elements) const {
  std::vector<std::pair<std::string, Computation>> keyed;
  keyed.reserve(elements.size());
  for (auto& e : elements) keyed.emplace_back(format(e, x), std::move(e));
  std::sort(keyed.begin(), keyed.end());
  keyed.erase(std::unique(keyed.begin(), keyed.end()), keyed.end());
  Carrier c;
  std::vector<std::string> atoms;
  for (auto& [k, e] : keyed) {
    atoms.push_back(k);
    c.elements.push_back(std::move(e));
  }
  c.atoms = FinSet(std::move(atoms));
  return c;
}

// ---------------------------------------------------------------- laws

std::vector<LawReport> MonadInstance::check_laws(const MonadLawOptions& options) const {
  std::vector<LawReport> reports;
  if (kind_ == MonadKind::writer)
    for (auto& r : monoid_.check_laws()) reports.push_back(std::move(r));

  const FinSet probe = FinSet::numbered("x", kind_ == MonadKind::reader ? 2 : 1);
  const auto tx = enumerate(probe.size());
  auto show = [&](const Computation& t) { return format(t, probe); };

  LawCheck left_unit("monad-left-unit");    // μ ∘ η_T = id
  LawCheck right_unit("monad-right-unit");  // μ ∘ T η = id
  std::vector<Computation> etas;
  for (std::size_t x = 0; x < probe.size(); ++x) etas.push_back(eta(x));
  std::vector<std::size_t> eta_index(probe.size());
  for (std::size_t x = 0; x < probe.size(); ++x) eta_index[x] = x;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    try {
      if (mu(eta(i), tx) != tx[i]) left_unit.fail(show(tx[i]));
      if (mu(fmap(eta_index, tx[i]), etas) != tx[i]) right_unit.fail(show(tx[i]));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::bound_exceeded) throw;
    }
  }
  reports.push_back(left_unit.report());
  reports.push_back(right_unit.report());

  // μ ∘ μT = μ ∘ Tμ on T(T(T X)). Elements of the nested carriers are kept as
  // index-level computations; no printing is needed.
  LawCheck assoc("monad-associativity");
  // Prints an element of T(T(T X)) with every level spelled out.
  auto show_nested = [&](const Computation& outer, std::span<const Computation> middle) {
    auto relabel = [&](const FinSet& inner_set, std::span<const Computation> inner) {
      Carrier c = carrier(inner_set, std::vector<Computation>(inner.begin(), inner.end()));
      std::vector<std::size_t> f(inner.size());
      for (std::size_t i = 0; i < inner.size(); ++i)
        f[i] = static_cast<std::size_t>(std::find(c.elements.begin(), c.elements.end(), inner[i]) - c.elements.begin());
      return std::pair{c.atoms, f};
    };
    auto [tx_set, f1] = relabel(probe, tx);
    std::vector<Computation> mids;
    for (const auto& m : middle) mids.push_back(fmap(f1, m));
    auto [mid_set, f2] = relabel(tx_set, mids);
    return format(fmap(f2, outer), mid_set);
  };
  const auto ttx_count = count(tx.size());
  const auto tttx_count = count(static_cast<std::size_t>(std::min(ttx_count, 1e9)));
  auto check_one = [&](const Computation& outer, std::span<const Computation> middle) {
    try {
      auto lhs = mu(mu(outer, middle), tx);
      std::vector<Computation> flattened;
      flattened.reserve(middle.size());
      for (const auto& m : middle) flattened.push_back(mu(m, tx));
      auto rhs = mu(outer, flattened);
      if (lhs != rhs) {
        std::ostringstream w;
        w << "t=" << show_nested(outer, middle) << " lhs=" << show(lhs) << " rhs=" << show(rhs);
        assoc.fail(w.str());
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::bound_exceeded) throw;
    }
  };
  if (tttx_count <= options.exhaustive_limit) {
    const auto ttx = enumerate(tx.size());
    for (const auto& outer : enumerate(ttx.size())) check_one(outer, ttx);
  } else {
    std::mt19937_64 rng(options.seed);
    // A sampled outer element only touches as many middle elements as it has
    // cells, so draw those on the fly.
    for (std::size_t s = 0; s < options.samples; ++s) {
      const std::size_t slots = 2 * std::max<std::size_t>(states_.size(), 2) + bound_;
      std::vector<Computation> middle;
      for (std::size_t k = 0; k < slots; ++k) middle.push_back(random(tx.size(), rng));
      check_one(random(slots, rng), middle);
    }
  }
  reports.push_back(assoc.report());
  return reports;
}

}  // namespace gm
