#include "gm/subfunctor.hpp"

#include <algorithm>
#include <cmath>

#include "gm/error.hpp"

namespace gm {

namespace {

bool is_state_kind(GradeKind k) {
  return k == GradeKind::state_componentwise || k == GradeKind::state_shapewise;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

nlohmann::json relation_json(const EquivRel& r) {
  auto blocks = nlohmann::json::array();
  for (const auto& block : r.blocks()) {
    auto b = nlohmann::json::array();
    for (auto i : block) b.push_back(r.carrier()[i]);
    blocks.push_back(b);
  }
  return blocks;
}

EquivRel relation_from_json(const FinSet& v, const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorCode::parse_error, "relation must be a list of blocks");
  std::vector<std::vector<std::string>> blocks;
  for (const auto& b : j) blocks.push_back(b.get<std::vector<std::string>>());
  return EquivRel(v, blocks);
}

/// Outputs respect R: related states give equal outputs.
bool outputs_respect(const std::vector<std::size_t>& out, const EquivRel& r) {
  for (std::size_t a = 0; a < out.size(); ++a)
    for (std::size_t b = a + 1; b < out.size(); ++b)
      if (r.related(a, b) && out[a] != out[b]) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------- universe

GradeUniverse::GradeUniverse(const MonadInstance& m) : kind_(m.grade_kind()), states_(m.states()) {
  switch (kind_) {
    case GradeKind::writer:
      monoid_ = m.monoid().elements();
      size_ = monoid_.size();
      break;
    case GradeKind::list: size_ = m.bound() + 1; break;
    case GradeKind::reader:
    case GradeKind::state_componentwise:
    case GradeKind::state_shapewise:
      if (kind_ != GradeKind::state_shapewise) {
        relations_ = equiv_lattice(states_);
        for (const auto& r : relations_) {
          std::vector<std::size_t> ups;
          for (std::size_t j = 0; j < relations_.size(); ++j)
            if (r.subset_of(relations_[j])) ups.push_back(j);
          up_.push_back(std::move(ups));
        }
      }
      if (kind_ != GradeKind::reader) {
        for (const auto& f : all_functions(states_, states_)) endos_.push_back(f.map());
        Endo id(states_.size());
        for (std::size_t v = 0; v < id.size(); ++v) id[v] = v;
        identity_ = endo_index(id);
      }
      size_ = kind_ == GradeKind::reader                ? relations_.size()
              : kind_ == GradeKind::state_shapewise     ? endos_.size()
                                                        : endos_.size() * relations_.size();
      break;
  }
}

std::size_t GradeUniverse::endo_index(const Endo& p) const {
  std::size_t idx = 0;
  const std::size_t n = states_.size();
  if (p.size() != n) throw Error(ErrorCode::invalid_argument, "shape has the wrong arity");
  for (auto v : p) {
    if (v >= n) throw Error(ErrorCode::invalid_argument, "shape value outside V");
    idx = idx * n + v;
  }
  return idx;
}

std::size_t GradeUniverse::relation_index(const EquivRel& r) const {
  auto it = std::lower_bound(relations_.begin(), relations_.end(), r);
  if (it == relations_.end() || !(*it == r))
    throw Error(ErrorCode::invalid_argument, "relation not over the state set");
  return static_cast<std::size_t>(it - relations_.begin());
}

std::size_t GradeUniverse::constant_endo(std::size_t v) const {
  return endo_index(Endo(states_.size(), v));
}

std::string GradeUniverse::endo_label(std::size_t p) const {
  const auto& f = endos_.at(p);
  if (p == identity_) return "id";
  if (std::all_of(f.begin(), f.end(), [&](std::size_t v) { return v == f[0]; }))
    return "c" + std::to_string(f[0]);
  std::vector<std::string> parts;
  for (auto v : f) parts.push_back(states_[v]);
  return "[" + join(parts, ",") + "]";
}

std::string GradeUniverse::atom_label(std::size_t atom) const {
  switch (kind_) {
    case GradeKind::writer: return monoid_[atom];
    case GradeKind::list: return std::to_string(atom);
    case GradeKind::reader: return relations_.at(atom).to_string();
    case GradeKind::state_shapewise: return endo_label(atom);
    case GradeKind::state_componentwise:
      return "(" + endo_label(pair_endo(atom)) + "," + relations_[pair_relation(atom)].to_string() + ")";
  }
  return "?";
}

bool grade_order(const GradeObject& a, const GradeObject& b) {
  if (a.atoms.size() != b.atoms.size()) return a.atoms.size() < b.atoms.size();
  return a.atoms < b.atoms;
}

// ---------------------------------------------------------------- grade ops

GradeOps::GradeOps(MonadInstance m) : monad_(std::move(m)), universe_(monad_) {}

void GradeOps::check_kind(const GradeObject& g) const {
  if (g.kind != kind())
    throw Error(ErrorCode::kind_mismatch, std::string("grade of kind ") + std::string(to_string(g.kind)) +
                                              " used with " + std::string(to_string(kind())));
}

std::vector<std::size_t> GradeOps::up_close(std::vector<std::size_t> atoms) const {
  std::vector<std::size_t> out;
  switch (kind()) {
    case GradeKind::reader:
      for (auto r : atoms)
        for (auto r2 : universe_.up_[r]) out.push_back(r2);
      break;
    case GradeKind::state_componentwise:
      for (auto a : atoms)
        for (auto r2 : universe_.up_[universe_.pair_relation(a)])
          out.push_back(universe_.pair_atom(universe_.pair_endo(a), r2));
      break;
    default: out = std::move(atoms);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool GradeOps::is_canonical(const GradeObject& g) const {
  if (g.kind != kind()) return false;
  if (!std::is_sorted(g.atoms.begin(), g.atoms.end())) return false;
  if (std::adjacent_find(g.atoms.begin(), g.atoms.end()) != g.atoms.end()) return false;
  if (!g.atoms.empty() && g.atoms.back() >= universe_.size()) return false;
  return up_close(g.atoms) == g.atoms;
}

GradeObject GradeOps::make(std::vector<std::size_t> atoms) const {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  GradeObject g{kind(), std::move(atoms)};
  if (!is_canonical(g)) throw Error(ErrorCode::invalid_argument, "grade is not canonical: " + label(g));
  return g;
}

GradeObject GradeOps::full() const {
  GradeObject g{kind(), std::vector<std::size_t>(universe_.size())};
  for (std::size_t i = 0; i < g.atoms.size(); ++i) g.atoms[i] = i;
  return g;
}

bool GradeOps::leq(const GradeObject& a, const GradeObject& b) const {
  check_kind(a);
  check_kind(b);
  return std::includes(b.atoms.begin(), b.atoms.end(), a.atoms.begin(), a.atoms.end());
}

GradeObject GradeOps::meet(const GradeObject& a, const GradeObject& b) const {
  check_kind(a);
  check_kind(b);
  GradeObject g{kind(), {}};
  std::set_intersection(a.atoms.begin(), a.atoms.end(), b.atoms.begin(), b.atoms.end(),
                        std::back_inserter(g.atoms));
  return g;
}

std::vector<FinSet> GradeOps::probes() const {
  switch (kind()) {
    case GradeKind::writer: return {FinSet{}, FinSet::numbered("x", 1), FinSet::numbered("x", 2)};
    case GradeKind::list: return {FinSet::numbered("x", 1), FinSet::numbered("x", 2)};
    case GradeKind::state_shapewise: return {FinSet::numbered("x", 1)};
    case GradeKind::reader:
    case GradeKind::state_componentwise: {
      std::vector<FinSet> out;
      for (const auto& r : universe_.relations()) out.push_back(quotient(monad_.states(), r).set);
      auto atoms = monad_.states().elements();
      atoms.push_back("*");
      out.emplace_back(atoms);
      return out;
    }
  }
  return {};
}

std::vector<FinSet> GradeOps::readback_probes() const {
  auto all = probes();
  switch (kind()) {
    case GradeKind::writer: return {all[1]};
    case GradeKind::reader:
    case GradeKind::state_componentwise: all.pop_back(); return all;
    default: return {all[0]};
  }
}

bool GradeOps::member(const GradeObject& g, const Computation& t, std::size_t x_size) const {
  check_kind(g);
  if (!monad_.well_typed(t, x_size)) throw Error(ErrorCode::kind_mismatch, "element is not in T X");
  auto has = [&](std::size_t atom) { return std::binary_search(g.atoms.begin(), g.atoms.end(), atom); };
  switch (kind()) {
    case GradeKind::writer: return has(t.cells[0]);
    case GradeKind::list: return has(t.cells.size());
    case GradeKind::state_shapewise: return has(universe_.endo_index(monad_.next_states(t)));
    case GradeKind::reader: {
      // f respects some R ∈ Σ
      const auto out = monad_.outputs(t);
      return std::any_of(g.atoms.begin(), g.atoms.end(),
                         [&](std::size_t r) { return outputs_respect(out, universe_.relations()[r]); });
    }
    case GradeKind::state_componentwise: {
      // some (p, R) ∈ Σ with p = π1 ∘ f and π2 ∘ f respecting R
      const auto p = universe_.endo_index(monad_.next_states(t));
      const auto out = monad_.outputs(t);
      return std::any_of(g.atoms.begin(), g.atoms.end(), [&](std::size_t a) {
        return universe_.pair_endo(a) == p && outputs_respect(out, universe_.relations()[universe_.pair_relation(a)]);
      });
    }
  }
  return false;
}

std::vector<Computation> GradeOps::mkS(const GradeObject& g, std::size_t x_size) const {
  check_kind(g);
  std::vector<Computation> out;
  for (auto& t : monad_.enumerate(x_size))
    if (member(g, t, x_size)) out.push_back(std::move(t));
  return out;
}

ProbeFamily GradeOps::mkS_family(const GradeObject& g) const {
  ProbeFamily family;
  for (const auto& x : probes()) family.push_back({x, mkS(g, x.size())});
  return family;
}

Element GradeOps::generic_element(std::size_t atom) const {
  const std::size_t n = monad_.states().size();
  Element e;
  switch (kind()) {
    case GradeKind::writer:
      e.probe = FinSet::numbered("x", 1);
      e.value.cells = {atom, 0};
      break;
    case GradeKind::list:
      e.probe = FinSet::numbered("x", 1);
      e.value.cells.assign(atom, 0);
      break;
    case GradeKind::state_shapewise:
      e.probe = FinSet::numbered("x", 1);
      e.value.cells = universe_.endos()[atom];
      e.value.cells.resize(2 * n, 0);
      break;
    case GradeKind::reader: {
      auto q = quotient(monad_.states(), universe_.relations()[atom]);
      e.probe = q.set;
      e.value.cells = q.proj.map();
      break;
    }
    case GradeKind::state_componentwise: {
      auto q = quotient(monad_.states(), universe_.relations()[universe_.pair_relation(atom)]);
      e.probe = q.set;
      e.value.cells = universe_.endos()[universe_.pair_endo(atom)];
      for (auto c : q.proj.map()) e.value.cells.push_back(c);
      break;
    }
  }
  return e;
}

GradeObject GradeOps::read_grade(const std::function<bool(const FinSet&, const Computation&)>& contains) const {
  GradeObject g{kind(), {}};
  for (std::size_t atom = 0; atom < universe_.size(); ++atom) {
    auto e = generic_element(atom);
    if (contains(e.probe, e.value)) g.atoms.push_back(atom);
  }
  return g;
}

GradeObject GradeOps::mkSigma(const ProbeFamily& family) const {
  const auto expected = probes();
  if (family.size() != expected.size())
    throw Error(ErrorCode::invalid_argument, "family must give one component per standard probe");
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!(family[i].probe == expected[i]))
      throw Error(ErrorCode::invalid_argument, "unexpected probe " + family[i].probe.to_string());
    if (!std::is_sorted(family[i].elements.begin(), family[i].elements.end()))
      throw Error(ErrorCode::invalid_argument, "component elements must be sorted");
    for (const auto& t : family[i].elements)
      if (!monad_.well_typed(t, expected[i].size()))
        throw Error(ErrorCode::kind_mismatch, "component element is not in T X");
  }
  auto in = [&](std::size_t i, const Computation& t) {
    return std::binary_search(family[i].elements.begin(), family[i].elements.end(), t);
  };
  // x ∈ S X implies T f x ∈ S Y
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j)
      for (const auto& f : all_functions(expected[i], expected[j]))
        for (const auto& t : family[i].elements) {
          auto image = monad_.fmap(f, t);
          if (!in(j, image))
            throw Error(ErrorCode::not_functorial,
                        "T f sends " + monad_.format(t, expected[i]) + " to " + monad_.format(image, expected[j]) +
                            " outside the family, f = " + f.to_string());
        }
  auto g = read_grade([&](const FinSet& probe, const Computation& t) {
    for (std::size_t i = 0; i < family.size(); ++i)
      if (family[i].probe == probe) return in(i, t);
    return false;
  });
  if (!is_canonical(g) || mkS_family(g).size() != family.size())
    throw Error(ErrorCode::not_functorial, "family is not the restriction of a canonical grade");
  auto back = mkS_family(g);
  for (std::size_t i = 0; i < family.size(); ++i)
    if (back[i].elements != family[i].elements)
      throw Error(ErrorCode::not_functorial,
                  "family differs from the subfunctor of its grade at probe " + expected[i].to_string());
  return g;
}

GradeObject GradeOps::principal(const Computation& t, std::size_t x_size) const {
  if (!monad_.well_typed(t, x_size)) throw Error(ErrorCode::kind_mismatch, "element is not in T X");
  auto kernel_index = [&] {
    return universe_.relation_index(EquivRel::from_labels(monad_.states(), monad_.outputs(t)));
  };
  switch (kind()) {
    case GradeKind::writer: return {kind(), {t.cells[0]}};
    case GradeKind::list: return {kind(), {t.cells.size()}};
    case GradeKind::state_shapewise: return {kind(), {shape_atom(t)}};
    case GradeKind::reader: return {kind(), up_close({kernel_index()})};
    case GradeKind::state_componentwise:
      return {kind(), up_close({universe_.pair_atom(shape_atom(t), kernel_index())})};
  }
  return {};
}

namespace {

/// All up-closed subsets of the relation order, as sorted index lists.
std::vector<std::vector<std::size_t>> up_sets(const std::vector<std::vector<std::size_t>>& up) {
  const std::size_t n = up.size();
  if (n > 20) throw Error(ErrorCode::bound_exceeded, "too many equivalence relations to enumerate up-sets");
  std::vector<std::vector<std::size_t>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    bool closed = true;
    for (std::size_t r = 0; r < n && closed; ++r)
      if (mask >> r & 1)
        for (auto r2 : up[r])
          if (!(mask >> r2 & 1)) {
            closed = false;
            break;
          }
    if (!closed) continue;
    std::vector<std::size_t> s;
    for (std::size_t r = 0; r < n; ++r)
      if (mask >> r & 1) s.push_back(r);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

double GradeOps::grade_count() const {
  const double size = static_cast<double>(universe_.size());
  switch (kind()) {
    case GradeKind::writer:
    case GradeKind::list:
    case GradeKind::state_shapewise: return std::pow(2.0, size);
    case GradeKind::reader:
    case GradeKind::state_componentwise: {
      const auto& up = universe_.up_;
      // Above 20 relations this is only an upper bound.
      double per = up.size() > 20 ? std::pow(2.0, static_cast<double>(up.size()))
                                  : static_cast<double>(up_sets(up).size());
      if (kind() == GradeKind::reader) return per;
      return std::pow(per, static_cast<double>(universe_.endos().size()));
    }
  }
  return 0;
}

std::vector<GradeObject> GradeOps::enumerate_grades(std::size_t limit) const {
  const double count = grade_count();
  if (count > static_cast<double>(limit))
    throw Error(ErrorCode::bound_exceeded, "grade carrier has " + std::to_string(count) + " grades, bound is " +
                                               std::to_string(limit));
  std::vector<GradeObject> out;
  switch (kind()) {
    case GradeKind::writer:
    case GradeKind::list:
    case GradeKind::state_shapewise: {
      const std::size_t n = universe_.size();
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        GradeObject g{kind(), {}};
        for (std::size_t i = 0; i < n; ++i)
          if (mask >> i & 1) g.atoms.push_back(i);
        out.push_back(std::move(g));
      }
      break;
    }
    case GradeKind::reader:
      for (auto& s : up_sets(universe_.up_)) out.push_back({kind(), std::move(s)});
      break;
    case GradeKind::state_componentwise: {
      const auto sets = up_sets(universe_.up_);
      const std::size_t shapes = universe_.endos().size();
      std::vector<std::size_t> choice(shapes, 0);
      while (true) {
        GradeObject g{kind(), {}};
        for (std::size_t p = 0; p < shapes; ++p)
          for (auto r : sets[choice[p]]) g.atoms.push_back(universe_.pair_atom(p, r));
        out.push_back(std::move(g));
        std::size_t i = 0;
        while (i < shapes && ++choice[i] == sets.size()) choice[i++] = 0;
        if (i == shapes) break;
      }
      break;
    }
  }
  std::sort(out.begin(), out.end(), grade_order);
  return out;
}

std::string GradeOps::label(const GradeObject& g) const {
  std::vector<std::string> parts;
  for (auto a : g.atoms) parts.push_back(a < universe_.size() ? universe_.atom_label(a) : "?");
  return "{" + join(parts, ",") + "}";
}

nlohmann::json GradeOps::to_json(const GradeObject& g) const {
  check_kind(g);
  nlohmann::json j;
  j["kind"] = std::string(to_string(kind()));
  const auto& v = monad_.states();
  auto shape_json = [&](std::size_t p) {
    nlohmann::json s = nlohmann::json::object();
    const auto& f = universe_.endos()[p];
    for (std::size_t i = 0; i < f.size(); ++i) s[v[i]] = v[f[i]];
    return s;
  };
  auto arr = nlohmann::json::array();
  switch (kind()) {
    case GradeKind::writer:
      for (auto a : g.atoms) arr.push_back(monad_.monoid().elements()[a]);
      j["elements"] = arr;
      break;
    case GradeKind::list:
      for (auto a : g.atoms) arr.push_back(a);
      j["lengths"] = arr;
      break;
    case GradeKind::reader:
      for (auto a : g.atoms) arr.push_back(relation_json(universe_.relations()[a]));
      j["relations"] = arr;
      break;
    case GradeKind::state_shapewise:
      for (auto a : g.atoms) arr.push_back(shape_json(a));
      j["shapes"] = arr;
      break;
    case GradeKind::state_componentwise:
      for (auto a : g.atoms)
        arr.push_back({{"shape", shape_json(universe_.pair_endo(a))},
                       {"relation", relation_json(universe_.relations()[universe_.pair_relation(a)])}});
      j["pairs"] = arr;
      break;
  }
  return j;
}

GradeObject GradeOps::from_json(const nlohmann::json& j) const {
  try {
    const auto kind_name = j.at("kind").get<std::string>();
    if (kind_name != to_string(kind()))
      throw Error(ErrorCode::kind_mismatch, "grade kind " + kind_name + " does not match " +
                                                std::string(to_string(kind())));
    const auto& v = monad_.states();
    auto shape_from = [&](const nlohmann::json& s) {
      Endo p(v.size(), v.size());
      for (auto it = s.begin(); it != s.end(); ++it) p[v.index_of(it.key())] = v.index_of(it.value().get<std::string>());
      if (std::find(p.begin(), p.end(), v.size()) != p.end())
        throw Error(ErrorCode::parse_error, "shape must be defined on every state");
      return universe_.endo_index(p);
    };
    std::vector<std::size_t> atoms;
    switch (kind()) {
      case GradeKind::writer:
        for (const auto& e : j.at("elements")) atoms.push_back(monad_.monoid().elements().index_of(e.get<std::string>()));
        break;
      case GradeKind::list:
        for (const auto& n : j.at("lengths")) {
          auto len = n.get<std::size_t>();
          if (len > monad_.bound()) throw Error(ErrorCode::bound_exceeded, "length above the list bound");
          atoms.push_back(len);
        }
        break;
      case GradeKind::reader:
        for (const auto& r : j.at("relations")) atoms.push_back(universe_.relation_index(relation_from_json(v, r)));
        break;
      case GradeKind::state_shapewise:
        for (const auto& s : j.at("shapes")) atoms.push_back(shape_from(s));
        break;
      case GradeKind::state_componentwise:
        for (const auto& pr : j.at("pairs"))
          atoms.push_back(universe_.pair_atom(shape_from(pr.at("shape")),
                                              universe_.relation_index(relation_from_json(v, pr.at("relation")))));
        break;
    }
    // Listed relations act as generators of an up-closed set.
    return make(up_close(std::move(atoms)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("grade JSON: ") + e.what());
  }
}

Endo GradeOps::endo_of(const Computation& t) const { return monad_.next_states(t); }

std::size_t GradeOps::shape_atom(const Computation& t) const {
  if (!is_state_kind(kind())) throw Error(ErrorCode::kind_mismatch, "shapes exist only for state");
  return universe_.endo_index(monad_.next_states(t));
}

}  // namespace gm
