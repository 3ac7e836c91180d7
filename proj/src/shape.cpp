#include "gm/shape.hpp"

#include <algorithm>

#include "gm/error.hpp"

namespace gm {

namespace {

class IdentityFunctor final : public Functor {
 public:
  FinSet obj(const FinSet& x) const override { return x; }
  FinFn arr(const FinFn& f) const override { return f; }
  std::string name() const override { return "Id"; }
};

class ConstantFunctor final : public Functor {
 public:
  explicit ConstantFunctor(FinSet k) : k_(std::move(k)) {}
  FinSet obj(const FinSet&) const override { return k_; }
  FinFn arr(const FinFn&) const override { return FinFn::identity(k_); }
  std::string name() const override { return "K" + k_.to_string(); }

 private:
  FinSet k_;
};

class CompositeFunctor final : public Functor {
 public:
  CompositeFunctor(FunctorPtr f, FunctorPtr g) : f_(std::move(f)), g_(std::move(g)) {}
  FinSet obj(const FinSet& x) const override { return f_->obj(g_->obj(x)); }
  FinFn arr(const FinFn& h) const override { return f_->arr(g_->arr(h)); }
  std::string name() const override { return f_->name() + "." + g_->name(); }

 private:
  FunctorPtr f_, g_;
};

class MonadFunctor final : public Functor {
 public:
  explicit MonadFunctor(MonadInstance m) : m_(std::move(m)) {}
  FinSet obj(const FinSet& x) const override { return m_.full_carrier(x).atoms; }
  FinFn arr(const FinFn& f) const override {
    const auto dom = m_.full_carrier(f.dom());
    const auto cod = obj(f.cod());
    std::vector<std::size_t> map;
    map.reserve(dom.elements.size());
    for (const auto& t : dom.elements) map.push_back(cod.index_of(m_.format(m_.fmap(f, t), f.cod())));
    return FinFn(dom.atoms, cod, std::move(map));
  }
  std::string name() const override { return "T"; }

 private:
  MonadInstance m_;
};

class SubFunctor final : public Functor {
 public:
  SubFunctor(FunctorPtr parent, Selector keep, std::string name)
      : parent_(std::move(parent)), keep_(std::move(keep)), name_(std::move(name)) {}

  FinSet obj(const FinSet& x) const override { return select(x, parent_->obj(x)); }

  FinFn arr(const FinFn& f) const override {
    const auto pf = parent_->arr(f);
    const auto dom = select(f.dom(), pf.dom());
    const auto cod = select(f.cod(), pf.cod());
    std::vector<std::size_t> map;
    for (const auto& atom : dom) {
      const auto& image = pf.apply(atom);
      auto i = cod.find(image);
      if (!i)
        throw Error(ErrorCode::not_functorial,
                    name_ + " is not closed under " + f.to_string() + ": " + atom + " goes to " + image);
      map.push_back(*i);
    }
    return FinFn(dom, cod, std::move(map));
  }

  std::string name() const override { return name_; }

 private:
  FinSet select(const FinSet& x, const FinSet& px) const {
    const auto mask = keep_(x, px);
    std::vector<std::string> atoms;
    for (std::size_t i = 0; i < px.size(); ++i)
      if (mask.at(i)) atoms.push_back(px[i]);
    return FinSet(std::move(atoms));
  }

  FunctorPtr parent_;
  Selector keep_;
  std::string name_;
};

std::string subset_label(const FinSet& all, const std::vector<char>& mask) {
  std::vector<std::string> picked;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (mask[i]) picked.push_back(all[i]);
  return FinSet(picked).to_string();
}

}  // namespace

FunctorPtr identity_functor() { return std::make_shared<IdentityFunctor>(); }
FunctorPtr constant_functor(FinSet k) { return std::make_shared<ConstantFunctor>(std::move(k)); }
FunctorPtr composite_functor(FunctorPtr f, FunctorPtr g) {
  return std::make_shared<CompositeFunctor>(std::move(f), std::move(g));
}
FunctorPtr monad_functor(MonadInstance m) { return std::make_shared<MonadFunctor>(std::move(m)); }
FunctorPtr sub_functor(FunctorPtr parent, Selector keep, std::string name) {
  return std::make_shared<SubFunctor>(std::move(parent), std::move(keep), std::move(name));
}

FunctorPtr grade_functor(const GradeOps& ops, const GradeObject& g) {
  const auto m = ops.monad();
  auto keep = [ops, g, m](const FinSet& x, const FinSet& px) {
    std::vector<char> mask(px.size());
    for (std::size_t i = 0; i < px.size(); ++i) mask[i] = ops.member(g, m.parse(px[i], x), x.size());
    return mask;
  };
  return sub_functor(monad_functor(m), keep, "S" + ops.label(g));
}

const FinSet& terminal_set() {
  static const FinSet one{"*"};
  return one;
}

NatTrans identity_nat(FunctorPtr f) {
  return {f, f, [f](const FinSet& x) { return FinFn::identity(f->obj(x)); }, "id"};
}

NatTrans inclusion_nat(FunctorPtr sub, FunctorPtr parent) {
  auto component = [sub, parent](const FinSet& x) {
    const auto s = sub->obj(x);
    const auto p = parent->obj(x);
    std::vector<std::size_t> map;
    for (const auto& atom : s) map.push_back(p.index_of(atom));
    return FinFn(s, p, std::move(map));
  };
  return {sub, parent, component, "incl " + sub->name()};
}

NatTrans whisker_left(FunctorPtr s, const NatTrans& t) {
  auto c = t.component;
  return {composite_functor(s, t.source), composite_functor(s, t.target),
          [s, c](const FinSet& x) { return s->arr(c(x)); }, s->name() + "." + t.name};
}

NatTrans whisker_right(const NatTrans& t, FunctorPtr s) {
  auto c = t.component;
  return {composite_functor(t.source, s), composite_functor(t.target, s),
          [s, c](const FinSet& x) { return c(s->obj(x)); }, t.name + "." + s->name()};
}

ProbeUniverse make_universe(std::size_t k) {
  ProbeUniverse u;
  for (std::size_t i = 0; i <= k; ++i) u.sets.push_back(FinSet::numbered("a", i));
  for (const auto& x : u.sets)
    for (const auto& y : u.sets)
      for (auto& f : all_functions(x, y)) u.morphisms.push_back(std::move(f));
  return u;
}

LawReport check_naturality(const NatTrans& t, const ProbeUniverse& u) {
  LawCheck check("naturality");
  for (const auto& f : u.morphisms)
    if (!(compose(t.at(f.cod()), t.source->arr(f)) == compose(t.target->arr(f), t.at(f.dom())))) {
      check.fail("f=" + f.to_string());
      break;
    }
  return check.report();
}

LawReport cartesian_report(const NatTrans& t, const ProbeUniverse& u) {
  LawCheck check("cartesian");
  for (const auto& f : u.morphisms)
    if (!is_pullback_square(t.at(f.dom()), t.source->arr(f), t.target->arr(f), t.at(f.cod()))) {
      check.fail("f=" + f.to_string());
      break;
    }
  return check.report();
}

bool is_cartesian(const NatTrans& t, const ProbeUniverse& u) { return cartesian_report(t, u).pass; }

bool is_functor_cartesian(const FunctorPtr& f, std::size_t max_size) {
  const auto u = make_universe(max_size);
  for (const auto& z : u.sets)
    for (const auto& x : u.sets)
      for (const auto& y : u.sets)
        for (const auto& g1 : all_functions(x, z))
          for (const auto& g2 : all_functions(y, z)) {
            const auto pb = pullback(g1, g2);
            if (!is_pullback_square(f->arr(pb.p1), f->arr(pb.p2), f->arr(g1), f->arr(g2))) return false;
          }
  return true;
}

ShapewiseFactorization factorize_shapewise(const NatTrans& t) {
  const auto& one = terminal_set();
  const auto fact = factorize_surj_inj(t.at(one));
  const FinSet image = fact.mid;
  const FunctorPtr target = t.target;
  // mid X = T!^{-1}(image at 1), i.e. the pullback of m_1 along T!.
  auto keep = [target, image](const FinSet& x, const FinSet& px) {
    const auto bang = target->arr(FinFn::to_terminal(x, terminal_set()));
    std::vector<char> mask(px.size());
    for (std::size_t i = 0; i < px.size(); ++i) mask[i] = image.contains(bang.cod()[bang(i)]);
    return mask;
  };
  ShapewiseFactorization out;
  out.mid = sub_functor(target, keep, "shape-image(" + t.name + ")");
  auto mid = out.mid;
  auto c = t.component;
  out.e = {t.source, mid,
           [mid, c](const FinSet& x) {
             const auto tx = c(x);
             const auto mx = mid->obj(x);
             std::vector<std::size_t> map;
             for (std::size_t i = 0; i < tx.dom().size(); ++i) {
               auto j = mx.find(tx.cod()[tx(i)]);
               if (!j) throw Error(ErrorCode::not_functorial, "component leaves the shape image");
               map.push_back(*j);
             }
             return FinFn(tx.dom(), mx, std::move(map));
           },
           "e(" + t.name + ")"};
  out.m = inclusion_nat(mid, target);
  return out;
}

FunctorPtr image_functor(const NatTrans& t) {
  auto c = t.component;
  auto keep = [c](const FinSet& x, const FinSet& px) {
    const auto tx = c(x);
    std::vector<char> mask(px.size());
    for (auto i : tx.image_indices()) mask[px.index_of(tx.cod()[i])] = 1;
    return mask;
  };
  return sub_functor(t.target, keep, "image(" + t.name + ")");
}

bool in_e_prime(const NatTrans& e) { return e.at(terminal_set()).is_surjective(); }

bool in_m_prime(const NatTrans& m, const ProbeUniverse& u) {
  return m.at(terminal_set()).is_injective() && is_cartesian(m, u);
}

LawReport check_coincidence(const NatTrans& t, const ProbeUniverse& u, std::size_t cospan_size) {
  if (!is_cartesian(t, u)) throw Error(ErrorCode::precondition_failed, t.name + " is not cartesian");
  if (!is_functor_cartesian(t.source, cospan_size))
    throw Error(ErrorCode::precondition_failed, t.source->name() + " does not preserve pullbacks");
  if (!is_functor_cartesian(t.target, cospan_size))
    throw Error(ErrorCode::precondition_failed, t.target->name() + " does not preserve pullbacks");
  const auto shapewise = factorize_shapewise(t);
  const auto componentwise = image_functor(t);
  LawCheck check("coincidence");
  for (const auto& x : u.sets)
    if (!(shapewise.mid->obj(x) == componentwise->obj(x))) {
      check.fail(t.name + " at " + x.to_string());
      break;
    }
  return check.report();
}

LawReport check_stability(std::size_t max_size) {
  LawCheck check("stability");
  const auto u = make_universe(max_size);
  for (const auto& a : u.sets)
    for (const auto& b : u.sets)
      for (const auto& e : all_functions(a, b)) {
        if (!e.is_surjective()) continue;
        for (const auto& c : u.sets)
          for (const auto& g : all_functions(c, b)) {
            const auto pb = pullback(e, g);
            if (!pb.p2.is_surjective()) check.fail("e=" + e.to_string() + " g=" + g.to_string());
          }
      }
  return check.report();
}

LawReport check_cartesian_closure(const NatTrans& m, const ProbeUniverse& u, std::size_t cospan_size) {
  if (!is_cartesian(m, u)) throw Error(ErrorCode::precondition_failed, m.name + " is not cartesian");
  if (!is_functor_cartesian(m.target, cospan_size))
    throw Error(ErrorCode::precondition_failed, m.target->name() + " does not preserve pullbacks");
  LawCheck check("cartesian-closure");
  if (!is_functor_cartesian(m.source, cospan_size)) check.fail(m.source->name());
  return check.report();
}

LawReport check_shape_equivalence(const GradeOps& ops, const ProbeUniverse& u) {
  if (ops.kind() != GradeKind::list && ops.kind() != GradeKind::state_shapewise)
    throw Error(ErrorCode::unsupported_kind, "shape grades exist for list and state-shapewise only");
  const auto& one = terminal_set();
  const auto t = monad_functor(ops.monad());
  const auto t1 = t->obj(one);
  if (t1.size() > 16) throw Error(ErrorCode::bound_exceeded, "T1 too large to enumerate its subsets");

  LawCheck check("shape-equivalence");
  auto pulled_back = [&](const std::vector<char>& mask) {
    FinSet image;
    {
      std::vector<std::string> atoms;
      for (std::size_t i = 0; i < t1.size(); ++i)
        if (mask[i]) atoms.push_back(t1[i]);
      image = FinSet(atoms);
    }
    // The inclusion of A into T1, extended along T!.
    auto a_functor = sub_functor(
        t,
        [t, image](const FinSet& x, const FinSet& px) {
          const auto bang = t->arr(FinFn::to_terminal(x, terminal_set()));
          std::vector<char> keep(px.size());
          for (std::size_t i = 0; i < px.size(); ++i) keep[i] = image.contains(bang.cod()[bang(i)]);
          return keep;
        },
        "pullback" + image.to_string());
    return std::pair{a_functor, image};
  };

  // Subsets of T1 give cartesian subfunctors with the right component at 1,
  // and these are exactly the canonical shape grades.
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << t1.size()) && !check.failed(); ++bits) {
    std::vector<char> mask(t1.size());
    for (std::size_t i = 0; i < t1.size(); ++i) mask[i] = bits >> i & 1;
    auto [s, image] = pulled_back(mask);
    const auto witness = "A=" + subset_label(t1, mask);
    const auto inc = inclusion_nat(s, t);
    if (!in_m_prime(inc, u)) {
      check.fail(witness + " not in M'");
      break;
    }
    if (!(s->obj(one) == image)) {
      check.fail(witness + " component at 1 differs");
      break;
    }
    const auto grade = ops.read_grade([&](const FinSet& x, const Computation& c) {
      return s->obj(x).contains(ops.monad().format(c, x));
    });
    const auto g = grade_functor(ops, grade);
    for (const auto& x : u.sets)
      if (!(g->obj(x) == s->obj(x))) {
        check.fail(witness + " differs from its canonical grade at " + x.to_string());
        break;
      }
  }
  // Every canonical grade is pulled back from its own component at 1.
  for (const auto& grade : ops.enumerate_grades(1u << 16)) {
    if (check.failed()) break;
    const auto g = grade_functor(ops, grade);
    const auto at_one = g->obj(one);
    std::vector<char> mask(t1.size());
    for (std::size_t i = 0; i < t1.size(); ++i) mask[i] = at_one.contains(t1[i]);
    auto [s, image] = pulled_back(mask);
    for (const auto& x : u.sets)
      if (!(g->obj(x) == s->obj(x))) {
        check.fail("grade " + ops.label(grade) + " is not pulled back from T1 at " + x.to_string());
        break;
      }
  }
  return check.report();
}

}  // namespace gm
