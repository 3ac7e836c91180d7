#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gm/finset.hpp"
#include "gm/law_report.hpp"
#include "gm/monad.hpp"
#include "gm/subfunctor.hpp"

namespace gm {

/// An endofunctor on finite sets, presented by its action on any set and map.
class Functor {
 public:
  virtual ~Functor() = default;
  virtual FinSet obj(const FinSet& x) const = 0;
  virtual FinFn arr(const FinFn& f) const = 0;
  virtual std::string name() const = 0;
};

using FunctorPtr = std::shared_ptr<const Functor>;

FunctorPtr identity_functor();
FunctorPtr constant_functor(FinSet k);
/// f ∘ g
FunctorPtr composite_functor(FunctorPtr f, FunctorPtr g);
FunctorPtr monad_functor(MonadInstance m);
/// Picks the atoms of parent X to keep: mask[i] for the i-th atom of parent X.
using Selector = std::function<std::vector<char>(const FinSet& x, const FinSet& parent_x)>;

/// The subfunctor of parent picked out by a selector. arr throws
/// not_functorial when the selection is not closed under parent maps.
FunctorPtr sub_functor(FunctorPtr parent, Selector keep, std::string name);
/// mkS(Σ) as a subfunctor of T.
FunctorPtr grade_functor(const GradeOps& ops, const GradeObject& g);

/// The terminal probe.
const FinSet& terminal_set();

struct NatTrans {
  FunctorPtr source;
  FunctorPtr target;
  std::function<FinFn(const FinSet&)> component;
  std::string name;

  FinFn at(const FinSet& x) const { return component(x); }
};

NatTrans identity_nat(FunctorPtr f);
/// Inclusion of a subfunctor whose atoms are atoms of the parent.
NatTrans inclusion_nat(FunctorPtr sub, FunctorPtr parent);
/// S · t, with components S(t_X).
NatTrans whisker_left(FunctorPtr s, const NatTrans& t);
/// t · S, with components t_{S X}.
NatTrans whisker_right(const NatTrans& t, FunctorPtr s);

/// Sets of sizes 0..k (atoms a0, a1, ...) and every function between them.
struct ProbeUniverse {
  std::vector<FinSet> sets;
  std::vector<FinFn> morphisms;
};

ProbeUniverse make_universe(std::size_t k);

LawReport check_naturality(const NatTrans& t, const ProbeUniverse& u);
/// Every naturality square over the universe is a pullback.
bool is_cartesian(const NatTrans& t, const ProbeUniverse& u);
LawReport cartesian_report(const NatTrans& t, const ProbeUniverse& u);
/// F sends pullbacks of cospans between sets of size ≤ max_size to pullbacks.
bool is_functor_cartesian(const FunctorPtr& f, std::size_t max_size);

struct ShapewiseFactorization {
  FunctorPtr mid;
  NatTrans e;
  NatTrans m;
};

/// Factorizes the component at 1 and pulls its image back along T! to every X.
ShapewiseFactorization factorize_shapewise(const NatTrans& t);
/// The componentwise image of t as a subfunctor of its target.
FunctorPtr image_functor(const NatTrans& t);

/// e ∈ E′: the component at 1 is surjective.
bool in_e_prime(const NatTrans& e);
/// m ∈ M′ on the universe: cartesian with injective component at 1.
bool in_m_prime(const NatTrans& m, const ProbeUniverse& u);

/// Componentwise and shapewise factorizations of t have equal middles.
/// Throws precondition_failed unless t, its source and target are cartesian.
LawReport check_coincidence(const NatTrans& t, const ProbeUniverse& u, std::size_t cospan_size = 2);

/// Pullbacks of surjections along arbitrary maps are surjections (sizes ≤ max_size).
LawReport check_stability(std::size_t max_size = 3);

/// For m cartesian into a cartesian functor, the source is cartesian.
/// Throws precondition_failed when the hypotheses fail.
LawReport check_cartesian_closure(const NatTrans& m, const ProbeUniverse& u, std::size_t cospan_size = 2);

/// Subfunctors pulled back from subsets A ⊆ T1 are cartesian, have component
/// A at 1, and coincide with the canonical shape grade of A; so M′-subobjects
/// of T correspond exactly to subsets of T1. List and state-shapewise only.
LawReport check_shape_equivalence(const GradeOps& ops, const ProbeUniverse& u);

}  // namespace gm
