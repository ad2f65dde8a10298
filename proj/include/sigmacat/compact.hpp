#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sigmacat/colim.hpp"
#include "sigmacat/fincat.hpp"
#include "sigmacat/verdict.hpp"

namespace sigmacat {

  // a ≅ q_i b via the invertible β: q_i b ⇒ a.
  struct OneCellLift {
    zero_t   index;
    Functor  b;
    NatTrans beta;
  };

  // Two lifts of the same a made equal at a common stage: legs
  // s: i → k, s': i' → k and an invertible γ: F(s) b ⇒ F(s') b' with
  // β' · θ_{s'} b' · q_k γ = β · θ_s b.
  struct Refinement {
    zero_t   stage;
    one_t    left, right;
    NatTrans gamma;
  };

  // φ: a ⇒ a' lifted along lifts L of a and L' of a': legs d: i → k,
  // d': i' → k and ψ: F(d) b ⇒ F(d') b' with
  // β' · θ_{d'} b' · q_k ψ = φ · β · θ_d b.
  struct TwoCellLift {
    OneCellLift source, target;
    zero_t      stage;
    one_t       left, right;
    NatTrans    psi;
  };

  // φ, φ': a ⇒ a' lifted over a single common span.
  struct ParallelLift {
    OneCellLift source, target;
    zero_t      stage;
    one_t       left, right;
    NatTrans    zeta, xi;
  };

  // Searches the stages in order; a strict factorization (β an identity)
  // is preferred when one exists. Throws SearchExhausted if no lift
  // exists and PreconditionError unless a lands in C.result.
  OneCellLift lift_one_cell(ColimitCat const& C, Functor const& a);

  bool check_one_cell_lift(ColimitCat const&  C,
                           Functor const&     a,
                           OneCellLift const& L);

  Refinement refine_lifts(ColimitCat const&  C,
                          OneCellLift const& L,
                          OneCellLift const& L2);

  bool check_refinement(ColimitCat const&  C,
                        OneCellLift const& L,
                        OneCellLift const& L2,
                        Refinement const&  R);

  TwoCellLift lift_two_cell(ColimitCat const& C, NatTrans const& phi);
  TwoCellLift lift_two_cell(ColimitCat const&  C,
                            NatTrans const&    phi,
                            OneCellLift const& source,
                            OneCellLift const& target);

  bool check_two_cell_lift(ColimitCat const&  C,
                           NatTrans const&    phi,
                           TwoCellLift const& L);

  ParallelLift lift_parallel_pair(ColimitCat const& C,
                                  NatTrans const&   phi,
                                  NatTrans const&   phi2);

  bool check_parallel_lift(ColimitCat const&   C,
                           NatTrans const&     phi,
                           NatTrans const&     phi2,
                           ParallelLift const& L);

  struct CompactOptions {
    std::size_t functor_bound = DEFAULT_FUNCTOR_CATEGORY_BOUND;
    ColimitOptions colimit{};
    // Compare against Fun(K, sk colim F), equivalent to Fun(K, colim F)
    // through the skeleton retraction and far smaller.
    bool skeletal_target = true;
  };

  struct BicompactReport {
    // i ↦ Fun(K, F(i)) with post-composition.
    CatPseudoFunctor diagram;
    ColimitCat       colimit;
    // Fun(K, colim F), or Fun(K, sk colim F) with skeletal_target.
    FunctorCategory  target;
    // colim Fun(K, F(i)) → target.
    Functor         comparison;
    FunctorAnalysis analysis;
    Verdict         verdict;
  };

  // Evidence for this diagram only: bicompactness quantifies over every
  // small bifiltered index. Requires a bifiltered index; throws
  // SizeLimitError past the functor bound.
  BicompactReport check_bicompact_against(CatPtr const&           K,
                                          CatPseudoFunctor const& F,
                                          CompactOptions const&   options = {});

  // K' a pseudoretract of K: r: K → K', s: K' → K, α: r s ≅ 1.
  struct Pseudoretract {
    CatPtr   whole, part;
    Functor  r, s;
    NatTrans alpha;
  };

  // Throws ValidationError unless the data form a pseudoretract.
  void validate_pseudoretract(Pseudoretract const& P);

  // Positive iff bicompactness of K against F carries over to K'; both
  // outcomes are recorded as notes.
  Verdict check_pseudoretract_transfer(Pseudoretract const&    P,
                                       CatPseudoFunctor const& F,
                                       CompactOptions const&   options = {});

}  // namespace sigmacat
