#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sigmacat/colim.hpp"
#include "sigmacat/fincat.hpp"
#include "sigmacat/twocat.hpp"
#include "sigmacat/verdict.hpp"

namespace sigmacat {

  ////////////////////////////////////////////////////////////////////////
  // Primitives
  ////////////////////////////////////////////////////////////////////////

  // C × D with objects "(x,y)" and morphisms "(f,g)".
  struct Product {
    CatPtr  left, right;
    CatPtr  category;
    Functor first, second;

    obj_t object(obj_t x, obj_t y) const {
      return x * right->num_objects() + y;
    }
    mor_t morphism(mor_t f, mor_t g) const {
      return f * right->num_morphisms() + g;
    }
  };

  Product biproduct(CatPtr const& C, CatPtr const& D);

  // ⟨F, G⟩: X → C × D.
  Functor pair_functor(Product const& P, Functor const& F, Functor const& G);

  // Pairs (a, θ: F(a) ≅ G(a)) and the morphisms of A commuting with θ.
  struct Biequalizer {
    Functor  F, G;
    CatPtr   category;
    Functor  projection;
    // θ: F p ⇒ G p.
    NatTrans theta;

    std::optional<obj_t> find(obj_t a, mor_t theta) const;
    // The morphism over f between two objects, if f commutes with them.
    std::optional<mor_t> lift(mor_t f, obj_t x, obj_t y) const;

    std::map<std::pair<obj_t, mor_t>, obj_t>        objects;
    std::map<std::array<std::uint32_t, 3>, mor_t>   morphisms;
  };

  Biequalizer biequalizer(Functor const& F, Functor const& G);

  // [2, C]: objects the morphisms of C, morphisms commuting squares (u, v).
  struct ArrowCotensor {
    CatPtr   base;
    CatPtr   category;
    Functor  dom, cod;
    // dom ⇒ cod with component f at f.
    NatTrans arrow;

    std::optional<mor_t> square(mor_t u, mor_t v, obj_t f, obj_t g) const;

    std::map<std::array<std::uint32_t, 4>, mor_t> squares;
  };

  ArrowCotensor arrow_cotensor(CatPtr const& C);

  // [2, F]: [2, C] → [2, D].
  Functor cotensor_functor(ArrowCotensor const& A,
                           ArrowCotensor const& B,
                           Functor const&       F);

  struct PseudoLimit {
    CatPseudoFunctor diagram;
    CatPtr           category;
    // Per object, the family (A_i) and per 1-cell the iso α_d.
    std::vector<std::vector<obj_t>> families;
    std::vector<std::vector<mor_t>> cocycles;
    std::vector<Functor>            projections;
    // Per 1-cell d: i → j, the invertible α_d: F(d) p_i ⇒ p_j.
    std::vector<NatTrans> cells;
  };

  inline constexpr std::size_t DEFAULT_PSEUDOLIMIT_BOUND = 1'000'000;

  // Families with α_1 = unit⁻¹, α_{ed} ∘ c_{e,d} = α_e ∘ F(e)(α_d) and
  // α_{d'} ∘ F(γ) = α_d for γ: d ⇒ d'. Throws SizeLimitError once the
  // search visits more than `bound` nodes.
  PseudoLimit pseudolimit_cocycle(CatPseudoFunctor const& F,
                                  std::size_t bound = DEFAULT_PSEUDOLIMIT_BOUND);

  ////////////////////////////////////////////////////////////////////////
  // Pseudoidempotents
  ////////////////////////////////////////////////////////////////////////

  struct Pseudoidempotent {
    CatPtr   carrier;
    Functor  endo;
    // υ: e ∘ e ⇒ e, invertible.
    NatTrans mult;

    // Throws ValidationError unless e is an endofunctor and υ an
    // invertible e e ⇒ e.
    static Pseudoidempotent make(Functor endo, NatTrans mult);
  };

  struct Splitting {
    CatPtr   category;
    Functor  r, s;
    // e ⇒ s r and r s ⇒ 1_B.
    NatTrans alpha, beta;
    // The υ' with e υ' = υ' e used to build B; υ itself when coherent.
    NatTrans coherent_mult;
  };

  // B is the full subcategory of the iso-inserter of (e, 1) on the
  // (a, μ) with e(μ) = υ'_a.
  Splitting split_pseudoidempotent(Pseudoidempotent const& P);

  Verdict check_splitting(Pseudoidempotent const& P, Splitting const& S);

  ////////////////////////////////////////////////////////////////////////
  // Pointwise limits of diagrams and commutation
  ////////////////////////////////////////////////////////////////////////

  struct PointwiseProduct {
    CatPseudoFunctor     diagram;
    std::vector<Product> fibers;
  };

  PointwiseProduct pointwise_product(CatPseudoFunctor const& F,
                                     CatPseudoFunctor const& G);

  struct PointwiseBiequalizer {
    CatPseudoFunctor         diagram;
    std::vector<Biequalizer> fibers;
  };

  // For strict transformations P, Q: F ⇒ G given by functor components.
  PointwiseBiequalizer pointwise_biequalizer(CatPseudoFunctor const&     F,
                                             CatPseudoFunctor const&     G,
                                             std::vector<Functor> const& P,
                                             std::vector<Functor> const& Q);

  struct PointwiseCotensor {
    CatPseudoFunctor           diagram;
    std::vector<ArrowCotensor> fibers;
  };

  PointwiseCotensor pointwise_cotensor(CatPseudoFunctor const& F);

  struct Commutation {
    // colim of the pointwise limit → limit of the colimits.
    Functor         comparison;
    FunctorAnalysis analysis;
    Verdict         verdict;
  };

  Commutation commute_product(CatPseudoFunctor const& F,
                              CatPseudoFunctor const& G);
  Commutation commute_biequalizer(CatPseudoFunctor const&     F,
                                  CatPseudoFunctor const&     G,
                                  std::vector<Functor> const& P,
                                  std::vector<Functor> const& Q);
  Commutation commute_cotensor(CatPseudoFunctor const& F);

}  // namespace sigmacat
