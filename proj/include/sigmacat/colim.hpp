#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "sigmacat/fincat.hpp"
#include "sigmacat/twocat.hpp"
#include "sigmacat/verdict.hpp"

namespace sigmacat {

  ////////////////////////////////////////////////////////////////////////
  // Elements
  ////////////////////////////////////////////////////////////////////////

  // The Grothendieck construction of F: 0-cells (i, a), 1-cells (f, φ)
  // with φ: F(f)(a) → a', and 2-cells the base 2-cells α: f ⇒ f' with
  // φ' ∘ F(α)_a = φ.
  struct ElementsCat {
    TwoCatPtr        base;
    CatPseudoFunctor functor;
    TwoCatPtr        total;
    TwoFunctor       projection;
    // Per 0-cell of total.
    std::vector<std::pair<zero_t, obj_t>> objects;
    // Per 1-cell of total: the pair (f, φ).
    std::vector<std::pair<one_t, mor_t>> arrows;
    // Per 1-cell of total: φ is invertible.
    std::vector<bool> opcartesian;

    zero_t     object(zero_t i, obj_t a) const;
    SigmaClass opcartesian_class() const;
  };

  ElementsCat elements_category(CatPseudoFunctor const& F);

  ////////////////////////////////////////////////////////////////////////
  // Premorphisms and the colimit category
  ////////////////////////////////////////////////////////////////////////

  // A span-presented morphism (i1, a1) → (i2, a2): legs s: i1 → j and
  // d: i2 → j, and φ: F(s)(a1) → F(d)(a2) in F(j).
  struct Premorphism {
    zero_t i1;
    obj_t  a1;
    zero_t i2;
    obj_t  a2;
    one_t  left;
    one_t  right;
    mor_t  cell;

    auto operator<=>(Premorphism const&) const = default;
  };

  struct ColimitOptions {
    std::size_t premorphism_bound = 2'000'000;
    // Exhaustive associativity check of the result.
    bool verify = true;
  };

  class Quotient;

  // The colimit of F over (I, S) with its cocone. The objects of `result`
  // are all pairs (i, a); morphisms are classes of premorphisms.
  struct ColimitCat {
    TwoCatPtr        index;
    SigmaClass       sigma;
    CatPseudoFunctor diagram;
    CatPtr           result;
    // Per result object, the pair (i, a).
    std::vector<std::pair<zero_t, obj_t>> objects;
    // Per result morphism, its canonical representative.
    std::vector<Premorphism> representatives;
    // q_i: F(i) → result.
    std::vector<Functor> legs;
    // Per index 1-cell d: i → j, θ_d: q_j F(d) ⇒ q_i.
    std::vector<NatTrans> transitions;

    obj_t object(zero_t i, obj_t a) const;
    // The class of p; throws PreconditionError if p is not a premorphism
    // of this colimit.
    mor_t class_of(Premorphism const& p) const;
    bool  is_premorphism(Premorphism const& p) const;
    // A representative of g ∘ f computed by amalgamating the spans.
    Premorphism compose(Premorphism const& q, Premorphism const& p) const;
    // Every premorphism, in enumeration order.
    std::vector<Premorphism> premorphisms() const;

    std::shared_ptr<Quotient const> quotient;
  };

  // Requires a bifiltered index.
  ColimitCat bifiltered_bicolimit(CatPseudoFunctor const& F,
                                  ColimitOptions const&   options = {});

  // Bifiltered colimit of F restricted to the Σ-subcategory, with
  // transitions at 1-cells outside Σ from triangle completions. S is
  // closed first; requires (I, S̄) σ-filtered.
  ColimitCat sigma_bicolimit(CatPseudoFunctor const& F,
                             SigmaClass const&       S,
                             ColimitOptions const&   options = {});

  // The same colimit computed directly from premorphisms with left leg in
  // Σ and arbitrary right leg.
  ColimitCat direct_sigma_bicolimit(CatPseudoFunctor const& F,
                                    SigmaClass const&       S,
                                    ColimitOptions const&   options = {});

  bool premorphism_equal(ColimitCat const&  C,
                         Premorphism const& p,
                         Premorphism const& q);

  // The premorphism (i, 1, 1, F(1)(f)) representing q_i(f).
  Premorphism fiber_premorphism(CatPseudoFunctor const& F, zero_t i, mor_t f);

  ////////////////////////////////////////////////////////////////////////
  // Cocones
  ////////////////////////////////////////////////////////////////////////

  // Legs L_i: F(i) → X and, per index 1-cell d: i → j, a cell
  // λ_d: L_j F(d) ⇒ L_i.
  struct Cocone {
    CatPtr                apex;
    std::vector<Functor>  legs;
    std::vector<NatTrans> cells;
  };

  // λ_d invertible for d in S; compatibility with units, composites and
  // 2-cells of the index.
  Verdict check_sigma_cocone(CatPseudoFunctor const& F,
                             SigmaClass const&       S,
                             Cocone const&           K);

  Cocone colimit_cocone(ColimitCat const& C);

  struct Factorization {
    Functor functor;
    // Per index 0-cell, the invertible comparison H q_i ⇒ L_i.
    std::vector<NatTrans> comparisons;
  };

  // The functor H: result → X through which K factors. Throws
  // ValidationError for an invalid cocone.
  Factorization factor_cocone(ColimitCat const& C, Cocone const& K);

  // The functor colim F → colim G induced by a strict transformation with
  // functor components P_i: F(i) → G(i).
  Functor map_colimit(ColimitCat const&           CF,
                      ColimitCat const&           CG,
                      std::vector<Functor> const& components);

}  // namespace sigmacat
