#pragma once

#include <vector>

#include "sigmacat/colim.hpp"
#include "sigmacat/twocat.hpp"
#include "sigmacat/verdict.hpp"

namespace sigmacat {

  // C(c, −): hom-categories, post-composition and whiskering.
  CatPseudoFunctor representable_pseudofunctor(TwoCatPtr const& C, zero_t c);

  // σ-filteredness of the 1-cell dual of the elements 2-category with
  // respect to the opcartesian 1-cells. An empty elements 2-category is
  // not flat.
  Verdict check_flat(CatPseudoFunctor const& F);

  // The elements side of a flatness check.
  struct ElementsDual {
    ElementsCat elements;
    // 1-cells reversed; 1-cells and 2-cells keep their names.
    TwoCatPtr  dual;
    SigmaClass opcartesian;
    // dual 1-cell → elements 1-cell, dual 2-cell → elements 2-cell.
    std::vector<one_t> one_to_total;
    std::vector<two_t> two_to_total;
  };

  ElementsDual elements_dual(CatPseudoFunctor const& F);

  struct Reconstruction {
    // The opcartesian sub-2-category of the dual.
    TwoCatPtr index;
    Verdict   index_bifiltered;
    // Per base 0-cell j, when the index is bifiltered.
    std::vector<CatPseudoFunctor> diagrams;
    std::vector<ColimitCat>       colimits;
    // The functor colim_{(i,a)} C(i, j) → F(j) induced by s ↦ F(s)(a).
    std::vector<Functor> comparisons;
    std::vector<Verdict> pointwise;
    // Per base 1-cell t: j → j', F(t) H_j ≅ H_j' colim(t ∘ −).
    std::vector<bool> natural;
    Verdict           verdict;
  };

  // Reconstructs F as a bifiltered bicolimit of representables, reporting
  // where this fails rather than requiring flatness.
  Reconstruction reconstruct_from_representables(CatPseudoFunctor const& F);

  // As above; throws PreconditionError when check_flat is negative.
  Reconstruction decompose_flat(CatPseudoFunctor const& F);

  // A finite bilimit cone inside the base 2-category.
  struct BaseCone {
    enum class Kind { terminal, product };
    Kind               kind;
    zero_t             apex;
    std::vector<one_t> legs;
  };

  // Throws ValidationError unless the cone is a bilimit cone in the base:
  // hom(j, t) ≃ 1, or hom(j, p) → hom(j, x) × hom(j, y) an equivalence,
  // for every 0-cell j.
  void validate_base_cone(TwoCat const& C, BaseCone const& cone);

  // Whether F carries the cone to a bilimit cone in Cat.
  Verdict check_flat_preserves_bilimits(CatPseudoFunctor const& F,
                                        BaseCone const&         cone);

}  // namespace sigmacat
