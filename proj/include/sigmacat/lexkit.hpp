#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sigmacat/colim.hpp"
#include "sigmacat/fincat.hpp"
#include "sigmacat/verdict.hpp"

namespace sigmacat {

  // A cone over G: J → C with legs indexed by the objects of J.
  struct LimitCone {
    Functor            diagram;
    obj_t              apex;
    std::vector<mor_t> legs;
  };

  // Every cone over G with apex z.
  std::vector<std::vector<mor_t>> cones_over(Functor const& G, obj_t z);

  // Whether h ↦ (λ_j h) is a bijection hom(z, apex) → cones(z) for all z.
  bool is_limit_cone(LimitCone const& L);

  std::optional<LimitCone> find_limit(Functor const& G);

  // Terminal object, binary products and equalizers, or the first shape
  // lacking a limit.
  struct LimitWitnesses {
    std::optional<LimitCone> terminal;
    std::vector<LimitCone>   products;
    std::vector<LimitCone>   equalizers;
    std::optional<std::string> failure;

    bool complete() const noexcept {
      return !failure;
    }
  };

  LimitWitnesses finite_limit_witnesses(CatPtr const& C);

  // Preservation of the witness cones up to isomorphism. Throws
  // PreconditionError unless the source is lex.
  Verdict is_lex_functor(Functor const& F);

  // The diagram shapes with at most three objects and four non-identity
  // morphisms used to sample the limit formula.
  struct Shape {
    std::string name;
    CatPtr      category;
  };

  std::vector<Shape> limit_shape_catalogue();

  struct LexColimitOptions {
    ColimitOptions colimit{};
    // Diagrams per shape; 0 means all.
    std::size_t diagrams_per_shape = 0;
  };

  struct LexColimitReport {
    ColimitCat colimit;
    // (a) the colimit has finite limits.
    Verdict result_lex;
    // (b) every q_i is lex.
    std::vector<Verdict> legs_lex;
    // (c) stage-wise limits map to limits.
    std::size_t              diagrams_checked = 0;
    std::vector<std::string> formula_failures;
    Verdict                  verdict;
  };

  // Requires a bifiltered index, lex fibers and lex transition functors;
  // throws PreconditionError otherwise.
  LexColimitReport verify_lex_bicolimit(CatPseudoFunctor const&  F,
                                        LexColimitOptions const& options = {});

}  // namespace sigmacat
