#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sigmacat/twocat.hpp"
#include "sigmacat/verdict.hpp"

namespace sigmacat {

  // Condition names used in witnesses and counterexamples.
  namespace cond {
    inline constexpr char const* span                 = "span";
    inline constexpr char const* family               = "family";
    inline constexpr char const* insertion            = "insertion";
    inline constexpr char const* invertible_insertion = "invertible-insertion";
    inline constexpr char const* equification         = "equification";
    inline constexpr char const* cofinal_arrow        = "cofinal-arrow";
    inline constexpr char const* cofinal_insertion    = "cofinal-insertion";
    inline constexpr char const* cofinal_invertible_insertion
        = "cofinal-invertible-insertion";
    inline constexpr char const* cofinal_equification = "cofinal-equification";
    inline constexpr char const* sigma_cone           = "sigma-cone";
  }  // namespace cond

  struct FilteredOptions {
    // Size of the object families in condition 1. Binary spans already
    // give cocones over every finite family when Σ is closed.
    std::size_t family_size = 2;
  };

  // Throws PreconditionError on an empty 2-category.
  Verdict check_bifiltered(TwoCat const& I);

  // Checks S as given; close it first for the usual convention.
  Verdict check_sigma_filtered(SigmaClass const&      S,
                               FilteredOptions const& options = {});

  // Single searches in the fixed witness order, for reuse by constructions.
  std::optional<std::pair<one_t, one_t>> find_span(SigmaClass const& S,
                                                   zero_t            i,
                                                   zero_t            j);
  // t in S and α: t d ⇒ t s.
  std::optional<std::pair<one_t, two_t>> find_insertion(SigmaClass const& S,
                                                        one_t             d,
                                                        one_t             s,
                                                        bool invertible);
  // f in S with f * a = f * b.
  std::optional<one_t> find_equifier(SigmaClass const& S, two_t a, two_t b);

  struct Triangle {
    one_t d;
    one_t s;        // i → j in Σ
    one_t s_prime;  // i' → j in Σ
    two_t phi;      // s' d ⇒ s
    // The span (t, t') and the inserting 1-cell t''.
    one_t t, t_prime, t_second;
  };

  // Span then insertion; throws SearchExhausted naming the failing step.
  Triangle triangle_completion(SigmaClass const& S, one_t d);

  bool validate_triangle(SigmaClass const& S, Triangle const& w);

  // The three cofinality conditions for F: I → J relative to S ⊆ I and
  // S' ⊆ J, with the invertible part of condition 2 as its own part.
  Verdict check_sigma_cofinal(TwoFunctor const& F,
                              SigmaClass const& S,
                              SigmaClass const& S_target);

  struct TrivializationReport {
    SigmaClass closed;
    Verdict    sigma_filtered;
    Verdict    sub_bifiltered;
    Verdict    cofinal;

    bool right_side() const {
      return sub_bifiltered.outcome() && cofinal.outcome();
    }
    bool agree() const {
      return sigma_filtered.outcome() == right_side();
    }
  };

  // Compares σ-filteredness of (I, S̄) with bifilteredness of the
  // Σ̄-subcategory plus cofinality of its inclusion.
  TrivializationReport trivialization_check(SigmaClass const& S);

  // A σ-cone with legs in Σ over the full sub-2-category on `objects`.
  // Witness data: vertex, then legs, then the cells λ_d: s_y d ⇒ s_x.
  Verdict find_sigma_cone(SigmaClass const&          S,
                          std::vector<zero_t> const& objects,
                          std::size_t                bound = 1'000'000);

  // find_sigma_cone over every nonempty subset of 0-cells.
  Verdict check_sigma_cones(SigmaClass const& S,
                            std::size_t       bound = 1'000'000);

  // Re-validates a recorded witness against its condition.
  bool replay_witness(SigmaClass const& S, Witness const& w);
  bool replay_cofinal_witness(TwoFunctor const& F,
                              SigmaClass const& S,
                              SigmaClass const& S_target,
                              Witness const&    w);

  // Re-runs the search on a counterexample instance; true when it again
  // finds nothing.
  bool replay_counterexample(SigmaClass const& S, Counterexample const& c);
  bool replay_cofinal_counterexample(TwoFunctor const&     F,
                                     SigmaClass const&     S,
                                     SigmaClass const&     S_target,
                                     Counterexample const& c);

  // Replays every witness or the counterexample of a verdict and its parts.
  bool replay_verdict(SigmaClass const& S, Verdict const& v);

}  // namespace sigmacat
