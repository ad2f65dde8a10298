#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sigmacat/fixture.hpp"

namespace sigmacat::io {

  struct SuiteOptions {
    // Permutes the order in which fixtures are visited.
    std::optional<unsigned> seed_order;
    // Categories with more objects are skipped as shapes K.
    std::size_t max_shape_objects = 4;
  };

  struct LemmaFailure {
    std::string fixture;
    std::string detail;
    // A command reproducing the failure.
    std::string replay;

    auto operator<=>(LemmaFailure const&) const = default;
  };

  struct LemmaResult {
    std::string               name;
    std::size_t               passed = 0;
    std::vector<LemmaFailure> failures;
  };

  struct SuiteReport {
    std::size_t              fixtures = 0;
    // Fixture name → SHA-256 of its file.
    std::map<std::string, std::string> hashes;
    std::vector<std::string> warnings;
    std::vector<LemmaResult> lemmas;

    bool        ok() const;
    Json        machine() const;
    std::string human() const;
  };

  // Validates the whole corpus first; throws FixtureError on invalid input.
  SuiteReport verify_suite(Corpus& corpus, SuiteOptions const& options = {});

  // F itself over a bifiltered index, its restriction to the
  // Σ-subcategory when (I, Σ) is σ-filtered, and nothing otherwise.
  std::optional<CatPseudoFunctor> bifiltered_restriction(
      CatPseudoFunctor const& F, SigmaClass const& S);

  // The lemma names in report order.
  std::vector<std::string> suite_lemmas();

}  // namespace sigmacat::io
