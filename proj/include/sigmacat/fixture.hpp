#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sigmacat/bilim.hpp"
#include "sigmacat/fincat.hpp"
#include "sigmacat/twocat.hpp"

namespace sigmacat::io {

  using Json = nlohmann::json;

  // A fixture that cannot be read, parsed or validated.
  class FixtureError : public std::runtime_error {
   public:
    FixtureError(std::string where, std::string what)
        : std::runtime_error(where + ": " + what), _where(std::move(where)) {}

    std::string const& where() const noexcept {
      return _where;
    }

   private:
    std::string _where;
  };

  std::string sha256_hex(std::string const& bytes);

  struct Fixture {
    std::string           name;
    std::string           kind;
    std::filesystem::path path;
    std::string           sha256;
    Json                  json;
  };

  struct CofinalMap {
    TwoFunctor                 functor;
    SigmaClass                 source_sigma, target_sigma;
    std::optional<std::string> diagram;
  };

  struct CommutationSpec {
    std::string          shape;
    CatPseudoFunctor     left, right;
    std::vector<Functor> P, Q;
  };

  inline constexpr char const* FIXTURE_EXTENSION = ".fixture";
  inline constexpr char const* MANIFEST_NAME     = "MANIFEST.json";

  // The *.fixture files of a directory, addressed by file stem. Fixtures
  // are parsed on first use and cached, so fixtures referring to the same
  // name share one object.
  class Corpus {
   public:
    // Throws FixtureError if the directory is missing.
    explicit Corpus(std::filesystem::path dir);

    std::filesystem::path const& directory() const noexcept {
      return _dir;
    }
    // Sorted.
    std::vector<std::string> names() const;
    bool                     contains(std::string const& name) const;

    Fixture const& fixture(std::string const& name);
    std::string    kind(std::string const& name);

    CatPtr           category(std::string const& name);
    TwoCatPtr        twocat(std::string const& name);
    // The closure of the fixture's Σ, or every 1-cell when it names none.
    SigmaClass       sigma(std::string const& name);
    bool             has_sigma(std::string const& name);
    CatPseudoFunctor diagram(std::string const& name);
    std::vector<std::string> tags(std::string const& name);
    Pseudoidempotent pseudoidempotent(std::string const& name);
    CofinalMap       cofinal_map(std::string const& name);
    CommutationSpec  commutation(std::string const& name);

    // Builds every fixture and checks the manifest when present.
    void validate_all();
    // name → SHA-256 of the file contents.
    Json manifest();

   private:
    std::string where(std::string const& name, std::string const& field = {});

    CatPtr           category_value(Json const& v, std::string const& where);
    TwoCatPtr        twocat_value(Json const& v, std::string const& where);
    CatPseudoFunctor diagram_value(Json const& v, std::string const& where);

    std::filesystem::path                        _dir;
    std::map<std::string, std::filesystem::path> _files;
    std::map<std::string, Fixture>               _fixtures;
    std::map<std::string, CatPtr>                _cats;
    std::map<std::string, TwoCatPtr>             _twocats;
    std::map<std::string, CatPseudoFunctor>      _diagrams;
  };

  // A functor given by object and morphism names; identities that are not
  // listed map to identities.
  Functor functor_from_json(CatPtr const&      source,
                            CatPtr const&      target,
                            Json const&        spec,
                            std::string const& where);

  NatTrans nat_trans_from_json(Functor const&     source,
                               Functor const&     target,
                               Json const&        spec,
                               std::string const& where);

  Json verdict_json(Verdict const& v);

  // The Σ of a diagram's named base, or every 1-cell.
  SigmaClass diagram_sigma(Corpus& corpus, std::string const& diagram);

}  // namespace sigmacat::io
