#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sigmacat/errors.hpp"
#include "sigmacat/verdict.hpp"

namespace sigmacat {

  using obj_t = std::uint32_t;
  using mor_t = std::uint32_t;

  inline constexpr std::uint32_t UNDEFINED = static_cast<std::uint32_t>(-1);

  class FinCat;
  using CatPtr = std::shared_ptr<FinCat const>;

  ////////////////////////////////////////////////////////////////////////
  // FinCat
  ////////////////////////////////////////////////////////////////////////

  // A finite category stored by its total composition table.
  class FinCat {
    friend class FinCatBuilder;

   public:
    FinCat() = default;

    std::size_t num_objects() const noexcept {
      return _obj_names.size();
    }
    std::size_t num_morphisms() const noexcept {
      return _mor_names.size();
    }

    std::string const& object_name(obj_t x) const {
      return _obj_names.at(x);
    }
    std::string const& morphism_name(mor_t f) const {
      return _mor_names.at(f);
    }
    std::optional<obj_t> find_object(std::string_view name) const;
    std::optional<mor_t> find_morphism(std::string_view name) const;

    obj_t dom(mor_t f) const {
      return _dom[f];
    }
    obj_t cod(mor_t f) const {
      return _cod[f];
    }
    mor_t identity(obj_t x) const {
      return _identity[x];
    }
    bool is_identity(mor_t f) const {
      return _identity[_dom[f]] == f;
    }

    // The composite g ∘ f; UNDEFINED when cod(f) != dom(g).
    mor_t compose(mor_t g, mor_t f) const;
    // Composite of a path [f1, f2, ...] read in diagrammatic order.
    mor_t compose_path(obj_t start, std::span<mor_t const> path) const;

    // Morphisms into / out of an object, grouped by the other endpoint.
    std::span<mor_t const> incoming(obj_t b) const {
      return {_in_index.data() + _in_offset[b],
              _in_offset[b + 1] - _in_offset[b]};
    }
    std::span<mor_t const> outgoing(obj_t a) const {
      return {_out_index.data() + _out_offset[a],
              _out_offset[a + 1] - _out_offset[a]};
    }

    std::span<mor_t const> hom(obj_t a, obj_t b) const {
      std::size_t k = a * num_objects() + b;
      return {_hom_index.data() + _hom_offset[k],
              _hom_offset[k + 1] - _hom_offset[k]};
    }

    // UNDEFINED if f is not invertible.
    mor_t inverse(mor_t f) const {
      return _inverse[f];
    }
    bool is_iso(mor_t f) const {
      return _inverse[f] != UNDEFINED;
    }
    // Some isomorphism a → b, or UNDEFINED.
    mor_t some_iso(obj_t a, obj_t b) const;

    bool operator==(FinCat const& that) const;

   private:
    void index();

    std::vector<std::string>                 _obj_names;
    std::vector<std::string>                 _mor_names;
    std::unordered_map<std::string, obj_t>   _obj_lookup;
    std::unordered_map<std::string, mor_t>   _mor_lookup;
    std::vector<obj_t>                       _dom;
    std::vector<obj_t>                       _cod;
    std::vector<mor_t>                       _identity;
    std::unordered_map<std::uint64_t, mor_t> _comp;
    std::vector<mor_t>                       _hom_index;
    std::vector<std::size_t>                 _hom_offset;
    std::vector<mor_t>                       _inverse;
    std::vector<mor_t>                       _in_index;
    std::vector<std::size_t>                 _in_offset;
    std::vector<mor_t>                       _out_index;
    std::vector<std::size_t>                 _out_offset;
  };

  enum class Check {
    // Totality, dom/cod and identities.
    structural,
    // Additionally associativity and identity laws, exhaustively.
    full
  };

  // Incremental construction of a FinCat. Composites with identities are
  // filled in automatically; every other composable pair must be set.
  class FinCatBuilder {
   public:
    obj_t add_object(std::string name);
    mor_t add_morphism(std::string name, obj_t dom, obj_t cod);
    // Adds an object together with an identity morphism named `id_name`.
    obj_t add_object_with_identity(std::string name, std::string id_name);
    void  set_identity(obj_t x, mor_t f);
    void  set_composite(mor_t g, mor_t f, mor_t gf);

    std::size_t num_objects() const noexcept {
      return _cat._obj_names.size();
    }
    std::size_t num_morphisms() const noexcept {
      return _cat._mor_names.size();
    }
    std::optional<obj_t> find_object(std::string_view name) const;
    std::optional<mor_t> find_morphism(std::string_view name) const;

    // Throws ValidationError listing every violated axiom.
    FinCat build(Check level = Check::full);

   private:
    FinCat                  _cat;
    std::vector<std::string> _errors;
  };

  // Validates a category description given by names.
  struct FinCatData {
    struct Morphism {
      std::string name, dom, cod;
    };
    std::vector<std::string>                         objects;
    std::vector<Morphism>                            morphisms;
    std::vector<std::pair<std::string, std::string>> identities;
    std::vector<std::array<std::string, 3>>          composition;
  };

  FinCat validate_fincat(FinCatData const& data);

  ////////////////////////////////////////////////////////////////////////
  // Functor
  ////////////////////////////////////////////////////////////////////////

  class Functor {
   public:
    Functor() = default;

    // Throws ValidationError if the maps do not define a functor.
    static Functor make(CatPtr             source,
                        CatPtr             target,
                        std::vector<obj_t> obj_map,
                        std::vector<mor_t> mor_map,
                        Check              level = Check::full);
    static Functor identity(CatPtr C);
    static Functor constant(CatPtr source, CatPtr target, obj_t x);

    CatPtr const& source() const noexcept {
      return _source;
    }
    CatPtr const& target() const noexcept {
      return _target;
    }
    obj_t operator()(obj_t x) const {
      return _obj[x];
    }
    mor_t map_morphism(mor_t f) const {
      return _mor[f];
    }
    std::vector<obj_t> const& obj_map() const noexcept {
      return _obj;
    }
    std::vector<mor_t> const& mor_map() const noexcept {
      return _mor;
    }

    bool operator==(Functor const& that) const;

   private:
    CatPtr             _source;
    CatPtr             _target;
    std::vector<obj_t> _obj;
    std::vector<mor_t> _mor;
  };

  // G ∘ F.
  Functor compose(Functor const& G, Functor const& F);

  // True when the two categories are the same value.
  bool same_category(CatPtr const& C, CatPtr const& D);

  ////////////////////////////////////////////////////////////////////////
  // NatTrans
  ////////////////////////////////////////////////////////////////////////

  class NatTrans {
   public:
    NatTrans() = default;

    static NatTrans make(Functor            source,
                         Functor            target,
                         std::vector<mor_t> components,
                         Check              level = Check::full);
    static NatTrans identity(Functor const& F);

    Functor const& source() const noexcept {
      return _source;
    }
    Functor const& target() const noexcept {
      return _target;
    }
    mor_t operator[](obj_t x) const {
      return _components[x];
    }
    std::vector<mor_t> const& components() const noexcept {
      return _components;
    }
    bool is_invertible() const noexcept {
      return _invertible;
    }
    bool is_identity() const;

    NatTrans inverse() const;

    bool operator==(NatTrans const& that) const;

   private:
    Functor            _source;
    Functor            _target;
    std::vector<mor_t> _components;
    bool               _invertible = false;
  };

  // β · α (vertical).
  NatTrans vcompose(NatTrans const& beta, NatTrans const& alpha);
  // H α : H F ⇒ H G.
  NatTrans whisker_left(Functor const& H, NatTrans const& alpha);
  // α K : F K ⇒ G K.
  NatTrans whisker_right(NatTrans const& alpha, Functor const& K);
  // β * α : H F ⇒ K G for α: F ⇒ G, β: H ⇒ K.
  NatTrans hcompose(NatTrans const& beta, NatTrans const& alpha);

  ////////////////////////////////////////////////////////////////////////
  // Constructions
  ////////////////////////////////////////////////////////////////////////

  FinCat terminal_category();
  FinCat empty_category();
  FinCat discrete_category(std::size_t n);

  struct Subcategory {
    CatPtr  category;
    Functor inclusion;
  };

  // Full subcategory on the given objects, in the given order.
  Subcategory full_subcategory(CatPtr const& C, std::vector<obj_t> objects);

  struct Skeleton {
    CatPtr  category;
    Functor inclusion;
    Functor retraction;
    // Invertible 1_C ⇒ inclusion ∘ retraction.
    NatTrans unit;
  };

  Skeleton skeleton(CatPtr const& C);

  struct Equivalence {
    Functor  F;       // C → D
    Functor  G;       // D → C
    NatTrans GF_iso;  // G F ⇒ 1_C, invertible
    NatTrans FG_iso;  // F G ⇒ 1_D, invertible
  };

  struct EquivalenceResult {
    Verdict                    verdict;
    std::optional<Equivalence> witness;
  };

  EquivalenceResult check_equivalence(CatPtr const& C, CatPtr const& D);

  // An isomorphism of categories C → D, if one exists.
  std::optional<Functor> find_isomorphism(CatPtr const& C, CatPtr const& D);

  // Some invertible natural transformation F ⇒ G, if one exists.
  std::optional<NatTrans> find_natural_iso(Functor const& F, Functor const& G);

  struct FunctorAnalysis {
    bool   essentially_surjective = true;
    bool   full                   = true;
    bool   faithful               = true;
    // Describes the first failure found.
    std::string failure;

    bool is_equivalence() const noexcept {
      return essentially_surjective && full && faithful;
    }
  };

  FunctorAnalysis analyze_functor(Functor const& F);

  struct FunctorCategory {
    CatPtr               category;
    std::vector<Functor> functors;  // indexed by object
    // Per morphism, the natural transformation it denotes.
    std::vector<NatTrans> transformations;

    std::optional<obj_t> find(Functor const& F) const;
    std::unordered_map<std::string, obj_t> lookup;
  };

  inline constexpr std::size_t DEFAULT_FUNCTOR_CATEGORY_BOUND = 100'000;

  // All functors C → D and natural transformations between them.
  FunctorCategory functor_category(CatPtr const& C,
                                   CatPtr const& D,
                                   std::size_t   bound
                                   = DEFAULT_FUNCTOR_CATEGORY_BOUND);

  // All functors C → D, in a deterministic order.
  std::vector<Functor> enumerate_functors(CatPtr const& C,
                                          CatPtr const& D,
                                          std::size_t   bound
                                          = DEFAULT_FUNCTOR_CATEGORY_BOUND);

  // All natural transformations F ⇒ G, in a deterministic order.
  std::vector<NatTrans> enumerate_nat_trans(Functor const& F,
                                            Functor const& G,
                                            std::size_t    bound
                                            = DEFAULT_FUNCTOR_CATEGORY_BOUND);

}  // namespace sigmacat
