#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sigmacat/fincat.hpp"

namespace sigmacat {

  using zero_t = std::uint32_t;
  using one_t  = std::uint32_t;
  using two_t  = std::uint32_t;

  class TwoCat;
  using TwoCatPtr = std::shared_ptr<TwoCat const>;

  // Global ids of the 2-cells between two parallel 1-cells.
  class TwoCellRange {
   public:
    class iterator {
     public:
      using value_type      = two_t;
      using difference_type = std::ptrdiff_t;
      iterator() = default;
      iterator(mor_t const* p, two_t offset) : _p(p), _offset(offset) {}
      two_t operator*() const {
        return _offset + *_p;
      }
      iterator& operator++() {
        ++_p;
        return *this;
      }
      iterator operator++(int) {
        auto t = *this;
        ++_p;
        return t;
      }
      bool operator==(iterator const& that) const {
        return _p == that._p;
      }

     private:
      mor_t const* _p      = nullptr;
      two_t        _offset = 0;
    };

    TwoCellRange(std::span<mor_t const> local, two_t offset)
        : _local(local), _offset(offset) {}
    iterator begin() const {
      return {_local.data(), _offset};
    }
    iterator end() const {
      return {_local.data() + _local.size(), _offset};
    }
    std::size_t size() const {
      return _local.size();
    }
    bool empty() const {
      return _local.empty();
    }

   private:
    std::span<mor_t const> _local;
    two_t                  _offset;
  };

  ////////////////////////////////////////////////////////////////////////
  // TwoCat
  ////////////////////////////////////////////////////////////////////////

  // A finite strict 2-category. 1-cells and 2-cells carry global ids, laid
  // out contiguously per hom-category in (source, target) order.
  class TwoCat {
    friend class TwoCatBuilder;

   public:
    std::size_t num_zero_cells() const noexcept {
      return _zero_names.size();
    }
    std::size_t num_one_cells() const noexcept {
      return _one_src.size();
    }
    std::size_t num_two_cells() const noexcept {
      return _two_hom.size();
    }

    std::string const& zero_name(zero_t i) const {
      return _zero_names.at(i);
    }
    std::string const& one_name(one_t s) const;
    std::string const& two_name(two_t a) const;

    std::optional<zero_t> find_zero(std::string_view name) const;
    std::optional<one_t>  find_one(std::string_view name) const;
    std::optional<two_t>  find_two(std::string_view name) const;

    CatPtr const& hom(zero_t i, zero_t j) const {
      return _hom[i * num_zero_cells() + j];
    }

    zero_t src(one_t s) const {
      return _one_src[s];
    }
    zero_t tgt(one_t s) const {
      return _one_tgt[s];
    }
    // Position of a 1-cell as an object of its hom-category.
    obj_t local(one_t s) const {
      return s - _one_offset[_one_src[s] * num_zero_cells() + _one_tgt[s]];
    }
    one_t global_one(zero_t i, zero_t j, obj_t x) const {
      return _one_offset[i * num_zero_cells() + j] + x;
    }
    auto one_cells(zero_t i, zero_t j) const {
      std::size_t k = i * num_zero_cells() + j;
      return std::views::iota(_one_offset[k], _one_offset[k + 1]);
    }
    auto one_cells() const {
      return std::views::iota(one_t(0), one_t(num_one_cells()));
    }
    one_t unit(zero_t i) const {
      return _unit[i];
    }
    bool is_unit(one_t s) const {
      return _unit[_one_src[s]] == s;
    }
    // Horizontal composite t ∘ s; UNDEFINED when not composable.
    one_t comp(one_t t, one_t s) const;

    one_t dom2(two_t a) const {
      return _two_dom[a];
    }
    one_t cod2(two_t a) const {
      return _two_cod[a];
    }
    two_t id2(one_t s) const;
    bool  is_id2(two_t a) const {
      return id2(_two_dom[a]) == a;
    }
    TwoCellRange two_cells(one_t s, one_t t) const;
    auto         two_cells() const {
      return std::views::iota(two_t(0), two_t(num_two_cells()));
    }
    // Vertical composite b · a; UNDEFINED when not composable.
    two_t vcomp(two_t b, two_t a) const;
    // Horizontal composite b * a.
    two_t hcomp(two_t b, two_t a) const;
    // t * a and b * s.
    two_t lwhisker(one_t t, two_t a) const {
      return hcomp(id2(t), a);
    }
    two_t rwhisker(two_t b, one_t s) const {
      return hcomp(b, id2(s));
    }
    bool is_invertible2(two_t a) const;
    two_t inverse2(two_t a) const;
    // Some invertible 2-cell s ⇒ t, or UNDEFINED.
    two_t some_iso2(one_t s, one_t t) const;

    // Global id of a morphism of hom(src s, tgt s), and back.
    two_t global_two(one_t s, mor_t local) const {
      return two_offset(s) + local;
    }
    mor_t local2(two_t a) const {
      return a - two_offset(_two_dom[a]);
    }

   private:
    two_t two_offset(one_t s) const {
      return _two_offset[_one_src[s] * num_zero_cells() + _one_tgt[s]];
    }

    std::vector<std::string>                 _zero_names;
    std::unordered_map<std::string, zero_t>  _zero_lookup;
    std::unordered_map<std::string, one_t>   _one_lookup;
    std::unordered_map<std::string, two_t>   _two_lookup;
    std::vector<CatPtr>                      _hom;
    std::vector<one_t>                       _one_offset;
    std::vector<two_t>                       _two_offset;
    std::vector<zero_t>                      _one_src, _one_tgt;
    std::vector<std::uint32_t>               _two_hom;
    std::vector<one_t>                       _two_dom, _two_cod;
    std::vector<one_t>                       _unit;
    std::unordered_map<std::uint64_t, one_t> _comp1;
    std::unordered_map<std::uint64_t, two_t> _comp2;
  };

  // Two-phase construction: declare 0-cells and hom-categories, call
  // prepare(), then set units and composites by global id. Composites with
  // units, identity 2-cells of units, and of identity 2-cells are filled in.
  class TwoCatBuilder {
   public:
    zero_t add_zero_cell(std::string name);
    void   set_hom(zero_t i, zero_t j, CatPtr hom);
    // Assigns global ids; after this the 1-/2-cell lookups work.
    void prepare();

    TwoCat const& cells() const {
      return _cat;
    }
    void set_unit(zero_t i, one_t s);
    void set_comp1(one_t t, one_t s, one_t ts);
    void set_comp2(two_t b, two_t a, two_t ba);

    // Throws ValidationError listing violated axioms.
    TwoCat build();

   private:
    TwoCat                                        _cat;
    std::map<std::pair<zero_t, zero_t>, CatPtr> _pending;
    bool                                          _prepared = false;
    std::vector<std::string> _errors;
  };

  TwoCat locally_discrete(FinCat const& C);

  // A 2-category whose hom-categories are preorders. Units are named
  // "1_<0-cell>" unless given; composites with units are implicit; the
  // 2-cell relation is closed under reflexivity and transitivity, and
  // 2-cells are named "<s>=><t>".
  struct LocallyPreorderedData {
    struct OneCell {
      std::string name, src, tgt;
    };
    std::vector<std::string>                         zero_cells;
    std::vector<OneCell>                             one_cells;
    std::vector<std::string>                         units;
    std::vector<std::array<std::string, 3>>          composition;
    std::vector<std::pair<std::string, std::string>> two_cells;
  };

  TwoCat locally_preordered(LocallyPreorderedData const& data);

  // 1-cells reversed, 2-cells kept.
  TwoCat dual_one_cells(TwoCat const& I);

  ////////////////////////////////////////////////////////////////////////
  // SigmaClass
  ////////////////////////////////////////////////////////////////////////

  class SigmaClass {
   public:
    SigmaClass() = default;
    SigmaClass(TwoCatPtr owner, std::vector<one_t> const& members);

    static SigmaClass all(TwoCatPtr owner);
    static SigmaClass none(TwoCatPtr owner);

    TwoCatPtr const& owner() const noexcept {
      return _owner;
    }
    bool contains(one_t s) const {
      return _member[s];
    }
    std::vector<one_t> members() const;
    std::size_t        size() const;
    void               insert(one_t s) {
      _member[s] = true;
    }

    bool operator==(SigmaClass const& that) const {
      return _member == that._member;
    }
    bool subset_of(SigmaClass const& that) const;

   private:
    TwoCatPtr         _owner;
    std::vector<bool> _member;
  };

  SigmaClass sigma_closure(SigmaClass const& S);

  // 1-cells that are internal equivalences, reported separately from Σ.
  std::vector<one_t> internal_equivalences(TwoCat const& I);

  ////////////////////////////////////////////////////////////////////////
  // Strict 2-functors
  ////////////////////////////////////////////////////////////////////////

  class TwoFunctor {
   public:
    static TwoFunctor make(TwoCatPtr           source,
                           TwoCatPtr           target,
                           std::vector<zero_t> on0,
                           std::vector<one_t>  on1,
                           std::vector<two_t>  on2);
    static TwoFunctor identity(TwoCatPtr I);

    TwoCatPtr const& source() const noexcept {
      return _source;
    }
    TwoCatPtr const& target() const noexcept {
      return _target;
    }
    zero_t on0(zero_t i) const {
      return _on0[i];
    }
    one_t on1(one_t s) const {
      return _on1[s];
    }
    two_t on2(two_t a) const {
      return _on2[a];
    }

   private:
    TwoCatPtr           _source, _target;
    std::vector<zero_t> _on0;
    std::vector<one_t>  _on1;
    std::vector<two_t>  _on2;
  };

  // Image of a Σ-class under a strict 2-functor.
  SigmaClass image(TwoFunctor const& F, SigmaClass const& S);

  struct SigmaSubcategory {
    TwoCatPtr  category;
    TwoFunctor inclusion;
  };

  // The sub-2-category full on 0-cells and 2-cells whose 1-cells are the
  // members of S. Requires S closed under composition and units.
  SigmaSubcategory sigma_subcategory(SigmaClass const& S);

  ////////////////////////////////////////////////////////////////////////
  // CatPseudoFunctor
  ////////////////////////////////////////////////////////////////////////

  // A pseudofunctor into Cat with comparison isomorphisms
  //   comp_{t,s}: F(t) F(s) ⇒ F(ts),   unit_i: 1 ⇒ F(1_i).
  // Components are stored per object; absent entries are identities.
  class CatPseudoFunctor {
   public:
    struct Data {
      TwoCatPtr             base;
      std::vector<CatPtr>   on0;
      std::vector<Functor>  on1;
      std::vector<NatTrans> on2;
      // Keyed by (t, s); missing pairs must compose strictly.
      std::unordered_map<std::uint64_t, std::vector<mor_t>> comp_iso;
      // Keyed by 0-cell; missing entries must be strict.
      std::unordered_map<zero_t, std::vector<mor_t>> unit_iso;
    };

    CatPseudoFunctor() = default;

    // Validates every coherence condition exhaustively.
    static CatPseudoFunctor make(Data data);

    TwoCatPtr const& base() const noexcept {
      return _d.base;
    }
    CatPtr const& on0(zero_t i) const {
      return _d.on0[i];
    }
    Functor const& on1(one_t s) const {
      return _d.on1[s];
    }
    NatTrans const& on2(two_t a) const {
      return _d.on2[a];
    }
    bool is_strict() const noexcept {
      return _d.comp_iso.empty() && _d.unit_iso.empty();
    }

    // comp_{t,s} at x: F(t)F(s)x → F(ts)x, and its inverse.
    mor_t comp_at(one_t t, one_t s, obj_t x) const;
    mor_t comp_inv_at(one_t t, one_t s, obj_t x) const;
    // unit_i at x: x → F(1_i)x, and its inverse.
    mor_t unit_at(zero_t i, obj_t x) const;
    mor_t unit_inv_at(zero_t i, obj_t x) const;

    NatTrans comp_iso(one_t t, one_t s) const;
    NatTrans unit_iso(zero_t i) const;

    Data const& data() const noexcept {
      return _d;
    }

   private:
    Data _d;
  };

  inline std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  // F ∘ G for a strict 2-functor G.
  CatPseudoFunctor precompose(CatPseudoFunctor const& F, TwoFunctor const& G);

  // The pseudofunctor constant at X.
  CatPseudoFunctor constant_pseudofunctor(TwoCatPtr I, CatPtr X);

}  // namespace sigmacat
