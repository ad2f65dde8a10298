#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "sigmacat/fincat.hpp"

namespace sigmacat {

  Subcategory full_subcategory(CatPtr const& C, std::vector<obj_t> objects) {
    FinCatBuilder      b;
    std::vector<obj_t> local(C->num_objects(), UNDEFINED);
    for (obj_t x : objects) {
      local[x] = b.add_object(C->object_name(x));
    }
    std::vector<mor_t> local_mor(C->num_morphisms(), UNDEFINED);
    std::vector<mor_t> global_mor;
    for (obj_t x : objects) {
      for (obj_t y : objects) {
        for (mor_t f : C->hom(x, y)) {
          local_mor[f] = b.add_morphism(C->morphism_name(f), local[x], local[y]);
          global_mor.push_back(f);
        }
      }
    }
    for (obj_t x : objects) {
      b.set_identity(local[x], local_mor[C->identity(x)]);
    }
    for (mor_t f : global_mor) {
      for (mor_t g : C->outgoing(C->cod(f))) {
        if (local_mor[g] != UNDEFINED) {
          b.set_composite(local_mor[g], local_mor[f], local_mor[C->compose(g, f)]);
        }
      }
    }
    auto S = std::make_shared<FinCat const>(b.build(Check::structural));
    std::vector<obj_t> obj(objects.begin(), objects.end());
    return {S,
            Functor::make(S, C, std::move(obj), std::move(global_mor),
                          Check::structural)};
  }

  Skeleton skeleton(CatPtr const& C) {
    std::size_t        n = C->num_objects();
    std::vector<obj_t> rep(n, UNDEFINED);
    std::vector<mor_t> to_rep(n, UNDEFINED);
    std::vector<obj_t> reps;
    for (obj_t x = 0; x < n; ++x) {
      if (rep[x] != UNDEFINED) {
        continue;
      }
      rep[x]    = reps.size();
      to_rep[x] = C->identity(x);
      for (obj_t y = x + 1; y < n; ++y) {
        if (rep[y] == UNDEFINED) {
          mor_t f = C->some_iso(y, x);
          if (f != UNDEFINED) {
            rep[y]    = reps.size();
            to_rep[y] = f;
          }
        }
      }
      reps.push_back(x);
    }
    auto sub = full_subcategory(C, reps);
    std::unordered_map<mor_t, mor_t> back;
    for (mor_t f = 0; f < sub.inclusion.mor_map().size(); ++f) {
      back.emplace(sub.inclusion.map_morphism(f), f);
    }
    std::vector<mor_t> mor(C->num_morphisms());
    for (mor_t f = 0; f < C->num_morphisms(); ++f) {
      obj_t x = C->dom(f), y = C->cod(f);
      mor_t g = C->compose(to_rep[y], C->compose(f, C->inverse(to_rep[x])));
      mor[f]  = back.at(g);
    }
    auto retraction = Functor::make(C, sub.category, rep, std::move(mor));
    auto unit       = NatTrans::make(Functor::identity(C),
                               compose(sub.inclusion, retraction),
                               to_rep);
    return {sub.category, sub.inclusion, std::move(retraction), std::move(unit)};
  }

  ////////////////////////////////////////////////////////////////////////
  // Isomorphism search
  ////////////////////////////////////////////////////////////////////////

  namespace {

    using Profile = std::vector<std::size_t>;

    // Isomorphism-invariant description of a morphism.
    Profile morphism_signature(FinCat const& C, mor_t f) {
      Profile p;
      obj_t   x = C.dom(f), y = C.cod(f);
      p.push_back(C.is_identity(f));
      p.push_back(C.is_iso(f));
      std::size_t left = 0, right = 0;
      for (mor_t g : C.hom(y, y)) {
        left += C.compose(g, f) == f;
      }
      for (mor_t h : C.hom(x, x)) {
        right += C.compose(f, h) == f;
      }
      p.push_back(left);
      p.push_back(right);
      if (x == y) {
        // Index and period of the cyclic submonoid generated by f.
        std::vector<mor_t> powers{C.identity(x)};
        while (true) {
          mor_t next = C.compose(f, powers.back());
          auto  it   = std::find(powers.begin(), powers.end(), next);
          if (it != powers.end()) {
            p.push_back(it - powers.begin());
            p.push_back(powers.end() - it);
            break;
          }
          powers.push_back(next);
        }
      }
      std::size_t factorizations = 0;
      for (mor_t g : C.incoming(y)) {
        obj_t z = C.dom(g);
        for (mor_t h : C.hom(x, z)) {
          factorizations += C.compose(g, h) == f;
        }
      }
      p.push_back(factorizations);
      return p;
    }

    Profile object_profile(FinCat const& C, obj_t x) {
      Profile     p;
      std::size_t n = C.num_objects();
      p.push_back(C.hom(x, x).size());
      Profile out, in;
      for (obj_t y = 0; y < n; ++y) {
        out.push_back(C.hom(x, y).size());
        in.push_back(C.hom(y, x).size());
      }
      std::sort(out.begin(), out.end());
      std::sort(in.begin(), in.end());
      p.insert(p.end(), out.begin(), out.end());
      p.insert(p.end(), in.begin(), in.end());
      std::vector<Profile> endo;
      for (mor_t f : C.hom(x, x)) {
        endo.push_back(morphism_signature(C, f));
      }
      std::sort(endo.begin(), endo.end());
      for (auto const& s : endo) {
        p.insert(p.end(), s.begin(), s.end());
        p.push_back(UNDEFINED);
      }
      return p;
    }

    class IsoSearch {
     public:
      IsoSearch(FinCat const& C, FinCat const& D) : _C(C), _D(D) {}

      std::optional<std::pair<std::vector<obj_t>, std::vector<mor_t>>> run() {
        std::size_t n = _C.num_objects();
        if (n != _D.num_objects() || _C.num_morphisms() != _D.num_morphisms()) {
          return std::nullopt;
        }
        for (obj_t x = 0; x < n; ++x) {
          _pc.push_back(object_profile(_C, x));
          _pd.push_back(object_profile(_D, x));
        }
        for (mor_t f = 0; f < _C.num_morphisms(); ++f) {
          _sc.push_back(morphism_signature(_C, f));
        }
        for (mor_t f = 0; f < _D.num_morphisms(); ++f) {
          _sd.push_back(morphism_signature(_D, f));
        }
        _obj.assign(n, UNDEFINED);
        _obj_used.assign(n, false);
        if (assign_object(0)) {
          return std::pair(_obj, _mor);
        }
        return std::nullopt;
      }

     private:
      bool assign_object(obj_t x) {
        std::size_t n = _C.num_objects();
        if (x == n) {
          return assign_morphisms();
        }
        for (obj_t y = 0; y < n; ++y) {
          if (_obj_used[y] || _pc[x] != _pd[y]) {
            continue;
          }
          bool ok = true;
          for (obj_t z = 0; z < x && ok; ++z) {
            ok = _C.hom(x, z).size() == _D.hom(y, _obj[z]).size()
                 && _C.hom(z, x).size() == _D.hom(_obj[z], y).size();
          }
          if (!ok) {
            continue;
          }
          _obj[x]      = y;
          _obj_used[y] = true;
          if (assign_object(x + 1)) {
            return true;
          }
          _obj_used[y] = false;
        }
        _obj[x] = UNDEFINED;
        return false;
      }

      bool assign_morphisms() {
        _mor.assign(_C.num_morphisms(), UNDEFINED);
        _inv.assign(_D.num_morphisms(), UNDEFINED);
        _trail.clear();
        for (obj_t x = 0; x < _C.num_objects(); ++x) {
          if (!set(_C.identity(x), _D.identity(_obj[x]))) {
            undo(0);
            return false;
          }
        }
        if (next_morphism(0)) {
          return true;
        }
        undo(0);
        return false;
      }

      bool next_morphism(mor_t start) {
        mor_t f = start;
        while (f < _C.num_morphisms() && _mor[f] != UNDEFINED) {
          ++f;
        }
        if (f == _C.num_morphisms()) {
          return true;
        }
        for (mor_t g : _D.hom(_obj[_C.dom(f)], _obj[_C.cod(f)])) {
          if (_inv[g] != UNDEFINED || _sc[f] != _sd[g]) {
            continue;
          }
          std::size_t mark = _trail.size();
          if (set(f, g) && next_morphism(f + 1)) {
            return true;
          }
          undo(mark);
        }
        return false;
      }

      // Assigns f ↦ g and propagates composites.
      bool set(mor_t f, mor_t g) {
        std::vector<std::pair<mor_t, mor_t>> queue{{f, g}};
        while (!queue.empty()) {
          auto [a, b] = queue.back();
          queue.pop_back();
          if (_mor[a] != UNDEFINED || _inv[b] != UNDEFINED) {
            if (_mor[a] != b || _inv[b] != a) {
              return false;
            }
            continue;
          }
          if (_sc[a] != _sd[b]) {
            return false;
          }
          _mor[a] = b;
          _inv[b] = a;
          _trail.push_back(a);
          for (mor_t h : _C.outgoing(_C.cod(a))) {
            if (_mor[h] != UNDEFINED) {
              queue.emplace_back(_C.compose(h, a), _D.compose(_mor[h], b));
            }
          }
          for (mor_t h : _C.incoming(_C.dom(a))) {
            if (_mor[h] != UNDEFINED) {
              queue.emplace_back(_C.compose(a, h), _D.compose(b, _mor[h]));
            }
          }
        }
        return true;
      }

      void undo(std::size_t mark) {
        while (_trail.size() > mark) {
          mor_t a = _trail.back();
          _trail.pop_back();
          _inv[_mor[a]] = UNDEFINED;
          _mor[a]       = UNDEFINED;
        }
      }

      FinCat const&        _C;
      FinCat const&        _D;
      std::vector<Profile> _pc, _pd, _sc, _sd;
      std::vector<obj_t>   _obj;
      std::vector<bool>    _obj_used;
      std::vector<mor_t>   _mor, _inv, _trail;
    };

    std::map<std::size_t, std::size_t> hom_multiset(FinCat const& C) {
      std::map<std::size_t, std::size_t> m;
      for (obj_t x = 0; x < C.num_objects(); ++x) {
        for (obj_t y = 0; y < C.num_objects(); ++y) {
          ++m[C.hom(x, y).size()];
        }
      }
      return m;
    }

    std::string describe(std::map<std::size_t, std::size_t> const& m) {
      std::string out = "{";
      for (auto [k, v] : m) {
        if (out.size() > 1) {
          out += ", ";
        }
        out += std::to_string(k) + ":" + std::to_string(v);
      }
      return out + "}";
    }

    Functor invert_isomorphism(Functor const& F) {
      std::vector<obj_t> obj(F.obj_map().size());
      std::vector<mor_t> mor(F.mor_map().size());
      for (obj_t x = 0; x < obj.size(); ++x) {
        obj[F(x)] = x;
      }
      for (mor_t f = 0; f < mor.size(); ++f) {
        mor[F.map_morphism(f)] = f;
      }
      return Functor::make(F.target(), F.source(), std::move(obj),
                           std::move(mor), Check::structural);
    }

  }  // namespace

  std::optional<Functor> find_isomorphism(CatPtr const& C, CatPtr const& D) {
    auto found = IsoSearch(*C, *D).run();
    if (!found) {
      return std::nullopt;
    }
    return Functor::make(C, D, std::move(found->first), std::move(found->second));
  }

  EquivalenceResult check_equivalence(CatPtr const& C, CatPtr const& D) {
    std::string subject = "equivalence";
    auto        SC      = skeleton(C);
    auto        SD      = skeleton(D);
    std::size_t nc = SC.category->num_objects(), nd = SD.category->num_objects();
    if (nc != nd) {
      return {Verdict::negative(
                  subject,
                  {"object-class count",
                   {std::to_string(nc), std::to_string(nd)},
                   "object-class count " + std::to_string(nc)
                       + " != " + std::to_string(nd)}),
              std::nullopt};
    }
    auto mc = hom_multiset(*SC.category), md = hom_multiset(*SD.category);
    if (mc != md) {
      return {Verdict::negative(subject,
                                {"hom-set multiset",
                                 {describe(mc), describe(md)},
                                 "hom-set cardinality multisets of skeletons "
                                 "differ"}),
              std::nullopt};
    }
    auto phi = find_isomorphism(SC.category, SD.category);
    if (!phi) {
      return {Verdict::negative(subject,
                                {"skeleton isomorphism",
                                 {std::to_string(nc) + " classes"},
                                 "exhausted all object bijections matching "
                                 "hom-set profiles"}),
              std::nullopt};
    }
    auto psi = invert_isomorphism(*phi);
    auto F   = compose(SD.inclusion, compose(*phi, SC.retraction));
    auto G   = compose(SC.inclusion, compose(psi, SD.retraction));
    // G F = iC rC and F G = iD rD exactly, since r ∘ i is the identity.
    auto GF = NatTrans::make(compose(G, F), Functor::identity(C),
                             SC.unit.inverse().components());
    auto FG = NatTrans::make(compose(F, G), Functor::identity(D),
                             SD.unit.inverse().components());
    std::vector<Witness> w;
    for (obj_t x = 0; x < nc; ++x) {
      w.push_back({"class",
                   {SC.category->object_name(x)},
                   {SD.category->object_name((*phi)(x))}});
    }
    return {Verdict::positive(subject, std::move(w)),
            Equivalence{std::move(F), std::move(G), std::move(GF),
                        std::move(FG)}};
  }

  ////////////////////////////////////////////////////////////////////////
  // Natural isomorphisms and functor analysis
  ////////////////////////////////////////////////////////////////////////

  std::optional<NatTrans> find_natural_iso(Functor const& F, Functor const& G) {
    auto const&        C = *F.source();
    auto const&        D = *F.target();
    std::size_t        n = C.num_objects();
    std::vector<mor_t> comp(n, UNDEFINED);
    std::vector<std::vector<mor_t>> candidates(n);
    for (obj_t x = 0; x < n; ++x) {
      for (mor_t f : D.hom(F(x), G(x))) {
        if (D.is_iso(f)) {
          candidates[x].push_back(f);
        }
      }
      if (candidates[x].empty()) {
        return std::nullopt;
      }
    }
    auto consistent = [&](obj_t x) {
      for (mor_t f : C.outgoing(x)) {
        obj_t y = C.cod(f);
        if (comp[y] != UNDEFINED
            && D.compose(G.map_morphism(f), comp[x])
                   != D.compose(comp[y], F.map_morphism(f))) {
          return false;
        }
      }
      for (mor_t f : C.incoming(x)) {
        obj_t y = C.dom(f);
        if (comp[y] != UNDEFINED
            && D.compose(G.map_morphism(f), comp[y])
                   != D.compose(comp[x], F.map_morphism(f))) {
          return false;
        }
      }
      return true;
    };
    auto search = [&](auto&& self, obj_t x) -> bool {
      if (x == n) {
        return true;
      }
      for (mor_t f : candidates[x]) {
        comp[x] = f;
        if (consistent(x) && self(self, x + 1)) {
          return true;
        }
      }
      comp[x] = UNDEFINED;
      return false;
    };
    if (!search(search, 0)) {
      return std::nullopt;
    }
    return NatTrans::make(F, G, std::move(comp));
  }

  FunctorAnalysis analyze_functor(Functor const& F) {
    auto const&     C = *F.source();
    auto const&     D = *F.target();
    FunctorAnalysis result;
    for (obj_t d = 0; d < D.num_objects() && result.essentially_surjective;
         ++d) {
      bool hit = false;
      for (obj_t c = 0; c < C.num_objects() && !hit; ++c) {
        hit = D.some_iso(F(c), d) != UNDEFINED;
      }
      if (!hit) {
        result.essentially_surjective = false;
        result.failure = "object " + D.object_name(d)
                         + " is not isomorphic to any image";
      }
    }
    std::vector<bool> seen(D.num_morphisms(), false);
    for (obj_t x = 0; x < C.num_objects(); ++x) {
      for (obj_t y = 0; y < C.num_objects(); ++y) {
        std::size_t images = 0;
        for (mor_t f : C.hom(x, y)) {
          mor_t g = F.map_morphism(f);
          if (seen[g]) {
            if (result.faithful && result.failure.empty()) {
              result.failure = "morphisms " + C.object_name(x) + " -> "
                               + C.object_name(y) + " are identified";
            }
            result.faithful = false;
          } else {
            seen[g] = true;
            ++images;
          }
        }
        if (images < D.hom(F(x), F(y)).size()) {
          if (result.full && result.failure.empty()) {
            result.failure = "hom " + C.object_name(x) + " -> "
                             + C.object_name(y) + " is not hit fully";
          }
          result.full = false;
        }
        for (mor_t f : C.hom(x, y)) {
          seen[F.map_morphism(f)] = false;
        }
      }
    }
    return result;
  }

}  // namespace sigmacat
