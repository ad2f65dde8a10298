#include <string>

#include "sigmacat/fincat.hpp"

namespace sigmacat {

  namespace {

    std::string functor_key(Functor const& F) {
      std::string k;
      k.reserve(4 * (F.obj_map().size() + F.mor_map().size()));
      for (obj_t x : F.obj_map()) {
        k.append(reinterpret_cast<char const*>(&x), sizeof(x));
      }
      for (mor_t f : F.mor_map()) {
        k.append(reinterpret_cast<char const*>(&f), sizeof(f));
      }
      return k;
    }

    class FunctorSearch {
     public:
      FunctorSearch(CatPtr C, CatPtr D, std::size_t bound)
          : _C(std::move(C)), _D(std::move(D)), _bound(bound) {}

      std::vector<Functor> run() {
        auto const& C = *_C;
        _obj.assign(C.num_objects(), UNDEFINED);
        _mor.assign(C.num_morphisms(), UNDEFINED);
        objects(0);
        return std::move(_found);
      }

     private:
      void objects(obj_t x) {
        auto const& C = *_C;
        auto const& D = *_D;
        if (x == C.num_objects()) {
          std::size_t mark = _trail.size();
          bool        ok   = true;
          for (obj_t y = 0; y < C.num_objects() && ok; ++y) {
            ok = set(C.identity(y), D.identity(_obj[y]));
          }
          if (ok) {
            morphisms(0);
          }
          undo(mark);
          return;
        }
        for (obj_t y = 0; y < D.num_objects(); ++y) {
          _obj[x] = y;
          bool ok = true;
          for (obj_t z = 0; z <= x && ok; ++z) {
            ok = (C.hom(x, z).empty() || !D.hom(y, _obj[z]).empty())
                 && (C.hom(z, x).empty() || !D.hom(_obj[z], y).empty());
          }
          if (ok) {
            objects(x + 1);
          }
        }
        _obj[x] = UNDEFINED;
      }

      void morphisms(mor_t start) {
        auto const& C = *_C;
        auto const& D = *_D;
        mor_t       f = start;
        while (f < C.num_morphisms() && _mor[f] != UNDEFINED) {
          ++f;
        }
        if (f == C.num_morphisms()) {
          if (_found.size() >= _bound) {
            throw SizeLimitError("functor enumeration exceeds the bound of "
                                 + std::to_string(_bound));
          }
          _found.push_back(
              Functor::make(_C, _D, _obj, _mor, Check::structural));
          return;
        }
        for (mor_t g : D.hom(_obj[C.dom(f)], _obj[C.cod(f)])) {
          std::size_t mark = _trail.size();
          if (set(f, g)) {
            morphisms(f + 1);
          }
          undo(mark);
        }
      }

      bool set(mor_t f, mor_t g) {
        auto const&                          C = *_C;
        auto const&                          D = *_D;
        std::vector<std::pair<mor_t, mor_t>> queue{{f, g}};
        while (!queue.empty()) {
          auto [a, b] = queue.back();
          queue.pop_back();
          if (_mor[a] != UNDEFINED) {
            if (_mor[a] != b) {
              return false;
            }
            continue;
          }
          _mor[a] = b;
          _trail.push_back(a);
          for (mor_t h : C.outgoing(C.cod(a))) {
            if (_mor[h] != UNDEFINED) {
              queue.emplace_back(C.compose(h, a), D.compose(_mor[h], b));
            }
          }
          for (mor_t h : C.incoming(C.dom(a))) {
            if (_mor[h] != UNDEFINED) {
              queue.emplace_back(C.compose(a, h), D.compose(b, _mor[h]));
            }
          }
        }
        return true;
      }

      void undo(std::size_t mark) {
        while (_trail.size() > mark) {
          _mor[_trail.back()] = UNDEFINED;
          _trail.pop_back();
        }
      }

      CatPtr               _C, _D;
      std::size_t          _bound;
      std::vector<obj_t>   _obj;
      std::vector<mor_t>   _mor, _trail;
      std::vector<Functor> _found;
    };

  }  // namespace

  std::vector<Functor> enumerate_functors(CatPtr const& C,
                                          CatPtr const& D,
                                          std::size_t   bound) {
    return FunctorSearch(C, D, bound).run();
  }

  std::vector<NatTrans> enumerate_nat_trans(Functor const& F,
                                            Functor const& G,
                                            std::size_t    bound) {
    auto const&           C = *F.source();
    auto const&           D = *F.target();
    std::size_t           n = C.num_objects();
    std::vector<mor_t>    comp(n, UNDEFINED);
    std::vector<NatTrans> found;
    auto consistent = [&](obj_t x) {
      for (mor_t f : C.outgoing(x)) {
        obj_t y = C.cod(f);
        if (y <= x
            && D.compose(G.map_morphism(f), comp[x])
                   != D.compose(comp[y], F.map_morphism(f))) {
          return false;
        }
      }
      for (mor_t f : C.incoming(x)) {
        obj_t y = C.dom(f);
        if (y < x
            && D.compose(G.map_morphism(f), comp[y])
                   != D.compose(comp[x], F.map_morphism(f))) {
          return false;
        }
      }
      return true;
    };
    auto search = [&](auto&& self, obj_t x) -> void {
      if (x == n) {
        if (found.size() >= bound) {
          throw SizeLimitError("natural transformation enumeration exceeds "
                               "the bound of "
                               + std::to_string(bound));
        }
        found.push_back(NatTrans::make(F, G, comp, Check::structural));
        return;
      }
      for (mor_t f : D.hom(F(x), G(x))) {
        comp[x] = f;
        if (consistent(x)) {
          self(self, x + 1);
        }
      }
      comp[x] = UNDEFINED;
    };
    search(search, 0);
    return found;
  }

  std::optional<obj_t> FunctorCategory::find(Functor const& F) const {
    auto it = lookup.find(functor_key(F));
    if (it == lookup.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  FunctorCategory functor_category(CatPtr const& C,
                                   CatPtr const& D,
                                   std::size_t   bound) {
    FunctorCategory result;
    result.functors = enumerate_functors(C, D, bound);
    auto const&   fs = result.functors;
    std::size_t   n  = fs.size();
    FinCatBuilder b;
    for (obj_t i = 0; i < n; ++i) {
      b.add_object("F" + std::to_string(i));
      result.lookup.emplace(functor_key(fs[i]), i);
    }
    // Morphisms grouped by (source, target), with a lookup by components.
    std::vector<std::vector<mor_t>>             hom(n * n);
    std::unordered_map<std::string, mor_t>      by_components;
    auto comp_key = [](obj_t s, obj_t t, std::vector<mor_t> const& c) {
      std::string k(reinterpret_cast<char const*>(&s), sizeof(s));
      k.append(reinterpret_cast<char const*>(&t), sizeof(t));
      k.append(reinterpret_cast<char const*>(c.data()), c.size() * sizeof(mor_t));
      return k;
    };
    std::size_t total = 0;
    for (obj_t s = 0; s < n; ++s) {
      for (obj_t t = 0; t < n; ++t) {
        auto ts = enumerate_nat_trans(fs[s], fs[t], bound);
        total += ts.size();
        if (total > bound) {
          throw SizeLimitError("functor category exceeds the bound of "
                               + std::to_string(bound) + " morphisms");
        }
        for (std::size_t k = 0; k < ts.size(); ++k) {
          mor_t f = b.add_morphism("F" + std::to_string(s) + "=>F"
                                       + std::to_string(t) + "#"
                                       + std::to_string(k),
                                   s, t);
          by_components.emplace(comp_key(s, t, ts[k].components()), f);
          hom[s * n + t].push_back(f);
          result.transformations.push_back(std::move(ts[k]));
        }
      }
    }
    auto const& Dc = *D;
    for (obj_t s = 0; s < n; ++s) {
      auto id = NatTrans::identity(fs[s]);
      b.set_identity(s, by_components.at(comp_key(s, s, id.components())));
    }
    std::vector<mor_t> comp(C->num_objects());
    for (obj_t s = 0; s < n; ++s) {
      for (obj_t t = 0; t < n; ++t) {
        for (obj_t u = 0; u < n; ++u) {
          for (mor_t f : hom[s * n + t]) {
            for (mor_t g : hom[t * n + u]) {
              auto const& a = result.transformations[f];
              auto const& c = result.transformations[g];
              for (obj_t x = 0; x < comp.size(); ++x) {
                comp[x] = Dc.compose(c[x], a[x]);
              }
              b.set_composite(g, f, by_components.at(comp_key(s, u, comp)));
            }
          }
        }
      }
    }
    result.category = std::make_shared<FinCat const>(b.build(Check::structural));
    return result;
  }

}  // namespace sigmacat
