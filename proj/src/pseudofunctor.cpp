#include <numeric>

#include "sigmacat/twocat.hpp"

namespace sigmacat {

  namespace {
    constexpr std::size_t MAX_REPORTED = 32;

    bool same_maps(Functor const& F, Functor const& G) {
      return F.obj_map() == G.obj_map() && F.mor_map() == G.mor_map();
    }

    class Validator {
     public:
      explicit Validator(CatPseudoFunctor const& F)
          : _F(F), _I(*F.base()) {}

      void run() {
        types();
        flush();
        comparisons();
        flush();
        on_two_cells();
        flush();
        horizontal();
        flush();
        associativity();
        units();
        flush();
      }

     private:
      void report(std::string msg) {
        if (_errors.size() < MAX_REPORTED) {
          _errors.push_back(std::move(msg));
        }
      }
      void flush() {
        if (!_errors.empty()) {
          throw ValidationError(_errors);
        }
      }

      void types() {
        auto const& d = _F.data();
        if (d.on0.size() != _I.num_zero_cells()
            || d.on1.size() != _I.num_one_cells()
            || d.on2.size() != _I.num_two_cells()) {
          throw ValidationError("pseudofunctor maps have the wrong size");
        }
        for (zero_t i = 0; i < _I.num_zero_cells(); ++i) {
          if (!d.on0[i]) {
            throw ValidationError("pseudofunctor has no category at "
                                  + _I.zero_name(i));
          }
        }
        for (one_t s : _I.one_cells()) {
          auto const& Fs = d.on1[s];
          if (!Fs.source() || !same_category(Fs.source(), d.on0[_I.src(s)])
              || !same_category(Fs.target(), d.on0[_I.tgt(s)])) {
            report("F(" + _I.one_name(s) + ") has the wrong boundary");
          }
        }
        for (two_t a : _I.two_cells()) {
          auto const& Fa = d.on2[a];
          if (!Fa.source().source()
              || !same_maps(Fa.source(), d.on1[_I.dom2(a)])
              || !same_maps(Fa.target(), d.on1[_I.cod2(a)])) {
            report("F(" + _I.two_name(a) + ") has the wrong boundary");
          }
        }
        for (auto const& [key, comps] : d.comp_iso) {
          one_t t = key >> 32, s = key & 0xffffffffu;
          if (t >= _I.num_one_cells() || s >= _I.num_one_cells()
              || _I.tgt(s) != _I.src(t)) {
            report("composition comparison for a non-composable pair");
            continue;
          }
          if (comps.size() != d.on0[_I.src(s)]->num_objects()) {
            report("composition comparison for " + _I.one_name(t) + " o "
                   + _I.one_name(s) + " has the wrong number of components");
          }
        }
        for (auto const& [i, comps] : d.unit_iso) {
          if (i >= _I.num_zero_cells()
              || comps.size() != d.on0[i]->num_objects()) {
            report("unit comparison has the wrong number of components");
          }
        }
      }

      void comparisons() {
        auto const& d = _F.data();
        for (one_t s : _I.one_cells()) {
          for (zero_t k = 0; k < _I.num_zero_cells(); ++k) {
            for (one_t t : _I.one_cells(_I.tgt(s), k)) {
              comparison(t, s);
            }
          }
        }
        for (zero_t i = 0; i < _I.num_zero_cells(); ++i) {
          auto const& X  = *d.on0[i];
          auto const& F1 = d.on1[_I.unit(i)];
          if (!d.unit_iso.contains(i)) {
            if (!same_maps(F1, Functor::identity(d.on0[i]))) {
              report("F(" + _I.one_name(_I.unit(i))
                     + ") is not the identity and no unit comparison is "
                       "given");
            }
            continue;
          }
          for (obj_t x = 0; x < X.num_objects(); ++x) {
            mor_t u = _F.unit_at(i, x);
            if (u >= X.num_morphisms() || X.dom(u) != x
                || X.cod(u) != F1(x) || !X.is_iso(u)) {
              report("unit comparison at " + _I.zero_name(i)
                     + " is not an isomorphism x -> F(1)x");
              return;
            }
          }
          for (mor_t f = 0; f < X.num_morphisms(); ++f) {
            if (X.compose(F1.map_morphism(f), _F.unit_at(i, X.dom(f)))
                != X.compose(_F.unit_at(i, X.cod(f)), f)) {
              report("unit comparison at " + _I.zero_name(i)
                     + " is not natural");
              break;
            }
          }
        }
      }

      void comparison(one_t t, one_t s) {
        auto const& d   = _F.data();
        one_t       ts  = _I.comp(t, s);
        auto const& X   = *d.on0[_I.src(s)];
        auto const& Z   = *d.on0[_I.tgt(t)];
        auto const& Ft  = d.on1[t];
        auto const& Fs  = d.on1[s];
        auto const& Fts = d.on1[ts];
        std::string pair = _I.one_name(t) + " o " + _I.one_name(s);
        if (!d.comp_iso.contains(pair_key(t, s))) {
          if (!same_maps(compose(Ft, Fs), Fts)) {
            report("F(" + _I.one_name(t) + ")F(" + _I.one_name(s)
                   + ") differs from F(" + _I.one_name(ts)
                   + ") and no composition comparison is given");
          }
          return;
        }
        for (obj_t x = 0; x < X.num_objects(); ++x) {
          mor_t c = _F.comp_at(t, s, x);
          if (c >= Z.num_morphisms() || Z.dom(c) != Ft(Fs(x))
              || Z.cod(c) != Fts(x) || !Z.is_iso(c)) {
            report("composition comparison for " + pair
                   + " is not an isomorphism F(t)F(s)x -> F(ts)x");
            return;
          }
        }
        for (mor_t f = 0; f < X.num_morphisms(); ++f) {
          mor_t lhs = Z.compose(Fts.map_morphism(f), _F.comp_at(t, s, X.dom(f)));
          mor_t rhs = Z.compose(_F.comp_at(t, s, X.cod(f)),
                                Ft.map_morphism(Fs.map_morphism(f)));
          if (lhs != rhs) {
            report("composition comparison for " + pair + " is not natural");
            return;
          }
        }
      }

      void on_two_cells() {
        auto const& d = _F.data();
        for (one_t s : _I.one_cells()) {
          if (!d.on2[_I.id2(s)].is_identity()) {
            report("F does not preserve the identity 2-cell of "
                   + _I.one_name(s));
          }
        }
        for (two_t a : _I.two_cells()) {
          one_t       s = _I.dom2(a);
          auto const& H = *_I.hom(_I.src(s), _I.tgt(s));
          two_t       off = _I.id2(s) - H.identity(_I.local(s));
          for (mor_t bl : H.outgoing(_I.local(_I.cod2(a)))) {
            two_t b = off + bl;
            if (!(d.on2[_I.vcomp(b, a)] == vcompose(d.on2[b], d.on2[a]))) {
              report("F does not preserve " + _I.two_name(b) + " . "
                     + _I.two_name(a));
            }
          }
        }
      }

      // F(b*a) c_{t,s} = c_{t',s'} (F(b)*F(a)).
      void horizontal() {
        auto const& d = _F.data();
        for (two_t a : _I.two_cells()) {
          one_t       s = _I.dom2(a), s2 = _I.cod2(a);
          auto const& X = *d.on0[_I.src(s)];
          for (two_t b : _I.two_cells()) {
            if (_I.src(_I.dom2(b)) != _I.tgt(s)) {
              continue;
            }
            one_t       t = _I.dom2(b), t2 = _I.cod2(b);
            auto const& Z = *d.on0[_I.tgt(t)];
            auto const& Fba = d.on2[_I.hcomp(b, a)];
            auto const& Fa  = d.on2[a];
            auto const& Fb  = d.on2[b];
            auto const& Ft2 = d.on1[t2];
            auto const& Fs  = d.on1[s];
            for (obj_t x = 0; x < X.num_objects(); ++x) {
              mor_t lhs = Z.compose(Fba[x], _F.comp_at(t, s, x));
              mor_t ba  = Z.compose(Ft2.map_morphism(Fa[x]), Fb[Fs(x)]);
              mor_t rhs = Z.compose(_F.comp_at(t2, s2, x), ba);
              if (lhs != rhs) {
                report("composition comparison is not natural in "
                       + _I.two_name(b) + " * " + _I.two_name(a));
                break;
              }
            }
          }
        }
      }

      void associativity() {
        auto const& d = _F.data();
        std::size_t n = _I.num_zero_cells();
        for (one_t s : _I.one_cells()) {
          auto const& X  = *d.on0[_I.src(s)];
          auto const& Fs = d.on1[s];
          for (zero_t k = 0; k < n; ++k) {
            for (one_t t : _I.one_cells(_I.tgt(s), k)) {
              one_t ts = _I.comp(t, s);
              for (zero_t l = 0; l < n; ++l) {
                auto const& W = *d.on0[l];
                for (one_t u : _I.one_cells(k, l)) {
                  one_t ut = _I.comp(u, t);
                  for (obj_t x = 0; x < X.num_objects(); ++x) {
                    mor_t lhs = W.compose(
                        _F.comp_at(u, ts, x),
                        d.on1[u].map_morphism(_F.comp_at(t, s, x)));
                    mor_t rhs = W.compose(_F.comp_at(ut, s, x),
                                          _F.comp_at(u, t, Fs(x)));
                    if (lhs != rhs) {
                      report("associativity coherence fails for "
                             + _I.one_name(u) + ", " + _I.one_name(t) + ", "
                             + _I.one_name(s));
                      break;
                    }
                  }
                }
              }
            }
          }
        }
      }

      void units() {
        auto const& d = _F.data();
        for (one_t s : _I.one_cells()) {
          zero_t      i = _I.src(s), j = _I.tgt(s);
          auto const& X  = *d.on0[i];
          auto const& Y  = *d.on0[j];
          auto const& Fs = d.on1[s];
          for (obj_t x = 0; x < X.num_objects(); ++x) {
            mor_t r = Y.compose(_F.comp_at(s, _I.unit(i), x),
                                Fs.map_morphism(_F.unit_at(i, x)));
            mor_t l = Y.compose(_F.comp_at(_I.unit(j), s, x),
                                _F.unit_at(j, Fs(x)));
            if (r != Y.identity(Fs(x)) || l != Y.identity(Fs(x))) {
              report("unit coherence fails for " + _I.one_name(s));
              break;
            }
          }
        }
      }

      CatPseudoFunctor const&  _F;
      TwoCat const&            _I;
      std::vector<std::string> _errors;
    };

  }  // namespace

  CatPseudoFunctor CatPseudoFunctor::make(Data data) {
    if (!data.base) {
      throw ValidationError("pseudofunctor has no base 2-category");
    }
    CatPseudoFunctor F;
    F._d = std::move(data);
    Validator(F).run();
    return F;
  }

  mor_t CatPseudoFunctor::comp_at(one_t t, one_t s, obj_t x) const {
    auto it = _d.comp_iso.find(pair_key(t, s));
    if (it != _d.comp_iso.end()) {
      return it->second[x];
    }
    one_t ts = _d.base->comp(t, s);
    return _d.on0[_d.base->tgt(t)]->identity(_d.on1[ts](x));
  }

  mor_t CatPseudoFunctor::comp_inv_at(one_t t, one_t s, obj_t x) const {
    return _d.on0[_d.base->tgt(t)]->inverse(comp_at(t, s, x));
  }

  mor_t CatPseudoFunctor::unit_at(zero_t i, obj_t x) const {
    auto it = _d.unit_iso.find(i);
    if (it != _d.unit_iso.end()) {
      return it->second[x];
    }
    return _d.on0[i]->identity(x);
  }

  mor_t CatPseudoFunctor::unit_inv_at(zero_t i, obj_t x) const {
    return _d.on0[i]->inverse(unit_at(i, x));
  }

  NatTrans CatPseudoFunctor::comp_iso(one_t t, one_t s) const {
    auto const&        I = *_d.base;
    std::vector<mor_t> comps(_d.on0[I.src(s)]->num_objects());
    for (obj_t x = 0; x < comps.size(); ++x) {
      comps[x] = comp_at(t, s, x);
    }
    return NatTrans::make(compose(_d.on1[t], _d.on1[s]), _d.on1[I.comp(t, s)],
                          std::move(comps), Check::structural);
  }

  NatTrans CatPseudoFunctor::unit_iso(zero_t i) const {
    auto const&        I = *_d.base;
    std::vector<mor_t> comps(_d.on0[i]->num_objects());
    for (obj_t x = 0; x < comps.size(); ++x) {
      comps[x] = unit_at(i, x);
    }
    return NatTrans::make(Functor::identity(_d.on0[i]), _d.on1[I.unit(i)],
                          std::move(comps), Check::structural);
  }

  CatPseudoFunctor precompose(CatPseudoFunctor const& F, TwoFunctor const& G) {
    if (G.target()->num_one_cells() != F.base()->num_one_cells()
        || G.target()->num_two_cells() != F.base()->num_two_cells()) {
      throw PreconditionError("precompose: base mismatch");
    }
    auto const&            J = *G.source();
    CatPseudoFunctor::Data d;
    d.base = G.source();
    for (zero_t i = 0; i < J.num_zero_cells(); ++i) {
      d.on0.push_back(F.on0(G.on0(i)));
    }
    for (one_t s : J.one_cells()) {
      d.on1.push_back(F.on1(G.on1(s)));
    }
    for (two_t a : J.two_cells()) {
      d.on2.push_back(F.on2(G.on2(a)));
    }
    auto const& fd = F.data();
    for (one_t s : J.one_cells()) {
      for (zero_t k = 0; k < J.num_zero_cells(); ++k) {
        for (one_t t : J.one_cells(J.tgt(s), k)) {
          auto it = fd.comp_iso.find(pair_key(G.on1(t), G.on1(s)));
          if (it != fd.comp_iso.end()) {
            d.comp_iso.emplace(pair_key(t, s), it->second);
          }
        }
      }
    }
    for (zero_t i = 0; i < J.num_zero_cells(); ++i) {
      auto it = fd.unit_iso.find(G.on0(i));
      if (it != fd.unit_iso.end()) {
        d.unit_iso.emplace(i, it->second);
      }
    }
    return CatPseudoFunctor::make(std::move(d));
  }

  CatPseudoFunctor constant_pseudofunctor(TwoCatPtr I, CatPtr X) {
    CatPseudoFunctor::Data d;
    d.base = I;
    d.on0.assign(I->num_zero_cells(), X);
    auto id = Functor::identity(X);
    d.on1.assign(I->num_one_cells(), id);
    d.on2.assign(I->num_two_cells(), NatTrans::identity(id));
    return CatPseudoFunctor::make(std::move(d));
  }

}  // namespace sigmacat
