#include "sigmacat/bilim.hpp"

#include <algorithm>
#include <functional>

#include "sigmacat/errors.hpp"

namespace sigmacat {

  namespace {

    std::string join(std::vector<std::string> const& parts, char sep = ',') {
      std::string out;
      for (auto const& p : parts) {
        if (!out.empty()) {
          out += sep;
        }
        out += p;
      }
      return out;
    }

    // A category given by morphism keys; composites are computed on keys.
    template <typename Key>
    class KeyedBuilder {
     public:
      obj_t add_object(std::string name) {
        return _b.add_object(std::move(name));
      }
      mor_t add_morphism(Key k, std::string name, obj_t x, obj_t y) {
        mor_t m = _b.add_morphism(std::move(name), x, y);
        _lookup.emplace(k, m);
        _keys.push_back(std::move(k));
        _dom.push_back(x);
        _cod.push_back(y);
        return m;
      }
      std::vector<Key> const& keys() const noexcept {
        return _keys;
      }
      std::optional<mor_t> find(Key const& k) const {
        auto it = _lookup.find(k);
        if (it == _lookup.end()) {
          return std::nullopt;
        }
        return it->second;
      }
      // `identity(x)` and `compose(g, f)` return keys.
      template <typename Id, typename Comp>
      FinCat build(Id identity, Comp compose) {
        std::vector<std::vector<mor_t>> out(_b.num_objects());
        for (mor_t f = 0; f < _keys.size(); ++f) {
          out[_dom[f]].push_back(f);
        }
        for (obj_t x = 0; x < _b.num_objects(); ++x) {
          auto id = find(identity(x));
          if (!id) {
            throw std::logic_error("construction lacks an identity");
          }
          _b.set_identity(x, *id);
        }
        for (mor_t f = 0; f < _keys.size(); ++f) {
          for (mor_t g : out[_cod[f]]) {
            auto gf = find(compose(_keys[g], _keys[f], _dom[f], _cod[g]));
            if (!gf) {
              throw std::logic_error("construction not closed under composition");
            }
            _b.set_composite(g, f, *gf);
          }
        }
        return _b.build(Check::structural);
      }

     private:
      FinCatBuilder          _b;
      std::map<Key, mor_t>   _lookup;
      std::vector<Key>       _keys;
      std::vector<obj_t>     _dom, _cod;
    };

    Functor product_functor(Product const& A,
                            Product const& B,
                            Functor const& F,
                            Functor const& G) {
      std::vector<obj_t> obj;
      std::vector<mor_t> mor;
      for (obj_t x = 0; x < A.left->num_objects(); ++x) {
        for (obj_t y = 0; y < A.right->num_objects(); ++y) {
          obj.push_back(B.object(F(x), G(y)));
        }
      }
      for (mor_t f = 0; f < A.left->num_morphisms(); ++f) {
        for (mor_t g = 0; g < A.right->num_morphisms(); ++g) {
          mor.push_back(B.morphism(F.map_morphism(f), G.map_morphism(g)));
        }
      }
      return Functor::make(A.category, B.category, obj, mor, Check::structural);
    }

    Verdict analysis_verdict(std::string subject, FunctorAnalysis const& a,
                             Functor const& K) {
      if (a.is_equivalence()) {
        return Verdict::positive(
            std::move(subject),
            {{"comparison",
              {},
              {std::to_string(K.source()->num_objects()) + " objects",
               std::to_string(K.target()->num_objects()) + " objects"}}});
      }
      return Verdict::negative(std::move(subject),
                               {"equivalence", {a.failure},
                                "the canonical comparison functor"});
    }

  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Products
  ////////////////////////////////////////////////////////////////////////

  Product biproduct(CatPtr const& C, CatPtr const& D) {
    Product P{C, D, nullptr, {}, {}};
    using Key = std::pair<mor_t, mor_t>;
    KeyedBuilder<Key> b;
    for (obj_t x = 0; x < C->num_objects(); ++x) {
      for (obj_t y = 0; y < D->num_objects(); ++y) {
        b.add_object("(" + C->object_name(x) + "," + D->object_name(y) + ")");
      }
    }
    for (mor_t f = 0; f < C->num_morphisms(); ++f) {
      for (mor_t g = 0; g < D->num_morphisms(); ++g) {
        b.add_morphism({f, g},
                       "(" + C->morphism_name(f) + "," + D->morphism_name(g)
                           + ")",
                       P.object(C->dom(f), D->dom(g)),
                       P.object(C->cod(f), D->cod(g)));
      }
    }
    std::size_t nd = D->num_objects();
    P.category     = std::make_shared<FinCat const>(b.build(
        [&](obj_t x) {
          return Key{C->identity(x / nd), D->identity(x % nd)};
        },
        [&](Key const& g, Key const& f, obj_t, obj_t) {
          return Key{C->compose(g.first, f.first),
                     D->compose(g.second, f.second)};
        }));
    std::vector<obj_t> o1, o2;
    std::vector<mor_t> m1, m2;
    for (obj_t x = 0; x < C->num_objects(); ++x) {
      for (obj_t y = 0; y < nd; ++y) {
        o1.push_back(x);
        o2.push_back(y);
      }
    }
    for (mor_t f = 0; f < C->num_morphisms(); ++f) {
      for (mor_t g = 0; g < D->num_morphisms(); ++g) {
        m1.push_back(f);
        m2.push_back(g);
      }
    }
    P.first  = Functor::make(P.category, C, o1, m1, Check::structural);
    P.second = Functor::make(P.category, D, o2, m2, Check::structural);
    return P;
  }

  Functor pair_functor(Product const& P, Functor const& F, Functor const& G) {
    if (!same_category(F.source(), G.source())
        || !same_category(F.target(), P.left)
        || !same_category(G.target(), P.right)) {
      throw PreconditionError("pair_functor: mismatched functors");
    }
    auto const&        X = *F.source();
    std::vector<obj_t> obj;
    std::vector<mor_t> mor;
    for (obj_t x = 0; x < X.num_objects(); ++x) {
      obj.push_back(P.object(F(x), G(x)));
    }
    for (mor_t f = 0; f < X.num_morphisms(); ++f) {
      mor.push_back(P.morphism(F.map_morphism(f), G.map_morphism(f)));
    }
    return Functor::make(F.source(), P.category, obj, mor, Check::structural);
  }

  ////////////////////////////////////////////////////////////////////////
  // Biequalizers
  ////////////////////////////////////////////////////////////////////////

  std::optional<obj_t> Biequalizer::find(obj_t a, mor_t t) const {
    auto it = objects.find({a, t});
    if (it == objects.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  std::optional<mor_t> Biequalizer::lift(mor_t f, obj_t x, obj_t y) const {
    auto it = morphisms.find({f, x, y});
    if (it == morphisms.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  Biequalizer biequalizer(Functor const& F, Functor const& G) {
    if (!same_category(F.source(), G.source())
        || !same_category(F.target(), G.target())) {
      throw PreconditionError("biequalizer: functors are not parallel");
    }
    auto const& A = *F.source();
    auto const& B = *F.target();
    Biequalizer E{F, G, nullptr, {}, {}, {}, {}};
    using Key = std::array<std::uint32_t, 3>;
    KeyedBuilder<Key>  b;
    std::vector<obj_t> base;
    std::vector<mor_t> iso;
    for (obj_t a = 0; a < A.num_objects(); ++a) {
      for (mor_t t : B.hom(F(a), G(a))) {
        if (B.is_iso(t)) {
          E.objects.emplace(std::pair{a, t}, base.size());
          b.add_object("(" + A.object_name(a) + "," + B.morphism_name(t) + ")");
          base.push_back(a);
          iso.push_back(t);
        }
      }
    }
    std::vector<std::string> names;
    for (obj_t x = 0; x < base.size(); ++x) {
      names.push_back("(" + A.object_name(base[x]) + ","
                      + B.morphism_name(iso[x]) + ")");
    }
    for (obj_t x = 0; x < base.size(); ++x) {
      for (obj_t y = 0; y < base.size(); ++y) {
        for (mor_t f : A.hom(base[x], base[y])) {
          if (B.compose(G.map_morphism(f), iso[x])
              == B.compose(iso[y], F.map_morphism(f))) {
            Key k{f, x, y};
            E.morphisms.emplace(k, b.add_morphism(
                                       k,
                                       A.morphism_name(f) + ":" + names[x]
                                           + "->" + names[y],
                                       x, y));
          }
        }
      }
    }
    E.category = std::make_shared<FinCat const>(b.build(
        [&](obj_t x) { return Key{A.identity(base[x]), x, x}; },
        [&](Key const& g, Key const& f, obj_t x, obj_t z) {
          return Key{A.compose(g[0], f[0]), x, z};
        }));
    std::vector<mor_t> mor(E.category->num_morphisms());
    for (auto const& [k, m] : E.morphisms) {
      mor[m] = k[0];
    }
    E.projection
        = Functor::make(E.category, F.source(), base, mor, Check::structural);
    E.theta = NatTrans::make(compose(F, E.projection), compose(G, E.projection),
                             iso);
    return E;
  }

  ////////////////////////////////////////////////////////////////////////
  // Arrow cotensors
  ////////////////////////////////////////////////////////////////////////

  std::optional<mor_t> ArrowCotensor::square(mor_t u, mor_t v, obj_t f,
                                             obj_t g) const {
    auto it = squares.find({u, v, f, g});
    if (it == squares.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  ArrowCotensor arrow_cotensor(CatPtr const& Cp) {
    auto const&   C = *Cp;
    ArrowCotensor A{Cp, nullptr, {}, {}, {}, {}};
    using Key = std::array<std::uint32_t, 4>;
    KeyedBuilder<Key> b;
    for (mor_t f = 0; f < C.num_morphisms(); ++f) {
      b.add_object(C.morphism_name(f));
    }
    for (mor_t f = 0; f < C.num_morphisms(); ++f) {
      for (mor_t g = 0; g < C.num_morphisms(); ++g) {
        for (mor_t u : C.hom(C.dom(f), C.dom(g))) {
          for (mor_t v : C.hom(C.cod(f), C.cod(g))) {
            if (C.compose(v, f) == C.compose(g, u)) {
              Key k{u, v, f, g};
              A.squares.emplace(
                  k, b.add_morphism(k,
                                    "(" + C.morphism_name(u) + ","
                                        + C.morphism_name(v)
                                        + "):" + C.morphism_name(f) + "->"
                                        + C.morphism_name(g),
                                    f, g));
            }
          }
        }
      }
    }
    A.category = std::make_shared<FinCat const>(b.build(
        [&](obj_t f) {
          return Key{C.identity(C.dom(f)), C.identity(C.cod(f)), f, f};
        },
        [&](Key const& s2, Key const& s1, obj_t f, obj_t h) {
          return Key{C.compose(s2[0], s1[0]), C.compose(s2[1], s1[1]), f, h};
        }));
    std::vector<obj_t> dobj, cobj;
    for (mor_t f = 0; f < C.num_morphisms(); ++f) {
      dobj.push_back(C.dom(f));
      cobj.push_back(C.cod(f));
    }
    std::vector<mor_t> dmor(A.category->num_morphisms()),
        cmor(A.category->num_morphisms());
    for (auto const& [k, m] : A.squares) {
      dmor[m] = k[0];
      cmor[m] = k[1];
    }
    A.dom = Functor::make(A.category, Cp, dobj, dmor, Check::structural);
    A.cod = Functor::make(A.category, Cp, cobj, cmor, Check::structural);
    std::vector<mor_t> comps(C.num_morphisms());
    for (mor_t f = 0; f < C.num_morphisms(); ++f) {
      comps[f] = f;
    }
    A.arrow = NatTrans::make(A.dom, A.cod, comps);
    return A;
  }

  Functor cotensor_functor(ArrowCotensor const& A,
                           ArrowCotensor const& B,
                           Functor const&       F) {
    auto const&        X = *A.category;
    std::vector<obj_t> obj;
    std::vector<mor_t> mor;
    for (obj_t f = 0; f < X.num_objects(); ++f) {
      obj.push_back(F.map_morphism(f));
    }
    for (mor_t m = 0; m < X.num_morphisms(); ++m) {
      auto s = B.square(F.map_morphism(A.dom.map_morphism(m)),
                        F.map_morphism(A.cod.map_morphism(m)),
                        obj[X.dom(m)], obj[X.cod(m)]);
      mor.push_back(*s);
    }
    return Functor::make(A.category, B.category, obj, mor, Check::structural);
  }

  ////////////////////////////////////////////////////////////////////////
  // Pseudolimits
  ////////////////////////////////////////////////////////////////////////

  PseudoLimit pseudolimit_cocycle(CatPseudoFunctor const& F,
                                  std::size_t             bound) {
    auto const& I  = *F.base();
    std::size_t n0 = I.num_zero_cells(), n1 = I.num_one_cells();

    // Constraints checked once their last 1-cell is assigned.
    struct Comp {
      one_t e, d, ed;
    };
    std::vector<std::vector<Comp>>                     comps(n1);
    std::vector<std::vector<std::pair<two_t, one_t>>>  cells(n1);
    for (one_t d : I.one_cells()) {
      for (zero_t k = 0; k < n0; ++k) {
        for (one_t e : I.one_cells(I.tgt(d), k)) {
          one_t ed = I.comp(e, d);
          comps[std::max({e, d, ed})].push_back({e, d, ed});
        }
      }
    }
    for (two_t g : I.two_cells()) {
      one_t d = I.dom2(g), d2 = I.cod2(g);
      if (d != d2) {
        cells[std::max(d, d2)].push_back({g, std::min(d, d2)});
      }
    }

    PseudoLimit L{F, nullptr, {}, {}, {}, {}};
    std::vector<obj_t> A(n0, 0);
    std::vector<mor_t> alpha(n1, UNDEFINED);
    std::size_t        nodes = 0;

    auto ok_comp = [&](Comp const& c) {
      auto const& Z = *F.on0(I.tgt(c.e));
      obj_t       a = A[I.src(c.d)];
      return Z.compose(alpha[c.ed], F.comp_at(c.e, c.d, a))
             == Z.compose(alpha[c.e], F.on1(c.e).map_morphism(alpha[c.d]));
    };
    auto ok_cell = [&](two_t g) {
      auto const& Z = *F.on0(I.tgt(I.dom2(g)));
      obj_t       a = A[I.src(I.dom2(g))];
      return Z.compose(alpha[I.cod2(g)], F.on2(g)[a]) == alpha[I.dom2(g)];
    };
    std::function<void(one_t)> assign = [&](one_t d) {
      if (++nodes > bound) {
        throw SizeLimitError("pseudolimit search exceeds "
                             + std::to_string(bound) + " nodes");
      }
      if (d == n1) {
        L.families.push_back(A);
        L.cocycles.push_back(alpha);
        return;
      }
      auto const& Z   = *F.on0(I.tgt(d));
      obj_t       src = F.on1(d)(A[I.src(d)]);
      auto        try_value = [&](mor_t m) {
        alpha[d] = m;
        for (auto const& c : comps[d]) {
          if (!ok_comp(c)) {
            return;
          }
        }
        for (auto const& [g, other] : cells[d]) {
          if (!ok_cell(g)) {
            return;
          }
        }
        assign(d + 1);
      };
      if (I.is_unit(d)) {
        try_value(F.unit_inv_at(I.src(d), A[I.src(d)]));
      } else {
        for (mor_t m : Z.hom(src, A[I.tgt(d)])) {
          if (Z.is_iso(m)) {
            try_value(m);
          }
        }
      }
      alpha[d] = UNDEFINED;
    };
    std::function<void(zero_t)> choose = [&](zero_t i) {
      if (i == n0) {
        assign(0);
        return;
      }
      for (obj_t a = 0; a < F.on0(i)->num_objects(); ++a) {
        A[i] = a;
        choose(i + 1);
      }
    };
    choose(0);

    // Morphisms: families commuting with every α.
    using Key = std::vector<std::uint32_t>;
    KeyedBuilder<Key>        b;
    std::vector<std::string> names;
    for (std::size_t x = 0; x < L.families.size(); ++x) {
      std::vector<std::string> objs, isos;
      for (zero_t i = 0; i < n0; ++i) {
        objs.push_back(F.on0(i)->object_name(L.families[x][i]));
      }
      for (one_t d : I.one_cells()) {
        if (!I.is_unit(d)) {
          isos.push_back(F.on0(I.tgt(d))->morphism_name(L.cocycles[x][d]));
        }
      }
      names.push_back("(" + join(objs) + ";" + join(isos) + ")");
      b.add_object(names.back());
    }
    std::size_t nobj = L.families.size();
    for (std::size_t x = 0; x < nobj; ++x) {
      for (std::size_t y = 0; y < nobj; ++y) {
        auto const&        X = L.families[x];
        auto const&        Y = L.families[y];
        std::vector<mor_t> f(n0);
        std::function<void(zero_t)> pick = [&](zero_t i) {
          if (i == n0) {
            for (one_t d : I.one_cells()) {
              auto const& Z = *F.on0(I.tgt(d));
              if (Z.compose(f[I.tgt(d)], L.cocycles[x][d])
                  != Z.compose(L.cocycles[y][d],
                               F.on1(d).map_morphism(f[I.src(d)]))) {
                return;
              }
            }
            Key k(f.begin(), f.end());
            k.push_back(x);
            k.push_back(y);
            std::vector<std::string> parts;
            for (zero_t j = 0; j < n0; ++j) {
              parts.push_back(F.on0(j)->morphism_name(f[j]));
            }
            b.add_morphism(k, "[" + join(parts) + "]:" + names[x] + "->" + names[y],
                           x, y);
            return;
          }
          for (mor_t m : F.on0(i)->hom(X[i], Y[i])) {
            f[i] = m;
            pick(i + 1);
          }
        };
        pick(0);
      }
    }
    L.category = std::make_shared<FinCat const>(b.build(
        [&](obj_t x) {
          Key k;
          for (zero_t i = 0; i < n0; ++i) {
            k.push_back(F.on0(i)->identity(L.families[x][i]));
          }
          k.push_back(x);
          k.push_back(x);
          return k;
        },
        [&](Key const& g, Key const& f, obj_t x, obj_t z) {
          Key k;
          for (zero_t i = 0; i < n0; ++i) {
            k.push_back(F.on0(i)->compose(g[i], f[i]));
          }
          k.push_back(x);
          k.push_back(z);
          return k;
        }));
    for (zero_t i = 0; i < n0; ++i) {
      std::vector<obj_t> obj;
      std::vector<mor_t> mor;
      for (obj_t x = 0; x < nobj; ++x) {
        obj.push_back(L.families[x][i]);
      }
      for (auto const& k : b.keys()) {
        mor.push_back(k[i]);
      }
      L.projections.push_back(
          Functor::make(L.category, F.on0(i), obj, mor, Check::structural));
    }
    for (one_t d : I.one_cells()) {
      std::vector<mor_t> comps;
      for (obj_t x = 0; x < nobj; ++x) {
        comps.push_back(L.cocycles[x][d]);
      }
      L.cells.push_back(NatTrans::make(
          compose(F.on1(d), L.projections[I.src(d)]),
          L.projections[I.tgt(d)], comps));
    }
    return L;
  }

  ////////////////////////////////////////////////////////////////////////
  // Pseudoidempotents
  ////////////////////////////////////////////////////////////////////////

  Pseudoidempotent Pseudoidempotent::make(Functor endo, NatTrans mult) {
    std::vector<std::string> errors;
    if (!same_category(endo.source(), endo.target())) {
      errors.push_back("e is not an endofunctor");
    } else {
      if (!(mult.source() == compose(endo, endo)) || !(mult.target() == endo)) {
        errors.push_back("υ is not a transformation e e ⇒ e");
      }
      if (!mult.is_invertible()) {
        errors.push_back("υ is not invertible");
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    return {endo.source(), std::move(endo), std::move(mult)};
  }

  namespace {

    bool coherent(Functor const& e, NatTrans const& u) {
      auto const& A = *e.source();
      for (obj_t a = 0; a < A.num_objects(); ++a) {
        if (e.map_morphism(u[a]) != u[e(a)]) {
          return false;
        }
      }
      return true;
    }

  }  // namespace

  Splitting split_pseudoidempotent(Pseudoidempotent const& P) {
    auto const& e = P.endo;
    auto const& A = *P.carrier;
    NatTrans    u = P.mult;
    if (!coherent(e, u)) {
      bool found = false;
      for (auto const& v : enumerate_nat_trans(compose(e, e), e)) {
        if (v.is_invertible() && coherent(e, v)) {
          u     = v;
          found = true;
          break;
        }
      }
      if (!found) {
        throw SearchExhausted("no invertible e e ⇒ e with e υ = υ e");
      }
    }
    auto E = biequalizer(e, Functor::identity(P.carrier));
    // The full subcategory on the coherent (a, μ).
    std::vector<obj_t> keep;
    for (auto const& [am, x] : E.objects) {
      auto [a, mu] = am;
      if (e.map_morphism(mu) == u[a]) {
        keep.push_back(x);
      }
    }
    std::sort(keep.begin(), keep.end());
    auto sub = full_subcategory(E.category, keep);
    auto B   = sub.category;
    std::vector<obj_t> index(E.category->num_objects(), UNDEFINED);
    for (obj_t y = 0; y < keep.size(); ++y) {
      index[keep[y]] = y;
    }
    auto in_sub = [&](mor_t m) {
      return *B->find_morphism(E.category->morphism_name(m));
    };

    Functor s = compose(E.projection, sub.inclusion);
    std::vector<obj_t> robj;
    std::vector<mor_t> rmor;
    for (obj_t a = 0; a < A.num_objects(); ++a) {
      robj.push_back(index[*E.find(e(a), u[a])]);
    }
    for (mor_t f = 0; f < A.num_morphisms(); ++f) {
      obj_t x = keep[robj[A.dom(f)]], y = keep[robj[A.cod(f)]];
      rmor.push_back(in_sub(*E.lift(e.map_morphism(f), x, y)));
    }
    Functor r = Functor::make(P.carrier, B, robj, rmor);

    std::vector<mor_t> beta;
    for (obj_t y = 0; y < keep.size(); ++y) {
      mor_t mu = E.theta[keep[y]];
      beta.push_back(in_sub(*E.lift(mu, keep[r(s(y))], keep[y])));
    }
    Splitting S;
    S.category      = B;
    S.r             = r;
    S.s             = s;
    S.alpha         = NatTrans::identity(e);
    S.beta          = NatTrans::make(compose(r, s), Functor::identity(B), beta);
    S.coherent_mult = u;
    return S;
  }

  Verdict check_splitting(Pseudoidempotent const& P, Splitting const& S) {
    std::vector<std::string> failures;
    auto check = [&](bool ok, std::string what) {
      if (!ok) {
        failures.push_back(std::move(what));
      }
    };
    check(same_category(S.r.source(), P.carrier)
              && same_category(S.r.target(), S.category),
          "r: A → B");
    check(same_category(S.s.source(), S.category)
              && same_category(S.s.target(), P.carrier),
          "s: B → A");
    if (failures.empty()) {
      check(S.alpha.source() == P.endo
                && S.alpha.target() == compose(S.s, S.r),
            "α: e ⇒ s r");
      check(S.beta.source() == compose(S.r, S.s)
                && S.beta.target() == Functor::identity(S.category),
            "β: r s ⇒ 1");
      check(S.alpha.is_invertible(), "α invertible");
      check(S.beta.is_invertible(), "β invertible");
    }
    if (!failures.empty()) {
      return Verdict::negative("splitting",
                               {failures.front(), failures, "the splitting data"});
    }
    return Verdict::positive(
        "splitting",
        {{"α", {}, {std::to_string(S.category->num_objects()) + " objects"}},
         {"β", {}, {}}});
  }

  ////////////////////////////////////////////////////////////////////////
  // Pointwise limits
  ////////////////////////////////////////////////////////////////////////

  namespace {

    // Keys of non-strict comparisons of either diagram.
    std::vector<std::uint64_t> comp_keys(CatPseudoFunctor const& F,
                                         CatPseudoFunctor const& G) {
      std::vector<std::uint64_t> out;
      for (auto const& [k, v] : F.data().comp_iso) {
        out.push_back(k);
      }
      for (auto const& [k, v] : G.data().comp_iso) {
        out.push_back(k);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }

    std::vector<zero_t> unit_keys(CatPseudoFunctor const& F,
                                  CatPseudoFunctor const& G) {
      std::vector<zero_t> out;
      for (auto const& [k, v] : F.data().unit_iso) {
        out.push_back(k);
      }
      for (auto const& [k, v] : G.data().unit_iso) {
        out.push_back(k);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }

    one_t key_t(std::uint64_t k) {
      return static_cast<one_t>(k >> 32);
    }
    one_t key_s(std::uint64_t k) {
      return static_cast<one_t>(k & 0xffffffffu);
    }

  }  // namespace

  PointwiseProduct pointwise_product(CatPseudoFunctor const& F,
                                     CatPseudoFunctor const& G) {
    if (F.base() != G.base()) {
      throw PreconditionError("pointwise_product: different indexes");
    }
    auto const&            I = *F.base();
    PointwiseProduct       out;
    CatPseudoFunctor::Data d;
    d.base = F.base();
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      out.fibers.push_back(biproduct(F.on0(i), G.on0(i)));
      d.on0.push_back(out.fibers.back().category);
    }
    for (one_t s : I.one_cells()) {
      d.on1.push_back(product_functor(out.fibers[I.src(s)],
                                      out.fibers[I.tgt(s)], F.on1(s),
                                      G.on1(s)));
    }
    auto pair_components = [&](zero_t i, zero_t j, auto f_at, auto g_at) {
      auto const&        Pi = out.fibers[i];
      auto const&        Pj = out.fibers[j];
      std::vector<mor_t> c;
      for (obj_t x = 0; x < Pi.left->num_objects(); ++x) {
        for (obj_t y = 0; y < Pi.right->num_objects(); ++y) {
          c.push_back(Pj.morphism(f_at(x), g_at(y)));
        }
      }
      return c;
    };
    for (two_t a : I.two_cells()) {
      one_t  s = I.dom2(a), t = I.cod2(a);
      zero_t i = I.src(s), j = I.tgt(s);
      d.on2.push_back(NatTrans::make(
          d.on1[s], d.on1[t],
          pair_components(i, j, [&](obj_t x) { return F.on2(a)[x]; },
                          [&](obj_t y) { return G.on2(a)[y]; })));
    }
    for (auto k : comp_keys(F, G)) {
      one_t t = key_t(k), s = key_s(k);
      d.comp_iso[k] = pair_components(
          I.src(s), I.tgt(t), [&](obj_t x) { return F.comp_at(t, s, x); },
          [&](obj_t y) { return G.comp_at(t, s, y); });
    }
    for (zero_t i : unit_keys(F, G)) {
      d.unit_iso[i] = pair_components(
          i, i, [&](obj_t x) { return F.unit_at(i, x); },
          [&](obj_t y) { return G.unit_at(i, y); });
    }
    out.diagram = CatPseudoFunctor::make(d);
    return out;
  }

  PointwiseBiequalizer pointwise_biequalizer(CatPseudoFunctor const&     F,
                                             CatPseudoFunctor const&     G,
                                             std::vector<Functor> const& P,
                                             std::vector<Functor> const& Q) {
    if (F.base() != G.base()) {
      throw PreconditionError("pointwise_biequalizer: different indexes");
    }
    auto const&            I = *F.base();
    PointwiseBiequalizer   out;
    CatPseudoFunctor::Data d;
    d.base = F.base();
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      out.fibers.push_back(biequalizer(P[i], Q[i]));
      d.on0.push_back(out.fibers.back().category);
    }
    std::vector<std::string> errors;
    // A family of F-morphisms f_x: F-side objects, lifted between E-objects.
    auto lift_all = [&](zero_t i, zero_t j, auto obj_at, auto mor_at,
                        std::string const& what) {
      auto const&        Ei = out.fibers[i];
      auto const&        Ej = out.fibers[j];
      std::vector<mor_t> c;
      for (obj_t x = 0; x < Ei.category->num_objects(); ++x) {
        auto [y1, y2] = obj_at(x);
        auto m        = Ej.lift(mor_at(x), y1, y2);
        if (!m) {
          errors.push_back(what + " does not lift");
          c.push_back(0);
        } else {
          c.push_back(*m);
        }
      }
      return c;
    };
    // E(s)(a, θ) = (F(s)a, G(s)θ).
    std::vector<std::vector<obj_t>> act(I.num_one_cells());
    for (one_t s : I.one_cells()) {
      auto const& Ei = out.fibers[I.src(s)];
      auto const& Ej = out.fibers[I.tgt(s)];
      for (obj_t x = 0; x < Ei.category->num_objects(); ++x) {
        obj_t a  = Ei.projection(x);
        auto  y  = Ej.find(F.on1(s)(a), G.on1(s).map_morphism(Ei.theta[x]));
        if (!y) {
          throw ValidationError("components are not strictly natural at "
                                + I.one_name(s));
        }
        act[s].push_back(*y);
      }
      std::vector<mor_t> mor;
      for (mor_t m = 0; m < Ei.category->num_morphisms(); ++m) {
        auto const& C = *Ei.category;
        auto        f = Ej.lift(F.on1(s).map_morphism(Ei.projection.map_morphism(m)),
                                act[s][C.dom(m)], act[s][C.cod(m)]);
        mor.push_back(f ? *f : 0);
        if (!f) {
          errors.push_back("E(" + I.one_name(s) + ") is not a functor");
        }
      }
      if (!errors.empty()) {
        throw ValidationError(errors);
      }
      d.on1.push_back(
          Functor::make(Ei.category, Ej.category, act[s], mor));
    }
    for (two_t a : I.two_cells()) {
      one_t  s = I.dom2(a), t = I.cod2(a);
      zero_t i = I.src(s);
      auto   c = lift_all(
          i, I.tgt(s),
          [&](obj_t x) { return std::pair{act[s][x], act[t][x]}; },
          [&](obj_t x) { return F.on2(a)[out.fibers[i].projection(x)]; },
          "F(" + I.two_name(a) + ")");
      d.on2.push_back(NatTrans::make(d.on1[s], d.on1[t], c));
    }
    for (auto k : comp_keys(F, G)) {
      one_t t = key_t(k), s = key_s(k);
      one_t ts = I.comp(t, s);
      zero_t i = I.src(s);
      d.comp_iso[k] = lift_all(
          i, I.tgt(t),
          [&](obj_t x) { return std::pair{act[t][act[s][x]], act[ts][x]}; },
          [&](obj_t x) {
            return F.comp_at(t, s, out.fibers[i].projection(x));
          },
          "a composition comparison");
    }
    for (zero_t i : unit_keys(F, G)) {
      d.unit_iso[i] = lift_all(
          i, i, [&](obj_t x) { return std::pair{x, act[I.unit(i)][x]}; },
          [&](obj_t x) { return F.unit_at(i, out.fibers[i].projection(x)); },
          "a unit comparison");
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    out.diagram = CatPseudoFunctor::make(d);
    return out;
  }

  PointwiseCotensor pointwise_cotensor(CatPseudoFunctor const& F) {
    auto const&            I = *F.base();
    PointwiseCotensor      out;
    CatPseudoFunctor::Data d;
    d.base = F.base();
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      out.fibers.push_back(arrow_cotensor(F.on0(i)));
      d.on0.push_back(out.fibers.back().category);
    }
    for (one_t s : I.one_cells()) {
      d.on1.push_back(cotensor_functor(out.fibers[I.src(s)],
                                       out.fibers[I.tgt(s)], F.on1(s)));
    }
    // Per arrow f: a → b of F(i), the square (γ_a, γ_b).
    auto squares = [&](zero_t i, zero_t j, Functor const& X, Functor const& Y,
                       auto at) {
      auto const&        Ai = out.fibers[i];
      auto const&        Aj = out.fibers[j];
      auto const&        C  = *F.on0(i);
      std::vector<mor_t> c;
      for (mor_t f = 0; f < C.num_morphisms(); ++f) {
        c.push_back(*Aj.square(at(C.dom(f)), at(C.cod(f)), X(f), Y(f)));
      }
      (void)Ai;
      return c;
    };
    for (two_t a : I.two_cells()) {
      one_t s = I.dom2(a), t = I.cod2(a);
      d.on2.push_back(NatTrans::make(
          d.on1[s], d.on1[t],
          squares(I.src(s), I.tgt(s), d.on1[s], d.on1[t],
                  [&](obj_t x) { return F.on2(a)[x]; })));
    }
    for (auto const& [k, v] : F.data().comp_iso) {
      one_t t = key_t(k), s = key_s(k);
      d.comp_iso[k] = squares(I.src(s), I.tgt(t),
                              compose(d.on1[t], d.on1[s]), d.on1[I.comp(t, s)],
                              [&](obj_t x) { return F.comp_at(t, s, x); });
    }
    for (auto const& [i, v] : F.data().unit_iso) {
      d.unit_iso[i] = squares(i, i, Functor::identity(d.on0[i]),
                              d.on1[I.unit(i)],
                              [&, i = i](obj_t x) { return F.unit_at(i, x); });
    }
    out.diagram = CatPseudoFunctor::make(d);
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Commutation
  ////////////////////////////////////////////////////////////////////////

  Commutation commute_product(CatPseudoFunctor const& F,
                              CatPseudoFunctor const& G) {
    auto PP = pointwise_product(F, G);
    auto C  = bifiltered_bicolimit(PP.diagram);
    auto CF = bifiltered_bicolimit(F);
    auto CG = bifiltered_bicolimit(G);
    std::vector<Functor> first, second;
    for (auto const& P : PP.fibers) {
      first.push_back(P.first);
      second.push_back(P.second);
    }
    auto    L = biproduct(CF.result, CG.result);
    Functor K = pair_functor(L, map_colimit(C, CF, first),
                             map_colimit(C, CG, second));
    auto a = analyze_functor(K);
    return {K, a, analysis_verdict("commutation:biproduct", a, K)};
  }

  Commutation commute_biequalizer(CatPseudoFunctor const&     F,
                                  CatPseudoFunctor const&     G,
                                  std::vector<Functor> const& P,
                                  std::vector<Functor> const& Q) {
    auto PE = pointwise_biequalizer(F, G, P, Q);
    auto C  = bifiltered_bicolimit(PE.diagram);
    auto CF = bifiltered_bicolimit(F);
    auto CG = bifiltered_bicolimit(G);
    auto MP = map_colimit(CF, CG, P);
    auto MQ = map_colimit(CF, CG, Q);
    auto L  = biequalizer(MP, MQ);
    std::vector<Functor> proj;
    for (auto const& E : PE.fibers) {
      proj.push_back(E.projection);
    }
    auto U = map_colimit(C, CF, proj);

    std::vector<obj_t> obj;
    for (auto [i, x] : C.objects) {
      auto const& E  = PE.fibers[i];
      mor_t       th = CG.class_of(fiber_premorphism(G, i, E.theta[x]));
      auto        y  = L.find(CF.object(i, E.projection(x)), th);
      if (!y) {
        throw std::logic_error("commutation: comparison object missing");
      }
      obj.push_back(*y);
    }
    std::vector<mor_t> mor;
    auto const&        R = *C.result;
    for (mor_t m = 0; m < R.num_morphisms(); ++m) {
      auto f = L.lift(U.map_morphism(m), obj[R.dom(m)], obj[R.cod(m)]);
      if (!f) {
        throw std::logic_error("commutation: comparison morphism missing");
      }
      mor.push_back(*f);
    }
    Functor K = Functor::make(C.result, L.category, obj, mor);
    auto    a = analyze_functor(K);
    return {K, a, analysis_verdict("commutation:biequalizer", a, K)};
  }

  Commutation commute_cotensor(CatPseudoFunctor const& F) {
    auto PC = pointwise_cotensor(F);
    auto C  = bifiltered_bicolimit(PC.diagram);
    auto CF = bifiltered_bicolimit(F);
    auto L  = arrow_cotensor(CF.result);
    std::vector<Functor> dom, cod;
    for (auto const& A : PC.fibers) {
      dom.push_back(A.dom);
      cod.push_back(A.cod);
    }
    auto Dm = map_colimit(C, CF, dom);
    auto Cd = map_colimit(C, CF, cod);

    std::vector<obj_t> obj;
    for (auto [i, f] : C.objects) {
      obj.push_back(CF.class_of(fiber_premorphism(F, i, f)));
    }
    std::vector<mor_t> mor;
    auto const&        R = *C.result;
    for (mor_t m = 0; m < R.num_morphisms(); ++m) {
      auto sq = L.square(Dm.map_morphism(m), Cd.map_morphism(m), obj[R.dom(m)],
                         obj[R.cod(m)]);
      if (!sq) {
        throw std::logic_error("commutation: comparison square missing");
      }
      mor.push_back(*sq);
    }
    Functor K = Functor::make(C.result, L.category, obj, mor);
    auto    a = analyze_functor(K);
    return {K, a, analysis_verdict("commutation:arrow-cotensor", a, K)};
  }

}  // namespace sigmacat
