#include "sigmacat/lexkit.hpp"

#include <functional>
#include <set>

#include "sigmacat/errors.hpp"
#include "sigmacat/filtered.hpp"

namespace sigmacat {

  namespace {

    CatPtr make_shape(std::vector<std::string>                 objects,
                      std::vector<FinCatData::Morphism>        morphisms,
                      std::vector<std::array<std::string, 3>> composition = {}) {
      FinCatData d;
      d.objects     = std::move(objects);
      d.morphisms   = std::move(morphisms);
      d.composition = std::move(composition);
      return std::make_shared<FinCat const>(validate_fincat(d));
    }

    CatPtr const& empty_shape() {
      static CatPtr const s = make_shape({}, {});
      return s;
    }
    CatPtr const& pair_shape() {
      static CatPtr const s = make_shape({"x", "y"}, {});
      return s;
    }
    CatPtr const& parallel_shape() {
      static CatPtr const s
          = make_shape({"x", "y"}, {{"f", "x", "y"}, {"g", "x", "y"}});
      return s;
    }

    // The diagram J → C with the given objects and, by name, non-identity
    // morphisms.
    Functor diagram(CatPtr const&                      J,
                    CatPtr const&                      C,
                    std::vector<obj_t> const&          obj,
                    std::map<std::string, mor_t> const& mor = {}) {
      std::vector<mor_t> m(J->num_morphisms());
      for (mor_t u = 0; u < m.size(); ++u) {
        m[u] = J->is_identity(u) ? C->identity(obj[J->dom(u)])
                                 : mor.at(J->morphism_name(u));
      }
      return Functor::make(J, C, obj, m, Check::structural);
    }

    std::string describe(Functor const& G) {
      auto const& J = *G.source();
      auto const& C = *G.target();
      std::string out;
      for (obj_t j = 0; j < J.num_objects(); ++j) {
        out += (j ? "," : "") + C.object_name(G(j));
      }
      for (mor_t u = 0; u < J.num_morphisms(); ++u) {
        if (!J.is_identity(u)) {
          out += ";" + J.morphism_name(u) + "=" + C.morphism_name(G.map_morphism(u));
        }
      }
      return "[" + out + "]";
    }

    LimitCone image(Functor const& F, LimitCone const& L) {
      LimitCone out{compose(F, L.diagram), F(L.apex), {}};
      for (mor_t l : L.legs) {
        out.legs.push_back(F.map_morphism(l));
      }
      return out;
    }

  }  // namespace

  std::vector<std::vector<mor_t>> cones_over(Functor const& G, obj_t z) {
    auto const&                     J = *G.source();
    auto const&                     C = *G.target();
    std::vector<std::vector<mor_t>> out;
    std::vector<mor_t>              cur(J.num_objects());
    // Non-identity morphisms checked once both ends are assigned.
    std::vector<std::vector<mor_t>> due(J.num_objects());
    for (mor_t u = 0; u < J.num_morphisms(); ++u) {
      if (!J.is_identity(u)) {
        due[std::max(J.dom(u), J.cod(u))].push_back(u);
      }
    }
    std::function<void(obj_t)> go = [&](obj_t j) {
      if (j == J.num_objects()) {
        out.push_back(cur);
        return;
      }
      for (mor_t l : C.hom(z, G(j))) {
        cur[j]  = l;
        bool ok = true;
        for (mor_t u : due[j]) {
          if (C.compose(G.map_morphism(u), cur[J.dom(u)]) != cur[J.cod(u)]) {
            ok = false;
            break;
          }
        }
        if (ok) {
          go(j + 1);
        }
      }
    };
    go(0);
    return out;
  }

  bool is_limit_cone(LimitCone const& L) {
    auto const& C = *L.diagram.target();
    auto const& J = *L.diagram.source();
    if (L.legs.size() != J.num_objects()) {
      return false;
    }
    for (obj_t j = 0; j < J.num_objects(); ++j) {
      if (C.dom(L.legs[j]) != L.apex || C.cod(L.legs[j]) != L.diagram(j)) {
        return false;
      }
    }
    for (mor_t u = 0; u < J.num_morphisms(); ++u) {
      if (C.compose(L.diagram.map_morphism(u), L.legs[J.dom(u)])
          != L.legs[J.cod(u)]) {
        return false;
      }
    }
    for (obj_t z = 0; z < C.num_objects(); ++z) {
      auto                            cones = cones_over(L.diagram, z);
      auto                            hs    = C.hom(z, L.apex);
      std::set<std::vector<mor_t>>    seen;
      if (hs.size() != cones.size()) {
        return false;
      }
      for (mor_t h : hs) {
        std::vector<mor_t> c;
        for (mor_t l : L.legs) {
          c.push_back(C.compose(l, h));
        }
        if (!seen.insert(c).second) {
          return false;
        }
      }
    }
    return true;
  }

  std::optional<LimitCone> find_limit(Functor const& G) {
    auto const& C = *G.target();
    for (obj_t p = 0; p < C.num_objects(); ++p) {
      for (auto& legs : cones_over(G, p)) {
        LimitCone L{G, p, std::move(legs)};
        if (is_limit_cone(L)) {
          return L;
        }
      }
    }
    return std::nullopt;
  }

  LimitWitnesses finite_limit_witnesses(CatPtr const& Cp) {
    auto const&    C = *Cp;
    LimitWitnesses W;
    W.terminal = find_limit(diagram(empty_shape(), Cp, {}));
    if (!W.terminal) {
      W.failure = "no terminal object";
      return W;
    }
    for (obj_t x = 0; x < C.num_objects(); ++x) {
      for (obj_t y = 0; y < C.num_objects(); ++y) {
        auto L = find_limit(diagram(pair_shape(), Cp, {x, y}));
        if (!L) {
          W.failure = "no product of " + C.object_name(x) + " and "
                      + C.object_name(y);
          return W;
        }
        W.products.push_back(std::move(*L));
      }
    }
    for (obj_t x = 0; x < C.num_objects(); ++x) {
      for (obj_t y = 0; y < C.num_objects(); ++y) {
        auto hs = C.hom(x, y);
        for (mor_t f : hs) {
          for (mor_t g : hs) {
            auto L = find_limit(
                diagram(parallel_shape(), Cp, {x, y}, {{"f", f}, {"g", g}}));
            if (!L) {
              W.failure = "no equalizer of " + C.morphism_name(f) + " and "
                          + C.morphism_name(g);
              return W;
            }
            W.equalizers.push_back(std::move(*L));
          }
        }
      }
    }
    return W;
  }

  Verdict is_lex_functor(Functor const& F) {
    auto W = finite_limit_witnesses(F.source());
    if (!W.complete()) {
      throw PreconditionError("the source is not lex: " + *W.failure);
    }
    auto check = [&](LimitCone const& L, std::string const& kind)
        -> std::optional<Counterexample> {
      if (is_limit_cone(image(F, L))) {
        return std::nullopt;
      }
      return Counterexample{"preserves " + kind,
                            {describe(L.diagram),
                             F.source()->object_name(L.apex)},
                            "the image of the " + kind + " cone"};
    };
    std::optional<Counterexample> bad = check(*W.terminal, "terminal");
    for (auto const& L : W.products) {
      if (!bad) {
        bad = check(L, "product");
      }
    }
    for (auto const& L : W.equalizers) {
      if (!bad) {
        bad = check(L, "equalizer");
      }
    }
    if (bad) {
      return Verdict::negative("lex-functor", *bad);
    }
    return Verdict::positive(
        "lex-functor",
        {{"terminal", {}, {}},
         {"product", {}, {std::to_string(W.products.size()) + " cones"}},
         {"equalizer", {}, {std::to_string(W.equalizers.size()) + " cones"}}});
  }

  std::vector<Shape> limit_shape_catalogue() {
    return {
        {"empty", empty_shape()},
        {"point", make_shape({"a"}, {})},
        {"discrete2", pair_shape()},
        {"discrete3", make_shape({"a", "b", "c"}, {})},
        {"arrow", make_shape({"a", "b"}, {{"f", "a", "b"}})},
        {"arrow+point", make_shape({"a", "b", "c"}, {{"f", "a", "b"}})},
        {"parallel", parallel_shape()},
        {"parallel+point",
         make_shape({"a", "b", "c"}, {{"f", "a", "b"}, {"g", "a", "b"}})},
        {"triple-parallel",
         make_shape({"a", "b"},
                    {{"f", "a", "b"}, {"g", "a", "b"}, {"h", "a", "b"}})},
        {"span", make_shape({"a", "b", "c"}, {{"f", "c", "a"}, {"g", "c", "b"}})},
        {"cospan",
         make_shape({"a", "b", "c"}, {{"f", "a", "c"}, {"g", "b", "c"}})},
        {"chain3", make_shape({"a", "b", "c"},
                              {{"f", "a", "b"}, {"g", "b", "c"}, {"h", "a", "c"}},
                              {{"g", "f", "h"}})},
        {"iso", make_shape({"a", "b"}, {{"f", "a", "b"}, {"g", "b", "a"}},
                           {{"g", "f", "1_a"}, {"f", "g", "1_b"}})},
        {"z2", make_shape({"a"}, {{"s", "a", "a"}}, {{"s", "s", "1_a"}})},
        {"idempotent", make_shape({"a"}, {{"e", "a", "a"}}, {{"e", "e", "e"}})},
        {"fork", make_shape({"a", "b", "c"},
                            {{"f", "a", "b"},
                             {"g", "a", "b"},
                             {"h", "b", "c"},
                             {"k", "a", "c"}},
                            {{"h", "f", "k"}, {"h", "g", "k"}})},
    };
  }

  namespace {

    // The limit formula for one diagram G in the colimit. Returns a failure
    // description, if any.
    std::optional<std::string> check_formula(ColimitCat const& C,
                                             Functor const&    G) {
      auto const& I = *C.index;
      auto const& F = C.diagram;
      auto const& R = *C.result;
      auto const& J = *G.source();
      std::size_t n = J.num_objects();
      std::vector<std::pair<zero_t, obj_t>> rep;
      for (obj_t j = 0; j < n; ++j) {
        rep.push_back(C.objects[G(j)]);
      }
      std::vector<mor_t> nonid;
      for (mor_t u = 0; u < J.num_morphisms(); ++u) {
        if (!J.is_identity(u)) {
          nonid.push_back(u);
        }
      }

      for (zero_t k = 0; k < I.num_zero_cells(); ++k) {
        auto const&        Fk = *F.on0(k);
        std::vector<one_t> r(n);
        std::optional<std::string> result;
        bool                       done = false;

        // θ_{r_j} at a_j: q_k F(r_j) a_j → G(j).
        auto theta = [&](obj_t j) {
          return C.transitions[r[j]][rep[j].second];
        };
        auto try_legs = [&]() {
          std::vector<obj_t> obj(n);
          for (obj_t j = 0; j < n; ++j) {
            obj[j] = F.on1(r[j])(rep[j].second);
          }
          std::vector<std::vector<mor_t>> cands;
          for (mor_t u : nonid) {
            obj_t              j = J.dom(u), j2 = J.cod(u);
            std::vector<mor_t> cs;
            for (mor_t g : Fk.hom(obj[j], obj[j2])) {
              mor_t t = R.compose(
                  theta(j2),
                  R.compose(C.legs[k].map_morphism(g), R.inverse(theta(j))));
              if (t == G.map_morphism(u)) {
                cs.push_back(g);
              }
            }
            if (cs.empty()) {
              return;
            }
            cands.push_back(std::move(cs));
          }
          std::vector<mor_t>          mor(J.num_morphisms());
          std::function<void(std::size_t)> go = [&](std::size_t p) {
            if (done) {
              return;
            }
            if (p == nonid.size()) {
              for (mor_t u = 0; u < J.num_morphisms(); ++u) {
                if (J.is_identity(u)) {
                  mor[u] = Fk.identity(obj[J.dom(u)]);
                }
              }
              for (mor_t u = 0; u < J.num_morphisms(); ++u) {
                for (mor_t v = 0; v < J.num_morphisms(); ++v) {
                  if (J.cod(u) == J.dom(v)
                      && mor[J.compose(v, u)] != Fk.compose(mor[v], mor[u])) {
                    return;
                  }
                }
              }
              done    = true;
              auto Gk = Functor::make(G.source(), F.on0(k), obj, mor,
                                      Check::structural);
              auto L  = find_limit(Gk);
              if (!L) {
                result = "no stage-wise limit at " + I.zero_name(k);
                return;
              }
              LimitCone img{G, C.legs[k](L->apex), {}};
              for (obj_t j = 0; j < n; ++j) {
                img.legs.push_back(R.compose(
                    theta(j), C.legs[k].map_morphism(L->legs[j])));
              }
              if (!is_limit_cone(img)) {
                result = "the image of the stage-wise limit at "
                         + I.zero_name(k) + " is not a limit";
              }
              return;
            }
            for (mor_t g : cands[p]) {
              mor[nonid[p]] = g;
              go(p + 1);
            }
          };
          go(0);
        };
        std::function<void(obj_t)> pick = [&](obj_t j) {
          if (done) {
            return;
          }
          if (j == n) {
            try_legs();
            return;
          }
          for (one_t s : I.one_cells(rep[j].first, k)) {
            r[j] = s;
            pick(j + 1);
          }
        };
        pick(0);
        if (done) {
          return result;
        }
      }
      return "no stage represents the diagram";
    }

  }  // namespace

  LexColimitReport verify_lex_bicolimit(CatPseudoFunctor const&  F,
                                        LexColimitOptions const& options) {
    auto const& I = *F.base();
    if (!check_bifiltered(I)) {
      throw PreconditionError("the index is not bifiltered");
    }
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      auto W = finite_limit_witnesses(F.on0(i));
      if (!W.complete()) {
        throw PreconditionError("F(" + I.zero_name(i) + ") is not lex: "
                                + *W.failure);
      }
    }
    for (one_t d : I.one_cells()) {
      if (!is_lex_functor(F.on1(d))) {
        throw PreconditionError("F(" + I.one_name(d) + ") is not lex");
      }
    }

    auto C = bifiltered_bicolimit(F, options.colimit);
    auto W = finite_limit_witnesses(C.result);
    auto a = W.complete()
                 ? Verdict::positive("lex:colimit",
                                     {{"finite-limits",
                                       {},
                                       {std::to_string(W.products.size())
                                            + " products",
                                        std::to_string(W.equalizers.size())
                                            + " equalizers"}}})
                 : Verdict::negative("lex:colimit",
                                     {"finite-limits", {}, *W.failure});
    std::vector<Verdict> legs;
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      legs.push_back(is_lex_functor(C.legs[i]));
    }

    std::size_t              checked = 0;
    std::vector<std::string> failures;
    for (auto const& shape : limit_shape_catalogue()) {
      auto        gs    = enumerate_functors(shape.category, C.result);
      std::size_t count = 0;
      for (auto const& G : gs) {
        if (options.diagrams_per_shape
            && count == options.diagrams_per_shape) {
          break;
        }
        ++count;
        ++checked;
        if (auto f = check_formula(C, G)) {
          failures.push_back(shape.name + " " + describe(G) + ": " + *f);
        }
      }
    }

    bool ok = a.outcome() && failures.empty();
    for (auto const& v : legs) {
      ok = ok && v.outcome();
    }
    Verdict v = ok ? Verdict::positive(
                    "lex-closure",
                    {{"colimit-lex", {}, {}},
                     {"legs-lex", {}, {std::to_string(legs.size()) + " legs"}},
                     {"limit-formula",
                      {},
                      {std::to_string(checked) + " diagrams"}}})
                   : Verdict::negative(
                       "lex-closure",
                       {!a.outcome()         ? "colimit-lex"
                        : !failures.empty() ? "limit-formula"
                                            : "legs-lex",
                        failures.empty() ? std::vector<std::string>{}
                                         : std::vector<std::string>{
                                             failures.front()},
                        "the lex closure assertions"});
    v.add_part(a);
    for (auto const& l : legs) {
      v.add_part(l);
    }
    return {std::move(C), a, std::move(legs), checked, std::move(failures), v};
  }

}  // namespace sigmacat
