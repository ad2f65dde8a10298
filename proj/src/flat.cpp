#include "sigmacat/flat.hpp"

#include "sigmacat/bilim.hpp"
#include "sigmacat/errors.hpp"
#include "sigmacat/filtered.hpp"

namespace sigmacat {

  namespace {

    // t ∘ −: hom(i, j) → hom(i, k) for t: j → k.
    Functor post(TwoCat const& C, one_t t, zero_t i) {
      zero_t             j = C.src(t), k = C.tgt(t);
      auto const&        H = *C.hom(i, j);
      std::vector<obj_t> obj;
      std::vector<mor_t> mor;
      for (obj_t x = 0; x < H.num_objects(); ++x) {
        obj.push_back(C.local(C.comp(t, C.global_one(i, j, x))));
      }
      for (mor_t m = 0; m < H.num_morphisms(); ++m) {
        two_t a = C.global_two(C.global_one(i, j, H.dom(m)), m);
        mor.push_back(C.local2(C.hcomp(C.id2(t), a)));
      }
      return Functor::make(C.hom(i, j), C.hom(i, k), obj, mor, Check::structural);
    }

    // − ∘ f: hom(i', j) → hom(i, j) for f: i → i'.
    Functor pre(TwoCat const& C, one_t f, zero_t j) {
      zero_t             i = C.src(f), i2 = C.tgt(f);
      auto const&        H = *C.hom(i2, j);
      std::vector<obj_t> obj;
      std::vector<mor_t> mor;
      for (obj_t x = 0; x < H.num_objects(); ++x) {
        obj.push_back(C.local(C.comp(C.global_one(i2, j, x), f)));
      }
      for (mor_t m = 0; m < H.num_morphisms(); ++m) {
        two_t a = C.global_two(C.global_one(i2, j, H.dom(m)), m);
        mor.push_back(C.local2(C.hcomp(a, C.id2(f))));
      }
      return Functor::make(C.hom(i2, j), C.hom(i, j), obj, mor, Check::structural);
    }

    Verdict wrap(std::string subject, Verdict inner) {
      Verdict v = inner.outcome()
                      ? Verdict::positive(subject, inner.witnesses(),
                                          inner.stats())
                      : Verdict::negative(subject, inner.counterexample(),
                                          inner.stats());
      v.add_part(std::move(inner));
      return v;
    }

  }  // namespace

  CatPseudoFunctor representable_pseudofunctor(TwoCatPtr const& Cp, zero_t c) {
    auto const&            C = *Cp;
    CatPseudoFunctor::Data d;
    d.base = Cp;
    for (zero_t j = 0; j < C.num_zero_cells(); ++j) {
      d.on0.push_back(C.hom(c, j));
    }
    for (one_t t : C.one_cells()) {
      d.on1.push_back(post(C, t, c));
    }
    for (two_t g : C.two_cells()) {
      one_t              t = C.dom2(g), t2 = C.cod2(g);
      zero_t             j = C.src(t);
      std::vector<mor_t> comps;
      for (one_t s : C.one_cells(c, j)) {
        comps.push_back(C.local2(C.hcomp(g, C.id2(s))));
      }
      d.on2.push_back(NatTrans::make(d.on1[t], d.on1[t2], comps));
    }
    return CatPseudoFunctor::make(d);
  }

  ElementsDual elements_dual(CatPseudoFunctor const& F) {
    ElementsDual out{elements_category(F), nullptr, {}, {}, {}};
    auto const&  T = *out.elements.total;
    out.dual       = std::make_shared<TwoCat const>(dual_one_cells(T));
    auto const& D  = *out.dual;
    out.one_to_total.resize(D.num_one_cells());
    out.two_to_total.resize(D.num_two_cells());
    std::vector<one_t> members;
    for (one_t s : D.one_cells()) {
      one_t t             = *T.find_one(D.one_name(s));
      out.one_to_total[s] = t;
      if (out.elements.opcartesian[t]) {
        members.push_back(s);
      }
    }
    for (two_t a : D.two_cells()) {
      out.two_to_total[a] = *T.find_two(D.two_name(a));
    }
    out.opcartesian = SigmaClass(out.dual, members);
    return out;
  }

  Verdict check_flat(CatPseudoFunctor const& F) {
    auto E = elements_dual(F);
    if (E.dual->num_zero_cells() == 0) {
      return Verdict::negative(
          "flat", {"nonempty", {}, "the elements 2-category is empty"});
    }
    return wrap("flat", check_sigma_filtered(E.opcartesian));
  }

  Reconstruction reconstruct_from_representables(CatPseudoFunctor const& F) {
    auto const&    C = *F.base();
    auto           E = elements_dual(F);
    auto    sub = sigma_subcategory(E.opcartesian);
    auto const& K = *sub.category;
    Verdict bif
        = K.num_zero_cells() == 0
              ? Verdict::negative("bifiltered",
                                  {"nonempty", {}, "the opcartesian index is empty"})
              : check_bifiltered(K);
    Reconstruction R{sub.category, bif, {}, {}, {}, {}, {}, bif};
    if (!R.index_bifiltered) {
      R.verdict = wrap("reconstruction", R.index_bifiltered);
      return R;
    }

    // Per index 1-cell k: (i', a') → (i, a), the element arrow (f, φ).
    auto arrow = [&](one_t k) {
      return E.elements.arrows[E.one_to_total[sub.inclusion.on1(k)]];
    };
    auto base2 = [&](two_t k) {
      return E.elements.projection.on2(E.two_to_total[sub.inclusion.on2(k)]);
    };
    auto obj = [&](zero_t x) {
      return E.elements.objects[sub.inclusion.on0(x)];
    };

    std::vector<Functor> H;
    bool                 ok = true;
    for (zero_t j = 0; j < C.num_zero_cells(); ++j) {
      CatPseudoFunctor::Data d;
      d.base = R.index;
      for (zero_t x = 0; x < K.num_zero_cells(); ++x) {
        d.on0.push_back(C.hom(obj(x).first, j));
      }
      for (one_t k : K.one_cells()) {
        d.on1.push_back(pre(C, arrow(k).first, j));
      }
      for (two_t g : K.two_cells()) {
        one_t              k = K.dom2(g), k2 = K.cod2(g);
        zero_t             i2 = obj(K.src(k)).first;
        two_t              be = base2(g);
        std::vector<mor_t> comps;
        for (one_t s : C.one_cells(i2, j)) {
          comps.push_back(C.local2(C.hcomp(C.id2(s), be)));
        }
        d.on2.push_back(NatTrans::make(d.on1[k], d.on1[k2], comps));
      }
      R.diagrams.push_back(CatPseudoFunctor::make(d));
      R.colimits.push_back(bifiltered_bicolimit(R.diagrams.back()));

      // The cocone s ↦ F(s)(a).
      Cocone cone{F.on0(j), {}, {}};
      auto const& Z = *F.on0(j);
      for (zero_t x = 0; x < K.num_zero_cells(); ++x) {
        auto [i, a]          = obj(x);
        auto const&        Hm = *C.hom(i, j);
        std::vector<obj_t> o;
        std::vector<mor_t> m;
        for (obj_t s = 0; s < Hm.num_objects(); ++s) {
          o.push_back(F.on1(C.global_one(i, j, s))(a));
        }
        for (mor_t g = 0; g < Hm.num_morphisms(); ++g) {
          two_t ga = C.global_two(C.global_one(i, j, Hm.dom(g)), g);
          m.push_back(F.on2(ga)[a]);
        }
        cone.legs.push_back(Functor::make(C.hom(i, j), F.on0(j), o, m));
      }
      for (one_t k : K.one_cells()) {
        auto [f, phi]  = arrow(k);
        zero_t   src   = K.src(k), tgt = K.tgt(k);
        auto [i, a]    = obj(tgt);
        zero_t   i2    = obj(src).first;
        std::vector<mor_t> comps;
        for (one_t s : C.one_cells(i2, j)) {
          comps.push_back(Z.compose(F.on1(s).map_morphism(phi),
                                    F.comp_inv_at(s, f, a)));
        }
        cone.cells.push_back(NatTrans::make(
            compose(cone.legs[tgt], R.diagrams.back().on1(k)), cone.legs[src],
            comps));
      }
      auto fac = factor_cocone(R.colimits.back(), cone);
      R.comparisons.push_back(fac.functor);
      auto a   = analyze_functor(fac.functor);
      auto eqv = check_equivalence(R.colimits.back().result, F.on0(j)).verdict;
      Verdict v
          = a.is_equivalence()
                ? Verdict::positive(C.zero_name(j),
                                    {{"comparison", {C.zero_name(j)}, {}}})
                : Verdict::negative(C.zero_name(j),
                                    {"comparison", {C.zero_name(j), a.failure},
                                     "the induced functor"});
      v.add_part(eqv);
      ok = ok && v.outcome() && eqv.outcome();
      R.pointwise.push_back(std::move(v));
    }
    for (one_t t : C.one_cells()) {
      zero_t               j = C.src(t), j2 = C.tgt(t);
      std::vector<Functor> comps;
      for (zero_t x = 0; x < K.num_zero_cells(); ++x) {
        comps.push_back(post(C, t, obj(x).first));
      }
      auto M  = map_colimit(R.colimits[j], R.colimits[j2], comps);
      bool nt = find_natural_iso(compose(F.on1(t), R.comparisons[j]),
                                 compose(R.comparisons[j2], M))
                    .has_value();
      R.natural.push_back(nt);
      ok = ok && nt;
    }
    if (ok) {
      R.verdict = Verdict::positive(
          "reconstruction",
          {{"pointwise", {},
            {std::to_string(C.num_zero_cells()) + " fibers"}},
           {"naturality", {},
            {std::to_string(C.num_one_cells()) + " 1-cells"}}});
    } else {
      std::string where;
      for (zero_t j = 0; j < R.pointwise.size(); ++j) {
        if (!R.pointwise[j] || !R.pointwise[j].parts().front()) {
          where = "fiber " + C.zero_name(j);
          break;
        }
      }
      for (one_t t = 0; where.empty() && t < R.natural.size(); ++t) {
        if (!R.natural[t]) {
          where = "naturality at " + C.one_name(t);
        }
      }
      R.verdict = Verdict::negative("reconstruction",
                                    {"reconstruction", {where},
                                     "pointwise comparisons"});
    }
    for (auto const& v : R.pointwise) {
      R.verdict.add_part(v);
    }
    return R;
  }

  Reconstruction decompose_flat(CatPseudoFunctor const& F) {
    auto v = check_flat(F);
    if (!v) {
      throw PreconditionError("not flat: " + v.counterexample().condition
                              + " fails");
    }
    return reconstruct_from_representables(F);
  }

  void validate_base_cone(TwoCat const& C, BaseCone const& cone) {
    std::vector<std::string> errors;
    auto                     T = std::make_shared<FinCat const>(terminal_category());
    if (cone.kind == BaseCone::Kind::terminal) {
      if (!cone.legs.empty()) {
        errors.push_back("a terminal cone has no legs");
      }
      for (zero_t j = 0; errors.empty() && j < C.num_zero_cells(); ++j) {
        if (!check_equivalence(C.hom(j, cone.apex), T).verdict) {
          errors.push_back("hom(" + C.zero_name(j) + ", "
                           + C.zero_name(cone.apex) + ") is not contractible");
        }
      }
    } else {
      if (cone.legs.size() != 2 || C.src(cone.legs[0]) != cone.apex
          || C.src(cone.legs[1]) != cone.apex) {
        errors.push_back("a product cone has two legs out of its apex");
      }
      for (zero_t j = 0; errors.empty() && j < C.num_zero_cells(); ++j) {
        auto P = biproduct(C.hom(j, C.tgt(cone.legs[0])),
                           C.hom(j, C.tgt(cone.legs[1])));
        auto K = pair_functor(P, post(C, cone.legs[0], j),
                              post(C, cone.legs[1], j));
        auto a = analyze_functor(K);
        if (!a.is_equivalence()) {
          errors.push_back("not a bilimit cone at " + C.zero_name(j) + ": "
                           + a.failure);
        }
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
  }

  Verdict check_flat_preserves_bilimits(CatPseudoFunctor const& F,
                                        BaseCone const&         cone) {
    validate_base_cone(*F.base(), cone);
    auto T = std::make_shared<FinCat const>(terminal_category());
    if (cone.kind == BaseCone::Kind::terminal) {
      auto v = check_equivalence(F.on0(cone.apex), T).verdict;
      return wrap("preserves:terminal", v);
    }
    auto const& I = *F.base();
    auto        P = biproduct(F.on0(I.tgt(cone.legs[0])),
                              F.on0(I.tgt(cone.legs[1])));
    auto K = pair_functor(P, F.on1(cone.legs[0]), F.on1(cone.legs[1]));
    auto a = analyze_functor(K);
    if (a.is_equivalence()) {
      return Verdict::positive("preserves:product",
                               {{"comparison", {I.zero_name(cone.apex)}, {}}});
    }
    return Verdict::negative("preserves:product",
                             {"comparison", {I.zero_name(cone.apex), a.failure},
                              "the image of the cone"});
  }

}  // namespace sigmacat
