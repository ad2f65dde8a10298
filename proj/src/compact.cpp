#include "sigmacat/compact.hpp"

#include <map>
#include <string>

#include "sigmacat/errors.hpp"

namespace sigmacat {

  namespace {

    bool same_cells(NatTrans const& a, NatTrans const& b) {
      return a.source() == b.source() && a.target() == b.target()
             && a.components() == b.components();
    }

    // β · θ_d b : q_k F(d) b ⇒ a.
    NatTrans transported(ColimitCat const& C, OneCellLift const& L, one_t d) {
      return vcompose(L.beta, whisker_right(C.transitions[d], L.b));
    }

    // β' · θ_{d'} b' · q_k ψ.
    NatTrans pasted(ColimitCat const&  C,
                    OneCellLift const& L2,
                    zero_t             k,
                    one_t              d2,
                    NatTrans const&    psi) {
      return vcompose(transported(C, L2, d2), whisker_left(C.legs[k], psi));
    }

    void require_target(ColimitCat const& C, Functor const& a) {
      if (!same_category(a.target(), C.result)) {
        throw PreconditionError("the functor does not land in the colimit");
      }
    }

    // Calls visit(k, d, d') over every cospan i → k ← i' until it returns
    // true.
    template <typename Visit>
    bool for_each_cospan(TwoCat const& I, zero_t i, zero_t i2, Visit visit) {
      for (zero_t k = 0; k < I.num_zero_cells(); ++k) {
        for (one_t d : I.one_cells(i, k)) {
          for (one_t d2 : I.one_cells(i2, k)) {
            if (visit(k, d, d2)) {
              return true;
            }
          }
        }
      }
      return false;
    }

    // The first ψ: F(d) b ⇒ F(d') b' with the pasting equal to `want`.
    std::optional<NatTrans> solve(ColimitCat const&  C,
                                  OneCellLift const& L,
                                  OneCellLift const& L2,
                                  zero_t             k,
                                  one_t              d,
                                  one_t              d2,
                                  NatTrans const&    want,
                                  bool               invertible) {
      auto const& F   = C.diagram;
      auto        src = compose(F.on1(d), L.b);
      auto        tgt = compose(F.on1(d2), L2.b);
      for (auto const& psi : enumerate_nat_trans(src, tgt)) {
        if (invertible && !psi.is_invertible()) {
          continue;
        }
        if (same_cells(pasted(C, L2, k, d2, psi), want)) {
          return psi;
        }
      }
      return std::nullopt;
    }

    // Functor → object index in a functor category.
    class FunctorIndex {
     public:
      explicit FunctorIndex(FunctorCategory const& FC) : _fc(&FC) {
        for (obj_t x = 0; x < FC.functors.size(); ++x) {
          _index.emplace(key(FC.functors[x]), x);
        }
      }

      obj_t object(Functor const& G) const {
        return _index.at(key(G));
      }

      mor_t morphism(NatTrans const& a) const {
        obj_t x = object(a.source()), y = object(a.target());
        for (mor_t m : _fc->category->hom(x, y)) {
          if (_fc->transformations[m].components() == a.components()) {
            return m;
          }
        }
        throw std::logic_error("transformation missing from functor category");
      }

      mor_t morphism(obj_t x, obj_t y, std::vector<mor_t> const& comps) const {
        for (mor_t m : _fc->category->hom(x, y)) {
          if (_fc->transformations[m].components() == comps) {
            return m;
          }
        }
        throw std::logic_error("transformation missing from functor category");
      }

     private:
      static std::vector<std::uint32_t> key(Functor const& G) {
        std::vector<std::uint32_t> k(G.obj_map().begin(), G.obj_map().end());
        k.push_back(~0u);
        k.insert(k.end(), G.mor_map().begin(), G.mor_map().end());
        return k;
      }

      FunctorCategory const*                        _fc;
      std::map<std::vector<std::uint32_t>, obj_t> _index;
    };

    // Post-composition Fun(K, X) → Fun(K, Y) with H: X → Y.
    Functor post(FunctorCategory const& A,
                 FunctorCategory const& B,
                 FunctorIndex const&    IB,
                 Functor const&         H) {
      std::vector<obj_t> obj;
      std::vector<mor_t> mor;
      for (auto const& G : A.functors) {
        obj.push_back(IB.object(compose(H, G)));
      }
      for (auto const& a : A.transformations) {
        mor.push_back(IB.morphism(whisker_left(H, a)));
      }
      return Functor::make(A.category, B.category, obj, mor, Check::structural);
    }

    // The transformation with component at G the morphism of B given by
    // per-object components comp(G, x).
    template <typename Comp>
    NatTrans pointwise(Functor const&         P,
                       Functor const&         Q,
                       FunctorCategory const& A,
                       FunctorIndex const&    IB,
                       Comp                   comp) {
      std::vector<mor_t> out;
      for (obj_t g = 0; g < A.functors.size(); ++g) {
        auto const&        G = A.functors[g];
        std::vector<mor_t> cs;
        for (obj_t x = 0; x < G.source()->num_objects(); ++x) {
          cs.push_back(comp(G, x));
        }
        out.push_back(IB.morphism(P(g), Q(g), cs));
      }
      return NatTrans::make(P, Q, out);
    }

  }  // namespace

  OneCellLift lift_one_cell(ColimitCat const& C, Functor const& a) {
    require_target(C, a);
    auto const& I = *C.index;
    auto const& K = a.source();
    std::vector<std::vector<Functor>> candidates;
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      candidates.push_back(enumerate_functors(K, C.diagram.on0(i)));
      for (auto const& b : candidates.back()) {
        if (compose(C.legs[i], b) == a) {
          return {i, b, NatTrans::identity(a)};
        }
      }
    }
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      for (auto const& b : candidates[i]) {
        if (auto beta = find_natural_iso(compose(C.legs[i], b), a)) {
          return {i, b, *beta};
        }
      }
    }
    throw SearchExhausted("no stage of the diagram lifts the functor");
  }

  bool check_one_cell_lift(ColimitCat const&  C,
                           Functor const&     a,
                           OneCellLift const& L) {
    return L.index < C.legs.size() && L.beta.is_invertible()
           && L.beta.source() == compose(C.legs[L.index], L.b)
           && L.beta.target() == a;
  }

  Refinement refine_lifts(ColimitCat const&  C,
                          OneCellLift const& L,
                          OneCellLift const& L2) {
    std::optional<Refinement> out;
    for_each_cospan(*C.index, L.index, L2.index,
                    [&](zero_t k, one_t d, one_t d2) {
                      auto want = transported(C, L, d);
                      if (auto g = solve(C, L, L2, k, d, d2, want, true)) {
                        out = Refinement{k, d, d2, *g};
                      }
                      return out.has_value();
                    });
    if (!out) {
      throw SearchExhausted("no common refinement of the two lifts");
    }
    return *out;
  }

  bool check_refinement(ColimitCat const&  C,
                        OneCellLift const& L,
                        OneCellLift const& L2,
                        Refinement const&  R) {
    auto const& I = *C.index;
    if (I.src(R.left) != L.index || I.src(R.right) != L2.index
        || I.tgt(R.left) != R.stage || I.tgt(R.right) != R.stage
        || !R.gamma.is_invertible()) {
      return false;
    }
    return same_cells(pasted(C, L2, R.stage, R.right, R.gamma),
                      transported(C, L, R.left));
  }

  TwoCellLift lift_two_cell(ColimitCat const& C, NatTrans const& phi) {
    return lift_two_cell(C, phi, lift_one_cell(C, phi.source()),
                         lift_one_cell(C, phi.target()));
  }

  TwoCellLift lift_two_cell(ColimitCat const&  C,
                            NatTrans const&    phi,
                            OneCellLift const& source,
                            OneCellLift const& target) {
    std::optional<TwoCellLift> out;
    for_each_cospan(*C.index, source.index, target.index,
                    [&](zero_t k, one_t d, one_t d2) {
                      auto want = vcompose(phi, transported(C, source, d));
                      if (auto p = solve(C, source, target, k, d, d2, want,
                                         false)) {
                        out = TwoCellLift{source, target, k, d, d2, *p};
                      }
                      return out.has_value();
                    });
    if (!out) {
      throw SearchExhausted("no lift of the 2-cell");
    }
    return *out;
  }

  bool check_two_cell_lift(ColimitCat const&  C,
                           NatTrans const&    phi,
                           TwoCellLift const& L) {
    auto const& I = *C.index;
    if (!check_one_cell_lift(C, phi.source(), L.source)
        || !check_one_cell_lift(C, phi.target(), L.target)
        || I.src(L.left) != L.source.index || I.src(L.right) != L.target.index
        || I.tgt(L.left) != L.stage || I.tgt(L.right) != L.stage) {
      return false;
    }
    return same_cells(pasted(C, L.target, L.stage, L.right, L.psi),
                      vcompose(phi, transported(C, L.source, L.left)));
  }

  ParallelLift lift_parallel_pair(ColimitCat const& C,
                                  NatTrans const&   phi,
                                  NatTrans const&   phi2) {
    if (!(phi.source() == phi2.source()) || !(phi.target() == phi2.target())) {
      throw PreconditionError("the 2-cells are not parallel");
    }
    auto                        src = lift_one_cell(C, phi.source());
    auto                        tgt = lift_one_cell(C, phi.target());
    std::optional<ParallelLift> out;
    for_each_cospan(
        *C.index, src.index, tgt.index, [&](zero_t k, one_t d, one_t d2) {
          auto z = solve(C, src, tgt, k, d, d2,
                         vcompose(phi, transported(C, src, d)), false);
          if (!z) {
            return false;
          }
          auto x = solve(C, src, tgt, k, d, d2,
                         vcompose(phi2, transported(C, src, d)), false);
          if (x) {
            out = ParallelLift{src, tgt, k, d, d2, *z, *x};
          }
          return out.has_value();
        });
    if (!out) {
      throw SearchExhausted("no common lift of the parallel pair");
    }
    return *out;
  }

  bool check_parallel_lift(ColimitCat const&   C,
                           NatTrans const&     phi,
                           NatTrans const&     phi2,
                           ParallelLift const& L) {
    TwoCellLift a{L.source, L.target, L.stage, L.left, L.right, L.zeta};
    TwoCellLift b{L.source, L.target, L.stage, L.left, L.right, L.xi};
    return check_two_cell_lift(C, phi, a) && check_two_cell_lift(C, phi2, b);
  }

  BicompactReport check_bicompact_against(CatPtr const&           K,
                                          CatPseudoFunctor const& F,
                                          CompactOptions const&   options) {
    auto const&                  I = *F.base();
    std::vector<FunctorCategory> fun;
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      fun.push_back(functor_category(K, F.on0(i), options.functor_bound));
    }
    std::vector<FunctorIndex> idx;
    for (auto const& A : fun) {
      idx.emplace_back(A);
    }

    CatPseudoFunctor::Data d;
    d.base = F.base();
    for (auto const& A : fun) {
      d.on0.push_back(A.category);
    }
    for (one_t t : I.one_cells()) {
      zero_t i = I.src(t), j = I.tgt(t);
      d.on1.push_back(post(fun[i], fun[j], idx[j], F.on1(t)));
    }
    for (two_t g : I.two_cells()) {
      one_t  t = I.dom2(g), t2 = I.cod2(g);
      zero_t i = I.src(t), j = I.tgt(t);
      d.on2.push_back(pointwise(d.on1[t], d.on1[t2], fun[i], idx[j],
                                [&](Functor const& G, obj_t x) {
                                  return F.on2(g)[G(x)];
                                }));
    }
    for (auto const& [key, comps] : F.data().comp_iso) {
      auto   t = static_cast<one_t>(key >> 32);
      auto   s = static_cast<one_t>(key & 0xffffffffu);
      zero_t i = I.src(s), k = I.tgt(t);
      std::vector<mor_t> out;
      for (obj_t g = 0; g < fun[i].functors.size(); ++g) {
        auto const&        G = fun[i].functors[g];
        std::vector<mor_t> cs;
        for (obj_t x = 0; x < K->num_objects(); ++x) {
          cs.push_back(F.comp_at(t, s, G(x)));
        }
        out.push_back(idx[k].morphism(d.on1[t](d.on1[s](g)),
                                      d.on1[I.comp(t, s)](g), cs));
      }
      d.comp_iso[key] = std::move(out);
    }
    for (auto const& [i, comps] : F.data().unit_iso) {
      std::vector<mor_t> out;
      for (obj_t g = 0; g < fun[i].functors.size(); ++g) {
        auto const&        G = fun[i].functors[g];
        std::vector<mor_t> cs;
        for (obj_t x = 0; x < K->num_objects(); ++x) {
          cs.push_back(F.unit_at(i, G(x)));
        }
        out.push_back(idx[i].morphism(g, d.on1[I.unit(i)](g), cs));
      }
      d.unit_iso[i] = std::move(out);
    }

    auto         diagram = CatPseudoFunctor::make(std::move(d));
    auto         colim   = bifiltered_bicolimit(diagram, options.colimit);
    auto         base    = bifiltered_bicolimit(F, options.colimit);
    // Either the identity of colim F or its retraction onto a skeleton.
    Functor R = Functor::identity(base.result);
    if (options.skeletal_target) {
      R = skeleton(base.result).retraction;
    }
    auto         target = functor_category(K, R.target(), options.functor_bound);
    FunctorIndex it(target);

    Cocone cone{target.category, {}, {}};
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      cone.legs.push_back(post(fun[i], target, it, compose(R, base.legs[i])));
    }
    for (one_t t : I.one_cells()) {
      zero_t i = I.src(t), j = I.tgt(t);
      cone.cells.push_back(pointwise(compose(cone.legs[j], diagram.on1(t)),
                                     cone.legs[i], fun[i], it,
                                     [&](Functor const& G, obj_t x) {
                                       return R.map_morphism(
                                           base.transitions[t][G(x)]);
                                     }));
    }
    auto H = factor_cocone(colim, cone).functor;
    auto a = analyze_functor(H);

    std::string subject = "bicompact:" + std::to_string(K->num_objects())
                          + "-object category";
    Verdict v = a.is_equivalence()
                    ? Verdict::positive(
                        subject,
                        {{"comparison",
                          {},
                          {std::to_string(colim.result->num_objects())
                               + " objects",
                           std::to_string(target.functors.size())
                               + " functors"}}})
                    : Verdict::negative(subject,
                                        {"comparison",
                                         {a.failure},
                                         "the canonical comparison functor"});
    return {std::move(diagram), std::move(colim), std::move(target), H, a, v};
  }

  void validate_pseudoretract(Pseudoretract const& P) {
    std::vector<std::string> errors;
    if (!same_category(P.r.source(), P.whole)
        || !same_category(P.r.target(), P.part)) {
      errors.push_back("r must map the whole to the part");
    }
    if (!same_category(P.s.source(), P.part)
        || !same_category(P.s.target(), P.whole)) {
      errors.push_back("s must map the part to the whole");
    }
    if (errors.empty()) {
      if (!(P.alpha.source() == compose(P.r, P.s))
          || !(P.alpha.target() == Functor::identity(P.part))) {
        errors.push_back("alpha must run from r s to the identity");
      } else if (!P.alpha.is_invertible()) {
        errors.push_back("alpha must be invertible");
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
  }

  Verdict check_pseudoretract_transfer(Pseudoretract const&    P,
                                       CatPseudoFunctor const& F,
                                       CompactOptions const&   options) {
    validate_pseudoretract(P);
    auto whole = check_bicompact_against(P.whole, F, options).verdict;
    auto part  = check_bicompact_against(P.part, F, options).verdict;
    Verdict v  = !whole.outcome() || part.outcome()
                     ? Verdict::positive("pseudoretract-transfer",
                                         {{"transfer", {}, {}}})
                     : Verdict::negative("pseudoretract-transfer",
                                         {"transfer",
                                          {},
                                          "the whole is bicompact against "
                                          "the diagram but the part is not"});
    auto describe = [](char const* what, Verdict const& x) {
      return std::string(what) + ": " + (x.outcome() ? "positive" : "negative");
    };
    v.add_note(describe("whole", whole));
    v.add_note(describe("part", part));
    return v;
  }

}  // namespace sigmacat
