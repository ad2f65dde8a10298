#include "doctest.h"

#include <map>
#include <random>

#include "sigmacat/colim.hpp"
#include "sigmacat/errors.hpp"
#include "sigmacat/filtered.hpp"
#include "support/cats.hpp"
#include "support/colim_oracles.hpp"
#include "support/diagrams.hpp"
#include "support/twocats.hpp"

using namespace sigmacat;
using namespace sigmacat::test;

namespace {

  SigmaClass units(TwoCatPtr const& I) {
    return sigma_closure(SigmaClass::none(I));
  }

  SigmaClass generated(TwoCatPtr const& I, std::vector<std::string> names) {
    auto S = SigmaClass::none(I);
    for (auto const& n : names) {
      S.insert(*I->find_one(n));
    }
    return sigma_closure(S);
  }

  bool equivalent(CatPtr const& C, CatPtr const& D) {
    return check_equivalence(C, D).verdict.outcome();
  }

  // Premorphisms grouped by their endpoints.
  std::map<std::pair<obj_t, obj_t>, std::vector<Premorphism>> by_hom(
      ColimitCat const& C) {
    std::map<std::pair<obj_t, obj_t>, std::vector<Premorphism>> out;
    for (auto const& p : C.premorphisms()) {
      out[{C.object(p.i1, p.a1), C.object(p.i2, p.a2)}].push_back(p);
    }
    return out;
  }

  // Composing arbitrary representatives lands in the composite class.
  void check_congruence(ColimitCat const& C, std::size_t limit = 4000) {
    auto        all = C.premorphisms();
    std::size_t n   = 0;
    for (auto const& p : all) {
      for (auto const& q : all) {
        if (p.i2 != q.i1 || p.a2 != q.a1) {
          continue;
        }
        REQUIRE(C.result->compose(C.class_of(q), C.class_of(p))
                == C.class_of(C.compose(q, p)));
        if (++n == limit) {
          return;
        }
      }
    }
  }

  // Class equality agrees with the direct homotopy relation.
  void check_against_homotopy(ColimitCat const& C) {
    for (auto const& [hom, ps] : by_hom(C)) {
      for (auto const& p : ps) {
        for (auto const& q : ps) {
          INFO("hom " << C.result->object_name(hom.first) << " -> "
                      << C.result->object_name(hom.second));
          REQUIRE(premorphism_equal(C, p, q)
                  == oracle::homotopic(C.diagram, C.sigma, p, q));
        }
      }
    }
  }

  std::size_t elements_one_cells(CatPseudoFunctor const& F) {
    auto const& I = *F.base();
    std::size_t n = 0;
    for (one_t f : I.one_cells()) {
      auto const& X = *F.on0(I.src(f));
      auto const& Y = *F.on0(I.tgt(f));
      for (obj_t a = 0; a < X.num_objects(); ++a) {
        for (obj_t b = 0; b < Y.num_objects(); ++b) {
          n += Y.hom(F.on1(f)(a), b).size();
        }
      }
    }
    return n;
  }

  std::size_t elements_two_cells(CatPseudoFunctor const& F) {
    auto const& I = *F.base();
    std::size_t n = 0;
    for (two_t al : I.two_cells()) {
      one_t       f = I.dom2(al), g = I.cod2(al);
      auto const& X = *F.on0(I.src(f));
      auto const& Y = *F.on0(I.tgt(f));
      for (obj_t a = 0; a < X.num_objects(); ++a) {
        for (obj_t b = 0; b < Y.num_objects(); ++b) {
          for (mor_t phi : Y.hom(F.on1(f)(a), b)) {
            for (mor_t psi : Y.hom(F.on1(g)(a), b)) {
              n += Y.compose(psi, F.on2(al)[a]) == phi;
            }
          }
        }
      }
    }
    return n;
  }

}  // namespace

TEST_CASE("elements: counts against the definition") {
  std::vector<CatPseudoFunctor> diagrams
      = {constant_pseudofunctor(ld(poset_with_top()), walking_arrow()),
         lax_arrow(),
         oplax_arrow(),
         chain_of_inclusions(),
         parallel_into(true),
         lax_parallel_diagram(),
         collapsing_iso()};
  for (auto const& F : diagrams) {
    auto E = elements_category(F);
    std::size_t objects = 0;
    for (zero_t i = 0; i < F.base()->num_zero_cells(); ++i) {
      objects += F.on0(i)->num_objects();
    }
    CHECK(E.total->num_zero_cells() == objects);
    CHECK(E.total->num_one_cells() == elements_one_cells(F));
    CHECK(E.total->num_two_cells() == elements_two_cells(F));
    for (one_t x : E.total->one_cells()) {
      auto [f, phi] = E.arrows[x];
      CHECK(E.projection.on1(x) == f);
      CHECK(E.opcartesian[x] == F.on0(F.base()->tgt(f))->is_iso(phi));
    }
  }
}

TEST_CASE("elements: small cases") {
  auto I = ld(poset_with_top());
  auto E = elements_category(constant_pseudofunctor(I, terminal()));
  CHECK(E.total->num_zero_cells() == I->num_zero_cells());
  CHECK(E.total->num_one_cells() == I->num_one_cells());
  CHECK(E.opcartesian_class() == SigmaClass::all(E.total));

  auto empty = share(empty_category());
  auto E0    = elements_category(constant_pseudofunctor(I, empty));
  CHECK(E0.total->num_zero_cells() == 0);

  // Over the lax idempotent: (1, a→a), (1, a→b), (1, b→b), (e, b→b) twice.
  auto L = elements_category(lax_arrow());
  CHECK(L.total->num_one_cells() == 5);
  CHECK(L.opcartesian_class().size() == 4);
}

TEST_CASE("bicolimit: constant diagram over a filtered poset") {
  for (auto X : {walking_arrow(), walking_iso(), parallel_pair(), z2()}) {
    auto F = constant_pseudofunctor(ld(poset_with_top()), X);
    auto C = bifiltered_bicolimit(F);
    CHECK(equivalent(C.result, X));
    CHECK(C.result->num_objects() == 3 * X->num_objects());
    CHECK(check_sigma_cocone(F, SigmaClass::all(F.base()), colimit_cocone(C)));
    check_congruence(C);
    check_against_homotopy(C);
  }
}

TEST_CASE("bicolimit: terminal index recovers the fiber") {
  auto X = parallel_pair();
  auto C = bifiltered_bicolimit(constant_pseudofunctor(ld(terminal()), X));
  CHECK(find_isomorphism(C.result, X).has_value());
  CHECK(analyze_functor(C.legs[0]).is_equivalence());

  auto W = bifiltered_bicolimit(collapsing_iso());
  CHECK(equivalent(W.result, walking_iso()));
  CHECK(check_sigma_cocone(W.diagram, SigmaClass::all(W.index),
                           colimit_cocone(W)));
  check_congruence(W);
  check_against_homotopy(W);
}

TEST_CASE("bicolimit: chain of full inclusions") {
  auto F = chain_of_inclusions();
  auto C = bifiltered_bicolimit(F);
  CHECK(equivalent(C.result, chain(3)));
  CHECK(analyze_functor(C.legs[2]).is_equivalence());
  CHECK(!analyze_functor(C.legs[0]).essentially_surjective);
  check_congruence(C);
  check_against_homotopy(C);
}

TEST_CASE("bicolimit: coequification of parallel arrows") {
  for (bool merge : {true, false}) {
    auto F = parallel_into(merge);
    auto C = bifiltered_bicolimit(F);
    auto P = F.on0(0);
    auto f = *P->find_morphism("f");
    auto g = *P->find_morphism("g");
    bool same = premorphism_equal(C, fiber_premorphism(F, 0, f),
                                  fiber_premorphism(F, 0, g));
    CHECK(same == merge);
    CHECK(same
          == oracle::coequified(F, SigmaClass::all(F.base()), 0, f, g));
    CHECK(equivalent(C.result, merge ? walking_arrow() : parallel_pair()));
    check_congruence(C);
    check_against_homotopy(C);
  }
}

TEST_CASE("bicolimit: idempotents acting on an arrow") {
  for (auto const& F : {lax_arrow(), oplax_arrow()}) {
    auto C = bifiltered_bicolimit(F);
    CHECK(equivalent(C.result, terminal()));
    check_congruence(C);
    check_against_homotopy(C);
  }
}

TEST_CASE("bicolimit: preconditions and bounds") {
  auto X = walking_arrow();
  CHECK_THROWS_AS(
      bifiltered_bicolimit(constant_pseudofunctor(ld(discrete(2)), X)),
      PreconditionError);
  ColimitOptions tight;
  tight.premorphism_bound = 1;
  CHECK_THROWS_AS(
      bifiltered_bicolimit(constant_pseudofunctor(ld(poset_with_top()), X),
                           tight),
      SizeLimitError);
  // (lax idempotent, units) fails σ-filteredness.
  CHECK_THROWS_AS(sigma_bicolimit(lax_arrow(), units(lax_idempotent())),
                  PreconditionError);

  auto C = bifiltered_bicolimit(constant_pseudofunctor(ld(terminal()), X));
  Premorphism bogus{0, 0, 0, 1, 0, 0, X->identity(0)};
  CHECK(!C.is_premorphism(bogus));
  CHECK_THROWS_AS(C.class_of(bogus), PreconditionError);
}

TEST_CASE("sigma bicolimit: oplax idempotent with only units in Σ") {
  auto F = oplax_arrow();
  auto S = units(F.base());
  REQUIRE(check_sigma_filtered(S));
  auto C = sigma_bicolimit(F, S);
  auto D = direct_sigma_bicolimit(F, S);
  CHECK(find_isomorphism(C.result, walking_arrow()).has_value());
  CHECK(equivalent(C.result, D.result));

  auto e = *F.base()->find_one("e");
  CHECK(!C.transitions[e].is_invertible());
  CHECK(!D.transitions[e].is_invertible());
  CHECK(check_sigma_cocone(F, S, colimit_cocone(C)));
  CHECK(check_sigma_cocone(F, S, colimit_cocone(D)));
  CHECK(!check_sigma_cocone(F, SigmaClass::all(F.base()), colimit_cocone(C)));

  // With everything in Σ the arrow collapses.
  CHECK(equivalent(sigma_bicolimit(F, SigmaClass::all(F.base())).result,
                   terminal()));
  check_congruence(C);
  check_congruence(D);
}

TEST_CASE("sigma bicolimit: lax parallel pair with Σ generated by f") {
  auto F = lax_parallel_diagram();
  auto S = generated(F.base(), {"f"});
  REQUIRE(check_sigma_filtered(S));
  auto C = sigma_bicolimit(F, S);
  auto D = direct_sigma_bicolimit(F, S);
  auto Y = F.on0(1);
  CHECK(equivalent(C.result, Y));
  CHECK(equivalent(D.result, Y));
  auto g = *F.base()->find_one("g");
  CHECK(!C.transitions[g].is_invertible());
  CHECK(check_sigma_cocone(F, S, colimit_cocone(C)));
  CHECK(check_sigma_cocone(F, S, colimit_cocone(D)));
}

TEST_CASE("sigma bicolimit: Σ = everything matches the bifiltered route") {
  for (auto const& F : {chain_of_inclusions(), parallel_into(true),
                        lax_arrow(), collapsing_iso()}) {
    auto A = bifiltered_bicolimit(F);
    auto B = sigma_bicolimit(F, SigmaClass::all(F.base()));
    auto D = direct_sigma_bicolimit(F, SigmaClass::all(F.base()));
    CHECK(*A.result == *B.result);
    CHECK(*A.result == *D.result);
  }
}

TEST_CASE("property: the two σ routes agree on every premorphism") {
  std::mt19937 rng(31);
  auto         X      = walking_arrow();
  int          tested = 0;
  for (int round = 0; round < 60 && tested < 8; ++round) {
    auto I = random_doubled_poset(rng, 2 + round % 3, true);
    auto S = random_sigma(rng, I);
    if (!check_sigma_filtered(S)) {
      continue;
    }
    ++tested;
    auto F = constant_pseudofunctor(I, X);
    auto C = sigma_bicolimit(F, S);
    auto D = direct_sigma_bicolimit(F, S);
    CHECK(check_sigma_cocone(F, S, colimit_cocone(C)));
    CHECK(check_sigma_cocone(F, S, colimit_cocone(D)));
    for (auto const& [hom, ps] : by_hom(D)) {
      for (auto const& p : ps) {
        for (auto const& q : ps) {
          REQUIRE(premorphism_equal(D, p, q)
                  == (C.class_of(p) == C.class_of(q)));
        }
      }
    }
    CHECK(equivalent(C.result, D.result));
    check_congruence(D, 1500);
  }
  CHECK(tested >= 4);
}

TEST_CASE("factor_cocone: the colimit cocone factors through the identity") {
  for (auto const& F : {chain_of_inclusions(), oplax_arrow(),
                        collapsing_iso()}) {
    auto C = bifiltered_bicolimit(F);
    auto H = factor_cocone(C, colimit_cocone(C));
    CHECK(H.functor == Functor::identity(C.result));
    for (auto const& c : H.comparisons) {
      CHECK(c.is_invertible());
    }
  }
  auto F = oplax_arrow();
  auto S = units(F.base());
  auto C = sigma_bicolimit(F, S);
  CHECK(factor_cocone(C, colimit_cocone(C)).functor
        == Functor::identity(C.result));
}

TEST_CASE("factor_cocone: post-composed cocones and invalid cocones") {
  auto X = z2();
  auto I = ld(poset_with_top());
  auto F = constant_pseudofunctor(I, X);
  auto C = bifiltered_bicolimit(F);
  auto E = check_equivalence(C.result, X);
  REQUIRE(E.witness.has_value());
  auto h = E.witness->F;

  Cocone K = colimit_cocone(C);
  Cocone hK{X, {}, {}};
  for (auto const& q : K.legs) {
    hK.legs.push_back(compose(h, q));
  }
  for (auto const& t : K.cells) {
    hK.cells.push_back(whisker_left(h, t));
  }
  REQUIRE(check_sigma_cocone(F, SigmaClass::all(I), hK));
  auto H = factor_cocone(C, hK);
  CHECK(find_natural_iso(H.functor, h).has_value());
  for (zero_t i = 0; i < I->num_zero_cells(); ++i) {
    CHECK(compose(H.functor, C.legs[i]) == hK.legs[i]);
  }

  // Identity legs with the twist on one leg: valid, factors.
  auto   id = Functor::identity(X);
  auto   s  = *X->find_morphism("s");
  Cocone twisted{X, {id, id, id}, {}};
  for (one_t d : I->one_cells()) {
    twisted.cells.push_back(NatTrans::identity(id));
  }
  twisted.cells[*I->find_one("f")] = NatTrans::make(id, id, {s});
  REQUIRE(check_sigma_cocone(F, SigmaClass::all(I), twisted));
  auto T = factor_cocone(C, twisted);
  CHECK(analyze_functor(T.functor).is_equivalence());

  // A non-identity cell at a unit breaks the unit law.
  Cocone bad = twisted;
  bad.cells[I->unit(0)] = NatTrans::make(id, id, {s});
  auto v = check_sigma_cocone(F, SigmaClass::all(I), bad);
  CHECK(!v);
  CHECK_THROWS_AS(factor_cocone(C, bad), ValidationError);
}

TEST_CASE("map_colimit: induced functor on constant diagrams") {
  auto I  = ld(poset_with_top());
  auto X  = walking_arrow();
  auto Y  = walking_iso();
  auto h  = Functor::make(X, Y, {0, 1},
                          [&] {
                           std::vector<mor_t> m(X->num_morphisms());
                           for (mor_t x = 0; x < m.size(); ++x) {
                             m[x] = X->is_identity(x)
                                        ? Y->identity(X->dom(x))
                                        : *Y->find_morphism("f");
                           }
                           return m;
                         }());
  auto CX = bifiltered_bicolimit(constant_pseudofunctor(I, X));
  auto CY = bifiltered_bicolimit(constant_pseudofunctor(I, Y));
  auto M  = map_colimit(CX, CY, {h, h, h});
  for (zero_t i = 0; i < I->num_zero_cells(); ++i) {
    CHECK(compose(M, CX.legs[i]) == compose(CY.legs[i], h));
  }
  CHECK(!analyze_functor(M).full);

  auto self = map_colimit(CX, CX, {Functor::identity(X),
                                   Functor::identity(X),
                                   Functor::identity(X)});
  CHECK(self == Functor::identity(CX.result));
}
