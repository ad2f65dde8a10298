#include "doctest.h"

#include "sigmacat/bilim.hpp"
#include "sigmacat/compact.hpp"
#include "sigmacat/errors.hpp"
#include "sigmacat/filtered.hpp"
#include "support/cats.hpp"
#include "support/diagrams.hpp"
#include "support/oracles.hpp"
#include "support/twocats.hpp"

using namespace sigmacat;
using namespace sigmacat::test;

namespace {

  std::vector<std::pair<std::string, CatPseudoFunctor>> bifiltered_fixtures() {
    std::vector<std::pair<std::string, CatPseudoFunctor>> all{
        {"chain_of_inclusions", chain_of_inclusions()},
        {"parallel_merge", parallel_into(true)},
        {"parallel_keep", parallel_into(false)},
        {"oplax_arrow", oplax_arrow()},
        {"lax_arrow", lax_arrow()},
        {"collapsing_iso", collapsing_iso()},
        {"lax_parallel", lax_parallel_diagram()},
        {"constant_top", constant_pseudofunctor(ld(poset_with_top()), z2())},
    };
    std::vector<std::pair<std::string, CatPseudoFunctor>> out;
    for (auto& [name, F] : all) {
      if (check_bifiltered(*F.base()).outcome()) {
        out.emplace_back(name, F);
      }
    }
    return out;
  }

  std::vector<std::pair<std::string, CatPtr>> shapes() {
    return {{"1", terminal()},         {"arrow", walking_arrow()},
            {"discrete2", discrete(2)}, {"z2", z2()},
            {"parallel", parallel_pair()}, {"iso", walking_iso()}};
  }

  Functor point(CatPtr const& X, obj_t x) {
    return Functor::constant(terminal(), X, x);
  }

  // The functor from the walking arrow picking out f.
  Functor arrow(CatPtr const& X, mor_t f) {
    auto               A = walking_arrow();
    std::vector<mor_t> m(A->num_morphisms());
    for (mor_t k = 0; k < m.size(); ++k) {
      m[k] = !A->is_identity(k)     ? f
             : A->dom(k) == 0 ? X->identity(X->dom(f))
                                    : X->identity(X->cod(f));
    }
    return Functor::make(A, X, {X->dom(f), X->cod(f)}, m);
  }

  // The transformation between two points picking out f.
  NatTrans point_arrow(CatPtr const& X, mor_t f) {
    return NatTrans::make(point(X, X->dom(f)), point(X, X->cod(f)), {f});
  }

}  // namespace

TEST_CASE("the fixtures include several bifiltered diagrams") {
  auto fs = bifiltered_fixtures();
  CHECK(fs.size() >= 5);
}

TEST_CASE("lifting points picks a representative") {
  auto C = bifiltered_bicolimit(chain_of_inclusions());
  for (obj_t x = 0; x < C.result->num_objects(); ++x) {
    auto a = point(C.result, x);
    auto L = lift_one_cell(C, a);
    CHECK(check_one_cell_lift(C, a, L));
    CHECK(L.beta.is_identity());
    auto [i, y] = C.objects[x];
    CHECK(L.index <= i);
  }
}

TEST_CASE("a strict factorization is returned with an identity") {
  auto C = bifiltered_bicolimit(chain_of_inclusions());
  auto X = C.diagram.on0(1);
  auto b = arrow(X, *X->find_morphism("m01"));
  auto a = compose(C.legs[1], b);
  auto L = lift_one_cell(C, a);
  CHECK(L.beta.is_identity());
  CHECK(compose(C.legs[L.index], L.b) == a);
}

TEST_CASE("lifting an arrow goes to the stage containing both ends") {
  auto C  = bifiltered_bicolimit(chain_of_inclusions());
  auto R  = C.result;
  auto x  = C.object(0, 0);
  auto y  = C.object(2, 2);
  auto hs = R->hom(x, y);
  REQUIRE(hs.size() == 1);
  auto a = arrow(R, hs[0]);
  auto L = lift_one_cell(C, a);
  CHECK(check_one_cell_lift(C, a, L));
  CHECK(L.index == 2);
  CHECK_FALSE(L.beta.is_identity());
}

TEST_CASE("lifting outside the colimit is rejected") {
  auto C = bifiltered_bicolimit(chain_of_inclusions());
  CHECK_THROWS_AS(lift_one_cell(C, point(z2(), 0)), PreconditionError);
}

TEST_CASE("two lifts of the same functor have a common refinement") {
  for (auto const& [name, F] : bifiltered_fixtures()) {
    CAPTURE(name);
    auto        C = bifiltered_bicolimit(F);
    auto const& I = *C.index;
    for (obj_t x = 0; x < C.result->num_objects(); ++x) {
      auto a = point(C.result, x);
      auto L = lift_one_cell(C, a);
      for (one_t d : I.one_cells()) {
        if (I.src(d) != L.index) {
          continue;
        }
        // The transported lift along d.
        OneCellLift L2{I.tgt(d), compose(F.on1(d), L.b),
                       vcompose(L.beta, whisker_right(C.transitions[d], L.b))};
        REQUIRE(check_one_cell_lift(C, a, L2));
        auto R = refine_lifts(C, L, L2);
        CHECK(check_refinement(C, L, L2, R));
        auto R2 = refine_lifts(C, L2, L);
        CHECK(check_refinement(C, L2, L, R2));
      }
    }
  }
}

TEST_CASE("2-cells lift with an exact pasting equality") {
  for (auto const& [name, F] : bifiltered_fixtures()) {
    CAPTURE(name);
    auto C = bifiltered_bicolimit(F);
    auto R = C.result;
    for (mor_t f = 0; f < R->num_morphisms(); ++f) {
      auto phi = point_arrow(R, f);
      auto L   = lift_two_cell(C, phi);
      CHECK(check_two_cell_lift(C, phi, L));
      if (R->is_identity(f)) {
        auto Lid = lift_two_cell(C, phi, L.source, L.source);
        CHECK(check_two_cell_lift(C, phi, Lid));
      }
    }
  }
}

TEST_CASE("identity 2-cells lift to identities over a single lift") {
  auto C  = bifiltered_bicolimit(chain_of_inclusions());
  auto a  = point(C.result, C.object(1, 1));
  auto L  = lift_one_cell(C, a);
  auto id = NatTrans::identity(a);
  auto T  = lift_two_cell(C, id, L, L);
  CHECK(check_two_cell_lift(C, id, T));
  CHECK(T.left == T.right);
  CHECK(T.psi.is_identity());
}

TEST_CASE("a lifted 2-cell over a walking arrow") {
  auto C = bifiltered_bicolimit(chain_of_inclusions());
  auto R = C.result;
  // a picks 0 → 1, a' picks 1 → 2, φ: a ⇒ a' has components 0→1, 1→2.
  auto o   = [&](zero_t i) { return C.object(i, i); };
  auto hom = [&](obj_t x, obj_t y) { return R->hom(x, y)[0]; };
  auto a   = arrow(R, hom(o(0), o(1)));
  auto a2  = arrow(R, hom(o(1), o(2)));
  auto phi = NatTrans::make(a, a2, {hom(o(0), o(1)), hom(o(1), o(2))});
  auto L   = lift_two_cell(C, phi);
  CHECK(check_two_cell_lift(C, phi, L));
  CHECK(L.stage == 2);
}

TEST_CASE("parallel pairs lift over a common span") {
  for (auto const& [name, F] : bifiltered_fixtures()) {
    CAPTURE(name);
    auto C = bifiltered_bicolimit(F);
    auto R = C.result;
    for (obj_t x = 0; x < R->num_objects(); ++x) {
      for (obj_t y = 0; y < R->num_objects(); ++y) {
        auto hs = R->hom(x, y);
        for (mor_t f : hs) {
          for (mor_t g : hs) {
            auto phi = point_arrow(R, f), phi2 = point_arrow(R, g);
            auto P   = lift_parallel_pair(C, phi, phi2);
            CHECK(check_parallel_lift(C, phi, phi2, P));
            if (f == g) {
              auto P2 = lift_parallel_pair(C, phi, phi);
              CHECK(P2.zeta == P2.xi);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("finite categories are bicompact against every fixture") {
  for (auto const& [name, F] : bifiltered_fixtures()) {
    auto base = bifiltered_bicolimit(F);
    for (auto const& [kname, K] : shapes()) {
      CAPTURE(name);
      CAPTURE(kname);
      auto r = check_bicompact_against(K, F);
      CHECK(r.verdict.outcome());
      CHECK(r.analysis.is_equivalence());
      // Independent count: iso classes of Fun(K, colim F).
      auto FK = functor_category(K, base.result);
      CHECK(oracle::iso_class_count(*r.colimit.result)
            == oracle::iso_class_count(*FK.category));
    }
  }
}

TEST_CASE("the skeletal and full targets give the same verdict") {
  CompactOptions full;
  full.skeletal_target = false;
  for (auto const& [name, F] : bifiltered_fixtures()) {
    for (auto const& [kname, K] : shapes()) {
      CAPTURE(name);
      CAPTURE(kname);
      auto a = check_bicompact_against(K, F);
      auto b = check_bicompact_against(K, F, full);
      CHECK(a.verdict.outcome() == b.verdict.outcome());
      CHECK(a.target.functors.size() <= b.target.functors.size());
      CHECK(check_equivalence(a.target.category, b.target.category)
                .verdict.outcome());
    }
  }
}

TEST_CASE("K = 1 recovers the colimit") {
  for (auto const& [name, F] : bifiltered_fixtures()) {
    CAPTURE(name);
    auto r    = check_bicompact_against(terminal(), F);
    auto base = bifiltered_bicolimit(F);
    CHECK(check_equivalence(r.colimit.result, base.result).verdict.outcome());
  }
}

TEST_CASE("closure under finite bilimits of shapes") {
  auto P = biproduct(walking_arrow(), z2()).category;
  auto A = walking_arrow();
  auto E = biequalizer(Functor::identity(A),
                       Functor::constant(A, A, *A->find_object("a")))
               .category;
  for (auto const& [name, F] : bifiltered_fixtures()) {
    CAPTURE(name);
    CHECK(check_bicompact_against(P, F).verdict.outcome());
    CHECK(check_bicompact_against(E, F).verdict.outcome());
  }
}

TEST_CASE("the functor bound is enforced") {
  CompactOptions o;
  o.functor_bound = 1;
  CHECK_THROWS_AS(check_bicompact_against(walking_arrow(), chain_of_inclusions(), o),
                  SizeLimitError);
}

TEST_CASE("pseudoretracts") {
  auto W = walking_iso();
  auto T = terminal();
  Pseudoretract P{W, T, Functor::constant(W, T, 0),
                  Functor::constant(T, W, *W->find_object("a")),
                  NatTrans::identity(Functor::identity(T))};
  validate_pseudoretract(P);
  for (auto const& [name, F] : bifiltered_fixtures()) {
    CAPTURE(name);
    auto v = check_pseudoretract_transfer(P, F);
    CHECK(v.outcome());
    CHECK(v.notes().size() == 2);
  }

  auto A = walking_arrow();
  Pseudoretract bad{T, A, Functor::constant(T, A, *A->find_object("a")),
                    Functor::constant(A, T, 0), {}};
  auto ca   = Functor::constant(A, A, *A->find_object("a"));
  bad.alpha = NatTrans::make(ca, Functor::identity(A),
                             {A->identity(0), *A->find_morphism("f")});
  CHECK_THROWS_AS(validate_pseudoretract(bad), ValidationError);
}
