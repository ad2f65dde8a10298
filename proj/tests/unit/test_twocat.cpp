#include "doctest.h"

#include <random>

#include "sigmacat/twocat.hpp"
#include "support/cats.hpp"
#include "support/oracles.hpp"
#include "support/twocats.hpp"

using namespace sigmacat;
using namespace sigmacat::test;

TEST_CASE("locally_discrete") {
  auto I = ld(chain(3));
  CHECK(I->num_zero_cells() == 3);
  CHECK(I->num_one_cells() == chain(3)->num_morphisms());
  CHECK(I->num_two_cells() == I->num_one_cells());
  CHECK(oracle::is_two_category(*I));
  for (two_t a : I->two_cells()) {
    CHECK(I->is_id2(a));
  }
  auto P = ld(parallel_pair());
  auto f = *P->find_one("f"), g = *P->find_one("g");
  CHECK(P->two_cells(f, g).empty());
  CHECK(P->some_iso2(f, g) == UNDEFINED);
  CHECK(P->two_name(P->id2(f)) == "1_f");
}

TEST_CASE("locally_preordered: codiscrete and lax idempotents") {
  auto C = codiscrete_idempotent();
  CHECK(oracle::is_two_category(*C));
  CHECK(C->num_one_cells() == 2);
  CHECK(C->num_two_cells() == 4);
  auto e = *C->find_one("e");
  auto u = C->unit(0);
  CHECK(C->comp(e, e) == e);
  CHECK(C->some_iso2(u, e) != UNDEFINED);

  auto L = lax_idempotent();
  CHECK(oracle::is_two_category(*L));
  CHECK(L->num_two_cells() == 3);
  auto a = *L->find_two("1_*=>e");
  CHECK(!L->is_invertible2(a));
  CHECK(L->hcomp(a, a) == a);
}

TEST_CASE("TwoCatBuilder rejects incompatible or partial data") {
  // Z/2 on 1-cells with a 2-cell 1 ⇒ e: e * (1 ⇒ e) would need e ⇒ 1.
  LocallyPreorderedData d;
  d.zero_cells  = {"*"};
  d.one_cells   = {{"e", "*", "*"}};
  d.composition = {{"e", "e", "1_*"}};
  d.two_cells   = {{"1_*", "e"}};
  try {
    locally_preordered(d);
    FAIL("expected a validation error");
  } catch (ValidationError const& err) {
    CHECK(err.violations().front().find("not compatible")
          != std::string::npos);
  }

  LocallyPreorderedData m;
  m.zero_cells = {"a", "b"};
  m.one_cells  = {{"f", "a", "b"}, {"g", "b", "a"}};
  m.composition = {{"g", "f", "1_a"}};
  try {
    locally_preordered(m);
    FAIL("expected a validation error");
  } catch (ValidationError const& err) {
    CHECK(err.violations().front().find("missing 1-cell composite")
          != std::string::npos);
  }

  TwoCatBuilder b;
  b.add_zero_cell("x");
  b.prepare();
  CHECK_THROWS_AS(b.build(), ValidationError);
}

TEST_CASE("dual_one_cells") {
  auto I  = ld(chain(3));
  auto D  = share2(dual_one_cells(*I));
  auto DD = dual_one_cells(*D);
  CHECK(oracle::is_two_category(*D));
  CHECK(D->num_one_cells() == I->num_one_cells());
  for (one_t s : I->one_cells()) {
    auto ds = *D->find_one(I->one_name(s));
    CHECK(D->src(ds) == I->tgt(s));
    CHECK(D->tgt(ds) == I->src(s));
    auto dds = *DD.find_one(I->one_name(s));
    CHECK(DD.src(dds) == I->src(s));
  }
  auto L  = lax_idempotent();
  auto DL = dual_one_cells(*L);
  CHECK(oracle::is_two_category(DL));
  CHECK(DL.num_two_cells() == L->num_two_cells());
}

TEST_CASE("sigma_closure and internal equivalences") {
  auto C = codiscrete_idempotent();
  auto e = *C->find_one("e");
  auto S = sigma_closure(SigmaClass::none(C));
  // Units join, and e joins as a mate of the unit.
  CHECK(S.contains(C->unit(0)));
  CHECK(S.contains(e));
  CHECK(internal_equivalences(*C).size() == 2);

  auto L  = lax_idempotent();
  auto SL = sigma_closure(SigmaClass::none(L));
  CHECK(SL.size() == 1);
  CHECK(internal_equivalences(*L).size() == 1);

  auto I  = ld(chain(3));
  auto f  = *I->find_one("m01"), g = *I->find_one("m12");
  auto SI = sigma_closure(SigmaClass(I, {f, g}));
  CHECK(SI.contains(*I->find_one("m02")));
  CHECK(SI.size() == 6);
  CHECK(sigma_closure(SI) == SI);
}

TEST_CASE("sigma_subcategory and TwoFunctor validation") {
  auto I   = ld(chain(3));
  auto f   = *I->find_one("m01");
  auto sub = sigma_subcategory(sigma_closure(SigmaClass(I, {f})));
  CHECK(sub.category->num_one_cells() == 4);
  CHECK(oracle::is_two_category(*sub.category));
  CHECK(sub.inclusion.on1(*sub.category->find_one("m01")) == f);

  CHECK_THROWS_AS(sigma_subcategory(SigmaClass(I, {f})), PreconditionError);

  auto id = TwoFunctor::identity(I);
  CHECK(id.on1(f) == f);
  std::vector<zero_t> on0{0, 0, 0};
  std::vector<one_t>  on1(I->num_one_cells(), I->unit(0));
  std::vector<two_t>  on2(I->num_two_cells(), I->id2(I->unit(0)));
  auto collapse = TwoFunctor::make(I, I, on0, on1, on2);
  CHECK(image(collapse, SigmaClass::all(I)).size() == 1);
  on1[f] = f;
  CHECK_THROWS_AS(TwoFunctor::make(I, I, on0, on1, on2), ValidationError);
}

namespace {

  // Over the terminal 2-category: F(*) = walking isomorphism, F(1) constant
  // at a, with unit comparison x → a.
  CatPseudoFunctor::Data collapsing_data() {
    auto                   T = ld(terminal());
    auto                   W = walking_iso();
    CatPseudoFunctor::Data d;
    d.base = T;
    d.on0  = {W};
    auto a = *W->find_object("a");
    auto Fa = Functor::constant(W, W, a);
    d.on1  = {Fa};
    d.on2  = {NatTrans::identity(Fa)};
    d.unit_iso[0] = {W->identity(a), *W->find_morphism("g")};
    return d;
  }

}  // namespace

TEST_CASE("CatPseudoFunctor: non-strict unit comparison") {
  auto F = CatPseudoFunctor::make(collapsing_data());
  CHECK(!F.is_strict());
  CHECK(F.unit_iso(0).is_invertible());
  CHECK(F.comp_iso(0, 0).is_identity());

  auto broken = collapsing_data();
  broken.unit_iso.clear();
  CHECK_THROWS_AS(CatPseudoFunctor::make(broken), ValidationError);

  auto bad_comp = collapsing_data();
  auto W        = bad_comp.on0[0];
  bad_comp.comp_iso[pair_key(0, 0)] = {*W->find_morphism("f"),
                                       *W->find_morphism("f")};
  CHECK_THROWS_AS(CatPseudoFunctor::make(bad_comp), ValidationError);
}

TEST_CASE("CatPseudoFunctor: strict action of Z/2 and precomposition") {
  auto                   I = ld(z2());
  auto                   X = discrete(2);
  CatPseudoFunctor::Data d;
  d.base = I;
  d.on0  = {X};
  auto id   = Functor::identity(X);
  auto swap = Functor::make(X, X, {1, 0}, {1, 0});
  auto s    = *I->find_one("s");
  d.on1.resize(2);
  d.on1[I->unit(0)] = id;
  d.on1[s]          = swap;
  d.on2.resize(2);
  d.on2[I->id2(I->unit(0))] = NatTrans::identity(id);
  d.on2[I->id2(s)]          = NatTrans::identity(swap);
  auto F = CatPseudoFunctor::make(d);
  CHECK(F.is_strict());

  // The trivial action is also strict.
  auto d2     = d;
  d2.on1[s]   = id;
  d2.on2[I->id2(s)] = NatTrans::identity(id);
  CHECK_NOTHROW(CatPseudoFunctor::make(d2));

  // The unique 2-functor from the terminal 2-category picks the unit.
  auto T = ld(terminal());
  auto G = TwoFunctor::make(T, I, {0}, {I->unit(0)}, {I->id2(I->unit(0))});
  auto FG = precompose(F, G);
  CHECK(FG.base() == T);
  CHECK(FG.on1(0) == id);

  auto K = constant_pseudofunctor(I, walking_iso());
  CHECK(K.is_strict());
}

TEST_CASE("CatPseudoFunctor: twisted comparison breaks associativity") {
  // Z/3 acting trivially on Z/2, with c_{s,s} the nontrivial element.
  auto I = ld(make_cat({"*"},
                       {{"s", "*", "*"}, {"s2", "*", "*"}},
                       {{"s", "s", "s2"},
                        {"s", "s2", "1_*"},
                        {"s2", "s", "1_*"},
                        {"s2", "s2", "s"}}));
  auto X  = z2();
  auto id = Functor::identity(X);
  CatPseudoFunctor::Data d;
  d.base = I;
  d.on0  = {X};
  d.on1.assign(I->num_one_cells(), id);
  d.on2.assign(I->num_two_cells(), NatTrans::identity(id));
  CHECK_NOTHROW(CatPseudoFunctor::make(d));
  auto s = *I->find_one("s");
  d.comp_iso[pair_key(s, s)] = {*X->find_morphism("s")};
  try {
    CatPseudoFunctor::make(d);
    FAIL("expected a validation error");
  } catch (ValidationError const& err) {
    CHECK(err.violations().front().find("associativity") != std::string::npos);
  }
}

TEST_CASE("CatPseudoFunctor: lax idempotent acting on an arrow") {
  // F(e) is constant at b, and 1 ⇒ e goes to the transformation with
  // components f and 1_b.
  auto L  = lax_idempotent();
  auto X  = walking_arrow();
  auto b  = *X->find_object("b");
  auto f  = *X->find_morphism("f");
  auto id = Functor::identity(X);
  auto cb = Functor::constant(X, X, b);
  auto e  = *L->find_one("e");
  CatPseudoFunctor::Data d;
  d.base = L;
  d.on0  = {X};
  d.on1.resize(2);
  d.on1[L->unit(0)] = id;
  d.on1[e]          = cb;
  d.on2.resize(3);
  d.on2[L->id2(L->unit(0))] = NatTrans::identity(id);
  d.on2[L->id2(e)]          = NatTrans::identity(cb);
  d.on2[*L->find_two("1_*=>e")]
      = NatTrans::make(id, cb, {f, X->identity(b)});
  CHECK_NOTHROW(CatPseudoFunctor::make(d));

  // Sending e to the identity leaves 1 ⇒ e with the wrong boundary.
  auto bad   = d;
  bad.on1[e] = id;
  bad.on2[L->id2(e)] = NatTrans::identity(id);
  CHECK_THROWS_AS(CatPseudoFunctor::make(bad), ValidationError);
}

TEST_CASE("property: random posets give 2-categories with involutive duals") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 15; ++trial) {
    std::size_t n = 1 + rng() % 4;
    auto        I = random_doubled_poset(rng, n, false);
    CHECK(oracle::is_two_category(*I));
    auto D  = dual_one_cells(*I);
    auto DD = dual_one_cells(D);
    CHECK(oracle::is_two_category(D));
    CHECK(DD.num_two_cells() == I->num_two_cells());
    for (one_t s : I->one_cells()) {
      for (one_t t : I->one_cells()) {
        if (I->src(t) == I->tgt(s)) {
          CHECK(DD.one_name(DD.comp(*DD.find_one(I->one_name(t)),
                                    *DD.find_one(I->one_name(s))))
                == I->one_name(I->comp(t, s)));
        }
      }
    }
    auto S = sigma_closure(SigmaClass::none(I));
    CHECK(S.size() == n);
  }
}
