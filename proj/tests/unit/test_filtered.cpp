#include "doctest.h"

#include <random>

#include "sigmacat/errors.hpp"
#include "sigmacat/filtered.hpp"
#include "support/cats.hpp"
#include "support/oracles.hpp"
#include "support/twocats.hpp"

using namespace sigmacat;
using namespace sigmacat::test;

namespace {

  SigmaClass units(TwoCatPtr const& I) {
    return sigma_closure(SigmaClass::none(I));
  }

  Verdict const& part(Verdict const& v, std::string const& condition) {
    for (auto const& p : v.parts()) {
      if (p.subject() == condition) {
        return p;
      }
    }
    FAIL("no part " << condition);
    return v;
  }

  // A pool of small 2-categories with nontrivial 2-cells.
  std::vector<TwoCatPtr> fixtures() {
    return {ld(terminal()),      ld(discrete(2)),        ld(walking_arrow()),
            ld(walking_iso()),   ld(parallel_pair()),    ld(z2()),
            ld(chain(3)),        ld(poset_with_top()),   codiscrete_idempotent(),
            lax_idempotent(),    lax_parallel(),         z2_loop(false),
            z2_loop(true),       share2(dual_one_cells(*lax_parallel()))};
  }

}  // namespace

TEST_CASE("check_bifiltered: examples") {
  auto T = check_bifiltered(*ld(terminal()));
  CHECK(T.outcome());
  CHECK(replay_verdict(SigmaClass::all(ld(terminal())), T));

  auto P = ld(poset_with_top());
  auto v = check_bifiltered(*P);
  CHECK(v.outcome());
  CHECK(replay_verdict(SigmaClass::all(P), v));
  // The span for (a, b) sits at the top.
  auto const& spans = part(v, cond::span).witnesses();
  auto        ab    = std::find_if(spans.begin(), spans.end(), [](auto& w) {
    return w.instance == std::vector<std::string>{"a", "b"};
  });
  REQUIRE(ab != spans.end());
  CHECK(ab->data == std::vector<std::string>{"f", "g"});

  auto D  = ld(discrete(2));
  auto vd = check_bifiltered(*D);
  CHECK_FALSE(vd.outcome());
  CHECK(vd.counterexample().condition == cond::span);
  CHECK(vd.counterexample().instance
        == std::vector<std::string>{D->zero_name(0), D->zero_name(1)});
  CHECK(replay_counterexample(SigmaClass::all(D), vd.counterexample()));

  auto Q  = ld(parallel_pair());
  auto vq = check_bifiltered(*Q);
  CHECK_FALSE(vq.outcome());
  CHECK(vq.counterexample().condition == cond::invertible_insertion);
  CHECK(vq.counterexample().instance == std::vector<std::string>{"f", "g"});

  CHECK_FALSE(check_bifiltered(*z2_loop(false)).outcome());
  CHECK(check_bifiltered(*z2_loop(true)).outcome());
  CHECK(check_bifiltered(*codiscrete_idempotent()).outcome());
  CHECK(check_bifiltered(*lax_idempotent()).outcome());
  CHECK_FALSE(check_bifiltered(*lax_parallel()).outcome());

  TwoCatBuilder empty;
  empty.prepare();
  CHECK_THROWS_AS(check_bifiltered(empty.build()), PreconditionError);
}

TEST_CASE("check_sigma_filtered: examples") {
  auto T = ld(terminal());
  CHECK(check_sigma_filtered(units(T)).outcome());

  auto A = ld(walking_arrow());
  auto v = check_sigma_filtered(units(A));
  CHECK_FALSE(v.outcome());
  CHECK(v.counterexample().condition == cond::span);
  CHECK(v.counterexample().instance == std::vector<std::string>{"a", "b"});
  CHECK(check_sigma_filtered(SigmaClass::all(A)).outcome());

  // σ-filtered though not bifiltered: g ⇒ f needs no inverse.
  auto L  = lax_parallel();
  auto SL = sigma_closure(SigmaClass(L, {*L->find_one("f")}));
  auto vl = check_sigma_filtered(SL);
  CHECK(vl.outcome());
  CHECK(replay_verdict(SL, vl));
  auto const& ins = part(vl, cond::insertion).witnesses();
  REQUIRE(ins.size() == 1);
  CHECK(ins[0].instance == std::vector<std::string>{"g", "f"});
  CHECK(ins[0].data == std::vector<std::string>{"1_b", "g=>f"});
  // With g in Σ instead, the 2-cell points the wrong way.
  auto SG = sigma_closure(SigmaClass(L, {*L->find_one("g")}));
  auto vg = check_sigma_filtered(SG);
  CHECK_FALSE(vg.outcome());
  CHECK(vg.counterexample().condition == cond::insertion);
  CHECK(replay_counterexample(SG, vg.counterexample()));

  // The unit's Z/2 of 2-cells is equified by the absorbing 1-cell.
  auto Z  = z2_loop(true);
  auto vz = check_sigma_filtered(SigmaClass::all(Z));
  CHECK(vz.outcome());
  CHECK(part(vz, cond::equification).witnesses().front().data
        == std::vector<std::string>{"z"});
  auto vu = check_sigma_filtered(units(Z));
  CHECK_FALSE(vu.outcome());
  CHECK(vu.counterexample().condition == cond::insertion);
  CHECK(vu.counterexample().instance == std::vector<std::string>{"z", "1_*"});
  CHECK_FALSE(part(vu, cond::equification).outcome());
}

TEST_CASE("check_sigma_filtered: family size") {
  auto P = ld(poset_with_top());
  auto v = check_sigma_filtered(SigmaClass::all(P), {3});
  CHECK(v.outcome());
  auto const& fam = part(v, cond::family).witnesses();
  REQUIRE(fam.size() == 1);
  CHECK(fam[0].data == std::vector<std::string>{"t", "f", "g", "1_t"});
  CHECK(replay_verdict(SigmaClass::all(P), v));

  auto D = ld(discrete(3));
  CHECK(part(check_sigma_filtered(SigmaClass::all(D), {3}), cond::family)
            .outcome()
        == false);
}

TEST_CASE("triangle_completion") {
  auto P = ld(poset_with_top());
  auto S = SigmaClass::all(P);
  auto f = *P->find_one("f");
  auto w = triangle_completion(S, f);
  CHECK(validate_triangle(S, w));
  CHECK(w.s == f);
  CHECK(w.s_prime == P->unit(*P->find_zero("t")));
  CHECK(P->is_id2(w.phi));

  auto a  = *P->find_zero("a");
  auto wi = triangle_completion(S, P->unit(a));
  CHECK(w.d == f);
  CHECK(wi.s == wi.s_prime);
  CHECK(P->is_id2(wi.phi));

  // d in Σ of a bifiltered 2-category: φ is invertible.
  auto C  = codiscrete_idempotent();
  auto we = triangle_completion(SigmaClass::all(C), *C->find_one("e"));
  CHECK(validate_triangle(SigmaClass::all(C), we));
  CHECK(C->is_invertible2(we.phi));

  auto L  = lax_parallel();
  auto SL = sigma_closure(SigmaClass(L, {*L->find_one("f")}));
  auto wg = triangle_completion(SL, *L->find_one("g"));
  CHECK(validate_triangle(SL, wg));
  CHECK(L->two_name(wg.phi) == "g=>f");

  auto A = ld(walking_arrow());
  try {
    triangle_completion(units(A), *A->find_one("f"));
    FAIL("expected SearchExhausted");
  } catch (SearchExhausted const& e) {
    CHECK(std::string(e.what()).find("no span") != std::string::npos);
  }
  auto SG = sigma_closure(SigmaClass(L, {*L->find_one("g")}));
  try {
    triangle_completion(SG, *L->find_one("f"));
    FAIL("expected SearchExhausted");
  } catch (SearchExhausted const& e) {
    CHECK(std::string(e.what()).find("no insertion") != std::string::npos);
  }
}

TEST_CASE("check_sigma_cofinal: examples") {
  auto P   = ld(poset_with_top());
  auto all = SigmaClass::all(P);
  auto id  = TwoFunctor::identity(P);
  auto v   = check_sigma_cofinal(id, all, all);
  CHECK(v.outcome());
  for (auto const& p : v.parts()) {
    for (auto const& w : p.witnesses()) {
      CHECK(replay_cofinal_witness(id, all, all, w));
    }
  }

  auto L   = lax_parallel();
  auto SL  = sigma_closure(SigmaClass(L, {*L->find_one("f")}));
  auto sub = sigma_subcategory(SL);
  auto inc = check_sigma_cofinal(sub.inclusion, SigmaClass::all(sub.category),
                                 SL);
  CHECK(inc.outcome());

  // A single non-top object of the poset.
  auto T  = ld(terminal());
  auto a  = *P->find_zero("a");
  auto Fa = TwoFunctor::make(T, P, {a}, {P->unit(a)}, {P->id2(P->unit(a))});
  auto vf = check_sigma_cofinal(Fa, SigmaClass::all(T), all);
  CHECK_FALSE(vf.outcome());
  CHECK(vf.counterexample().condition == cond::cofinal_arrow);
  CHECK(vf.counterexample().instance == std::vector<std::string>{"b"});
  CHECK(replay_cofinal_counterexample(Fa, SigmaClass::all(T), all,
                                      vf.counterexample()));

  auto top = *P->find_zero("t");
  auto Ft  = TwoFunctor::make(T, P, {top}, {P->unit(top)},
                             {P->id2(P->unit(top))});
  CHECK(check_sigma_cofinal(Ft, SigmaClass::all(T), all).outcome());
}

TEST_CASE("trivialization_check: examples") {
  auto P = ld(poset_with_top());
  auto r = trivialization_check(SigmaClass::all(P));
  CHECK(r.sigma_filtered.outcome());
  CHECK(r.right_side());
  CHECK(r.agree());

  auto A  = ld(walking_arrow());
  auto ra = trivialization_check(SigmaClass::none(A));
  CHECK_FALSE(ra.sigma_filtered.outcome());
  CHECK_FALSE(ra.right_side());
  CHECK(ra.agree());
  CHECK(ra.sigma_filtered.counterexample().instance
        == ra.sub_bifiltered.counterexample().instance);

  auto L  = lax_parallel();
  auto rl = trivialization_check(SigmaClass(L, {*L->find_one("f")}));
  CHECK(rl.sigma_filtered.outcome());
  CHECK(rl.agree());
}

TEST_CASE("σ-cones") {
  auto P = ld(poset_with_top());
  auto v = check_sigma_cones(SigmaClass::all(P));
  CHECK(v.outcome());
  CHECK(v.witnesses().size() == 7);
  CHECK(replay_verdict(SigmaClass::all(P), v));

  auto L  = lax_parallel();
  auto SL = sigma_closure(SigmaClass(L, {*L->find_one("f")}));
  auto c  = find_sigma_cone(SL, {0, 1});
  REQUIRE(c.outcome());
  // Vertex b, legs f and 1_b, cells for 1_a, f, g, 1_b.
  CHECK(c.witnesses().front().data
        == std::vector<std::string>{"b", "f", "1_b", "f=>f", "f=>f", "g=>f",
                                    "1_b=>1_b"});
  CHECK(replay_witness(SL, c.witnesses().front()));

  auto D  = ld(discrete(2));
  auto vd = check_sigma_cones(SigmaClass::all(D));
  CHECK_FALSE(vd.outcome());
  CHECK(replay_counterexample(SigmaClass::all(D), vd.counterexample()));

  CHECK_THROWS_AS(find_sigma_cone(SigmaClass::all(P), {0, 1, 2}, 2),
                  SizeLimitError);
}

TEST_CASE("fixtures: checkers agree with the oracles and with each other") {
  for (auto const& I : fixtures()) {
    CAPTURE(I->num_one_cells());
    auto all = SigmaClass::all(I);
    auto b   = check_bifiltered(*I);
    auto s   = check_sigma_filtered(all);
    CHECK(b.outcome() == s.outcome());
    CHECK(b.outcome() == oracle::sigma_filtered(*I, membership(all)));
    CHECK(replay_verdict(all, b));
    CHECK(replay_verdict(all, s));
    auto u = units(I);
    CHECK(check_sigma_filtered(u).outcome()
          == oracle::sigma_filtered(*I, membership(u)));
    CHECK(trivialization_check(u).agree());
    CHECK(trivialization_check(all).agree());
    if (s.outcome()) {
      CHECK(check_sigma_cones(all).outcome());
    }
  }
}

TEST_CASE("property: random doubled posets") {
  std::mt19937 rng(2024);
  int          positives = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + rng() % 4;
    auto        I = random_doubled_poset(rng, n, rng() % 2);
    auto        S = random_sigma(rng, I);
    CAPTURE(trial);
    auto v = check_sigma_filtered(S);
    CHECK(v.outcome() == oracle::sigma_filtered(*I, membership(S)));
    CHECK(replay_verdict(S, v));
    CHECK(check_bifiltered(*I).outcome()
          == check_sigma_filtered(SigmaClass::all(I)).outcome());
    auto r = trivialization_check(S);
    CHECK(r.agree());

    auto sub = sigma_subcategory(S);
    auto sub_all = SigmaClass::all(sub.category);
    CHECK(r.cofinal.outcome()
          == oracle::sigma_cofinal(sub.inclusion, membership(sub_all),
                                   membership(S)));
    if (v.outcome()) {
      ++positives;
      CHECK(check_sigma_cones(S).outcome());
      for (one_t d : I->one_cells()) {
        CHECK(validate_triangle(S, triangle_completion(S, d)));
      }
    }
  }
  CHECK(positives >= 10);
}

TEST_CASE("property: cofinal maps transfer σ-filteredness") {
  std::mt19937 rng(77);
  int          transfers = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n  = 1 + rng() % 4;
    auto        J  = random_doubled_poset(rng, n, rng() % 2);
    auto        S2 = random_sigma(rng, J);
    // Source: a Σ-subcategory, or J itself with a smaller class.
    auto                      S1 = random_sigma(rng, J);
    std::vector<TwoFunctor>   maps;
    std::vector<SigmaClass>   classes;
    maps.push_back(TwoFunctor::identity(J));
    classes.push_back(S1);
    auto sub = sigma_subcategory(S1);
    maps.push_back(sub.inclusion);
    classes.push_back(SigmaClass::all(sub.category));
    for (std::size_t k = 0; k < maps.size(); ++k) {
      auto const& F = maps[k];
      auto const& S = classes[k];
      if (!image(F, S).subset_of(S2)) {
        continue;
      }
      bool src = check_sigma_filtered(S).outcome();
      auto cof = check_sigma_cofinal(F, S, S2);
      CHECK(cof.outcome()
            == oracle::sigma_cofinal(F, membership(S), membership(S2)));
      for (auto const& p : cof.parts()) {
        if (p.outcome()) {
          for (auto const& w : p.witnesses()) {
            CHECK(replay_cofinal_witness(F, S, S2, w));
          }
        } else {
          CHECK(replay_cofinal_counterexample(F, S, S2, p.counterexample()));
        }
      }
      if (src && cof.outcome()) {
        ++transfers;
        CHECK(check_sigma_filtered(S2).outcome());
      }
    }
  }
  CHECK(transfers >= 5);
}
