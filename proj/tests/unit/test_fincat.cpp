#include "doctest.h"

#include <random>

#include "sigmacat/fincat.hpp"
#include "support/cats.hpp"
#include "support/oracles.hpp"

using namespace sigmacat;
using namespace sigmacat::test;

TEST_CASE("validate_fincat: terminal category") {
  auto T = terminal();
  CHECK(T->num_objects() == 1);
  CHECK(T->num_morphisms() == 1);
}

TEST_CASE("validate_fincat: missing composite is an error") {
  FinCatData d;
  d.objects     = {"a", "b", "c", "d"};
  d.morphisms   = {{"f", "a", "b"},
                   {"g", "b", "c"},
                   {"h", "c", "d"},
                   {"gf", "a", "c"},
                   {"hg", "b", "d"}};
  d.composition = {{"g", "f", "gf"}, {"h", "g", "hg"}};
  try {
    validate_fincat(d);
    FAIL("expected a validation error");
  } catch (ValidationError const& e) {
    REQUIRE(!e.violations().empty());
    CHECK(e.violations().front().find("composition not total")
          != std::string::npos);
  }
}

TEST_CASE("validate_fincat: walking isomorphism") {
  auto W = walking_iso();
  CHECK(oracle::is_category(*W));
  CHECK(W->num_morphisms() == 4);
  CHECK(W->is_iso(*W->find_morphism("f")));
}

TEST_CASE("validate_fincat: associativity and identity violations") {
  FinCatData d;
  d.objects   = {"*"};
  d.morphisms = {{"e", "*", "*"}};
  // e e = 1 would make a group; e e = e an idempotent. Both are fine, but a
  // conflicting identity composite is not.
  d.composition = {{"e", "e", "e"}, {"1_*", "e", "1_*"}};
  CHECK_THROWS_AS(validate_fincat(d), ValidationError);

  FinCatData bad;
  bad.objects   = {"a"};
  bad.morphisms = {{"f", "a", "b"}};
  CHECK_THROWS_AS(validate_fincat(bad), ValidationError);
}

TEST_CASE("validate_fincat: non-associative table is rejected") {
  // A three-element monoid {1, x, y} with xx = y, xy = x, yx = y, yy = y:
  // (xx)x = yx = y but x(xx) = xy = x.
  FinCatData d;
  d.objects     = {"*"};
  d.morphisms   = {{"x", "*", "*"}, {"y", "*", "*"}};
  d.composition = {{"x", "x", "y"},
                   {"x", "y", "x"},
                   {"y", "x", "y"},
                   {"y", "y", "y"}};
  try {
    validate_fincat(d);
    FAIL("expected a validation error");
  } catch (ValidationError const& e) {
    CHECK(e.violations().front().find("associativity") != std::string::npos);
  }
}

TEST_CASE("compose_path") {
  auto  W = walking_iso();
  obj_t a = *W->find_object("a");
  mor_t f = *W->find_morphism("f"), g = *W->find_morphism("g");
  CHECK(W->compose_path(a, {}) == W->identity(a));
  std::vector<mor_t> p1{f};
  CHECK(W->compose_path(a, p1) == f);
  std::vector<mor_t> p2{f, g};
  CHECK(W->compose_path(a, p2) == W->identity(a));
  std::vector<mor_t> bad{g};
  CHECK_THROWS_AS(W->compose_path(a, bad), PreconditionError);
}

TEST_CASE("skeleton") {
  auto S = skeleton(walking_iso());
  CHECK(S.category->num_objects() == 1);
  CHECK(S.category->num_morphisms() == 1);

  auto D = discrete(2);
  CHECK(skeleton(D).category->num_objects() == 2);

  // Parallel pair: no non-identity isomorphisms, so the skeleton is itself.
  auto P = parallel_pair();
  CHECK(oracle::iso_class_count(*P) == 2);
  auto SP = skeleton(P);
  CHECK(SP.category->num_objects() == 2);
  CHECK(SP.category->num_morphisms() == 4);
  CHECK(find_isomorphism(SP.category, P).has_value());
}

TEST_CASE("skeleton is idempotent up to isomorphism") {
  for (auto const& C : {walking_iso(), parallel_pair(), chain(3), z2(),
                        discrete(3), walking_arrow()}) {
    auto S  = skeleton(C).category;
    auto SS = skeleton(S).category;
    CHECK(find_isomorphism(S, SS).has_value());
    CHECK(S->num_objects() == oracle::iso_class_count(*C));
  }
}

TEST_CASE("check_equivalence: examples") {
  auto C = walking_iso();
  auto r = check_equivalence(C, skeleton(C).category);
  CHECK(r.verdict.outcome());

  auto neg = check_equivalence(discrete(2), discrete(1));
  REQUIRE(!neg.verdict.outcome());
  CHECK(neg.verdict.counterexample().condition == "object-class count");
  CHECK(neg.verdict.counterexample().search_space
        == "object-class count 2 != 1");

  auto pos = check_equivalence(walking_iso(), terminal());
  REQUIRE(pos.verdict.outcome());
  CHECK(pos.witness->GF_iso.is_invertible());
  CHECK(pos.witness->FG_iso.is_invertible());
}

TEST_CASE("check_equivalence: reflexive, symmetric, hom-set mismatch") {
  std::vector<CatPtr> cats{terminal(),     discrete(2), walking_arrow(),
                           walking_iso(),  parallel_pair(), z2(),
                           chain(3),       discrete(1)};
  for (auto const& C : cats) {
    auto r = check_equivalence(C, C);
    REQUIRE(r.verdict.outcome());
    CHECK(r.witness->F.source() == C);
  }
  for (auto const& C : cats) {
    for (auto const& D : cats) {
      CHECK(check_equivalence(C, D).verdict.outcome()
            == check_equivalence(D, C).verdict.outcome());
    }
  }
  auto r = check_equivalence(walking_arrow(), parallel_pair());
  REQUIRE(!r.verdict.outcome());
  CHECK(r.verdict.counterexample().condition == "hom-set multiset");
  // Z/2 and the terminal category agree on class count but not hom-sets.
  CHECK(!check_equivalence(z2(), terminal()).verdict.outcome());
}

TEST_CASE("check_equivalence: transitivity instances") {
  auto A = walking_iso();
  auto B = terminal();
  auto C = skeleton(walking_iso()).category;
  auto ab = check_equivalence(A, B);
  auto bc = check_equivalence(B, C);
  REQUIRE(ab.verdict.outcome());
  REQUIRE(bc.verdict.outcome());
  auto F = compose(bc.witness->F, ab.witness->F);
  CHECK(analyze_functor(F).is_equivalence());
  CHECK(check_equivalence(A, C).verdict.outcome());
}

TEST_CASE("functor_category: examples") {
  auto D  = walking_iso();
  auto F1 = functor_category(terminal(), D);
  CHECK(check_equivalence(F1.category, D).verdict.outcome());
  CHECK(find_isomorphism(F1.category, D).has_value());

  auto F2 = functor_category(walking_arrow(), terminal());
  CHECK(F2.category->num_objects() == 1);
  CHECK(F2.category->num_morphisms() == 1);

  auto F3 = functor_category(discrete(2), discrete(2));
  CHECK(oracle::functor_count(*discrete(2), *discrete(2)) == 4);
  CHECK(F3.category->num_objects() == 4);
  CHECK(F3.category->num_morphisms() == 4);
}

TEST_CASE("functor_category agrees with brute-force enumeration") {
  std::vector<CatPtr> cats{terminal(), discrete(2), walking_arrow(),
                           walking_iso(), parallel_pair(), z2(), chain(3)};
  for (auto const& C : cats) {
    for (auto const& D : cats) {
      auto FC = functor_category(C, D);
      CHECK(FC.category->num_objects() == oracle::functor_count(*C, *D));
      CHECK(FC.category->num_morphisms() == oracle::nat_trans_count(*C, *D));
      CHECK(oracle::is_category(*FC.category));
    }
  }
  // Frozen values from the brute-force oracle above.
  CHECK(functor_category(walking_arrow(), walking_arrow())
            .category->num_morphisms()
        == 6);
  CHECK(functor_category(chain(3), chain(3)).category->num_objects() == 10);
}

TEST_CASE("functor_category: size guard") {
  CHECK_THROWS_AS(functor_category(discrete(3), discrete(3), 10),
                  SizeLimitError);
}

TEST_CASE("find_natural_iso and analyze_functor") {
  auto W  = walking_iso();
  auto T  = terminal();
  auto a  = Functor::constant(T, W, 0);
  auto b  = Functor::constant(T, W, 1);
  auto na = find_natural_iso(a, b);
  REQUIRE(na.has_value());
  CHECK(na->is_invertible());

  auto P  = parallel_pair();
  auto pa = Functor::constant(T, P, 0);
  auto pb = Functor::constant(T, P, 1);
  CHECK(!find_natural_iso(pa, pb).has_value());

  CHECK(analyze_functor(a).full);
  CHECK(analyze_functor(a).faithful);
  CHECK(analyze_functor(a).essentially_surjective);
  CHECK(!analyze_functor(pa).essentially_surjective);
}

TEST_CASE("property: random posets are categories and self-equivalent") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 1 + rng() % 5;
    // Random order relation: transitive closure of random pairs i < j.
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      le[i][i] = true;
      for (std::size_t j = i + 1; j < n; ++j) {
        le[i][j] = rng() % 2;
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          le[i][j] = le[i][j] || (le[i][k] && le[k][j]);
        }
      }
    }
    std::vector<std::string>                 objs;
    std::vector<FinCatData::Morphism>        mors;
    std::vector<std::array<std::string, 3>> comp;
    auto nm = [](std::size_t i, std::size_t j) {
      return "r" + std::to_string(i) + "_" + std::to_string(j);
    };
    for (std::size_t i = 0; i < n; ++i) {
      objs.push_back("p" + std::to_string(i));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && le[i][j]) {
          mors.push_back({nm(i, j), objs[i], objs[j]});
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          if (i != j && j != k && i != k && le[i][j] && le[j][k]) {
            comp.push_back({nm(j, k), nm(i, j), nm(i, k)});
          }
        }
      }
    }
    auto C = make_cat(objs, mors, comp);
    CHECK(oracle::is_category(*C));
    CHECK(check_equivalence(C, C).verdict.outcome());
    auto S = skeleton(C);
    CHECK(analyze_functor(S.inclusion).is_equivalence());
    CHECK(analyze_functor(S.retraction).is_equivalence());
    auto r = check_equivalence(C, S.category);
    CHECK(r.verdict.outcome());
  }
}
