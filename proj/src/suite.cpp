#include "sigmacat/suite.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

#include "sigmacat/compact.hpp"
#include "sigmacat/errors.hpp"
#include "sigmacat/filtered.hpp"
#include "sigmacat/flat.hpp"
#include "sigmacat/lexkit.hpp"

namespace sigmacat::io {

  std::vector<std::string> suite_lemmas() {
    return {"checker-coherence", "trivialization",       "sigma-colimit",
            "triangle",          "coequification",       "bicompactness",
            "bicompactness-closure", "flat-agreement",   "representables-flat",
            "nonflat-rejected",  "commutation",          "splitting",
            "lex-closure",       "cofinality-transfer"};
  }

  bool SuiteReport::ok() const {
    return std::all_of(lemmas.begin(), lemmas.end(),
                       [](auto const& l) { return l.failures.empty(); });
  }

  Json SuiteReport::machine() const {
    Json ls = Json::array();
    for (auto const& l : lemmas) {
      Json fs = Json::array();
      for (auto const& f : l.failures) {
        fs.push_back(
            {{"fixture", f.fixture}, {"detail", f.detail}, {"replay", f.replay}});
      }
      ls.push_back({{"lemma", l.name},
                    {"passed", l.passed},
                    {"failed", l.failures.size()},
                    {"failures", fs}});
    }
    return {{"fixtures", fixtures},
            {"hashes", hashes},
            {"warnings", warnings},
            {"lemmas", ls},
            {"ok", ok()}};
  }

  std::string SuiteReport::human() const {
    std::ostringstream out;
    out << "verify-suite: " << fixtures << " fixtures\n";
    for (auto const& w : warnings) {
      out << "warning: " << w << "\n";
    }
    for (auto const& l : lemmas) {
      out << "  " << l.name << ": " << l.passed << " passed, "
          << l.failures.size() << " failed\n";
      for (auto const& f : l.failures) {
        out << "    FAIL " << f.fixture << ": " << f.detail << "\n"
            << "      replay: " << f.replay << "\n";
      }
    }
    out << (ok() ? "all lemmas pass\n" : "FAILURES\n");
    return out.str();
  }

  namespace {

    class Runner {
     public:
      Runner(Corpus& c, SuiteOptions const& o) : _c(c), _o(o) {
        for (auto const& n : suite_lemmas()) {
          _results.push_back({n, 0, {}});
        }
        _names = c.names();
        if (o.seed_order) {
          std::mt19937 rng(*o.seed_order);
          std::shuffle(_names.begin(), _names.end(), rng);
        }
      }

      std::vector<std::string> of_kind(std::string const& k) {
        std::vector<std::string> out;
        for (auto const& n : _names) {
          if (_c.kind(n) == k) {
            out.push_back(n);
          }
        }
        return out;
      }

      // Runs one check, recording exceptions as failures.
      void check(std::string const&           lemma,
                 std::string const&           fixture,
                 std::string const&           replay,
                 std::function<std::string()> body) {
        auto&       r = result(lemma);
        std::string detail;
        try {
          detail = body();
        } catch (std::exception const& e) {
          detail = std::string("exception: ") + e.what();
        }
        if (detail.empty()) {
          ++r.passed;
        } else {
          r.failures.push_back({fixture, detail, "sigmacat " + replay});
        }
      }

      LemmaResult& result(std::string const& lemma) {
        for (auto& r : _results) {
          if (r.name == lemma) {
            return r;
          }
        }
        throw std::logic_error("unknown lemma " + lemma);
      }

      SigmaClass diagram_sigma(std::string const& d) {
        return io::diagram_sigma(_c, d);
      }

      bool bifiltered(TwoCat const& I) {
        return I.num_zero_cells() > 0 && check_bifiltered(I).outcome();
      }

      bool sigma_filtered(SigmaClass const& S) {
        return S.owner()->num_zero_cells() > 0
               && check_sigma_filtered(sigma_closure(S)).outcome();
      }

      SuiteReport finish() {
        SuiteReport out;
        out.fixtures = _names.size();
        for (auto const& n : _names) {
          out.hashes[n] = _c.fixture(n).sha256;
        }
        if (_names.empty()) {
          out.warnings.push_back("the corpus contains no fixtures");
        }
        for (auto& r : _results) {
          std::sort(r.failures.begin(), r.failures.end());
        }
        out.lemmas = std::move(_results);
        return out;
      }

      Corpus&                  _c;
      SuiteOptions             _o;
      std::vector<std::string> _names;
      std::vector<LemmaResult> _results;
    };

    std::string yes(bool b) {
      return b ? "positive" : "negative";
    }

    void run_filtered(Runner& R) {
      for (auto const& n : R.of_kind("twocat")) {
        auto I = R._c.twocat(n);
        auto S = R._c.sigma(n);
        R.check("checker-coherence", n, "check bifiltered " + n, [&] {
          if (I->num_zero_cells() == 0) {
            return std::string();
          }
          bool a = check_bifiltered(*I).outcome();
          bool b = check_sigma_filtered(SigmaClass::all(I)).outcome();
          return a == b ? std::string()
                        : "bifiltered " + yes(a) + " but sigma-filtered(all) "
                              + yes(b);
        });
        R.check("trivialization", n, "check trivialization " + n, [&] {
          if (I->num_zero_cells() == 0) {
            return std::string();
          }
          auto t = trivialization_check(S);
          return t.agree() ? std::string()
                           : "sigma-filtered " + yes(t.sigma_filtered.outcome())
                                 + " but subcategory/cofinality "
                                 + yes(t.right_side());
        });
        if (!R.sigma_filtered(S)) {
          continue;
        }
        auto Sc = sigma_closure(S);
        for (one_t d : I->one_cells()) {
          R.check("triangle", n + "/" + I->one_name(d),
                  "check sigma-filtered " + n, [&] {
                    auto w = triangle_completion(Sc, d);
                    return validate_triangle(Sc, w)
                               ? std::string()
                               : "witness does not re-validate";
                  });
        }
      }
    }

    // Some v: i → k with F(v)(f) = F(v)(g).
    bool coequified(CatPseudoFunctor const& F, zero_t i, mor_t f, mor_t g) {
      for (one_t v : F.base()->one_cells()) {
        if (F.base()->src(v) == i
            && F.on1(v).map_morphism(f) == F.on1(v).map_morphism(g)) {
          return true;
        }
      }
      return false;
    }

    void run_colimits(Runner& R) {
      for (auto const& n : R.of_kind("diagram")) {
        auto F = R._c.diagram(n);
        auto S = R.diagram_sigma(n);
        if (R.sigma_filtered(S)) {
          R.check("sigma-colimit", n, "colimit --sigma " + n, [&] {
            auto A   = sigma_bicolimit(F, S);
            auto B   = direct_sigma_bicolimit(F, S);
            auto sub = sigma_subcategory(sigma_closure(S));
            auto C   = bifiltered_bicolimit(precompose(F, sub.inclusion));
            if (!check_equivalence(A.result, C.result).verdict) {
              return std::string("sigma colimit differs from the restricted "
                                 "bifiltered colimit");
            }
            if (!check_equivalence(A.result, B.result).verdict) {
              return std::string("the two sigma routes differ");
            }
            return std::string();
          });
        }
        auto const& I = *F.base();
        if (!R.bifiltered(I)) {
          continue;
        }
        R.check("coequification", n, "colimit " + n, [&] {
          auto C = bifiltered_bicolimit(F);
          for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
            auto const& X = *F.on0(i);
            for (obj_t a = 0; a < X.num_objects(); ++a) {
              for (obj_t b = 0; b < X.num_objects(); ++b) {
                for (mor_t f : X.hom(a, b)) {
                  for (mor_t g : X.hom(a, b)) {
                    bool eq = premorphism_equal(C, fiber_premorphism(F, i, f),
                                                fiber_premorphism(F, i, g));
                    if (eq != coequified(F, i, f, g)) {
                      return "at " + I.zero_name(i) + ": " + X.morphism_name(f)
                             + ", " + X.morphism_name(g);
                    }
                  }
                }
              }
            }
          }
          return std::string();
        });
      }
    }

    void run_compact(Runner& R) {
      std::vector<std::pair<std::string, CatPtr>> shapes;
      for (auto const& n : R.of_kind("category")) {
        auto K = R._c.category(n);
        if (K->num_objects() <= R._o.max_shape_objects) {
          shapes.emplace_back(n, K);
        }
      }
      std::vector<std::pair<std::string, CatPseudoFunctor>> diagrams;
      for (auto const& n : R.of_kind("diagram")) {
        auto F = bifiltered_restriction(R._c.diagram(n), R.diagram_sigma(n));
        if (F) {
          diagrams.emplace_back(n, *F);
        }
      }
      for (auto const& [k, K] : shapes) {
        for (auto const& [d, F] : diagrams) {
          R.check("bicompactness", k + "@" + d, "compact check " + k + " " + d,
                  [&] {
                    auto r = check_bicompact_against(K, F);
                    return r.verdict ? std::string()
                                     : "comparison: " + r.analysis.failure;
                  });
        }
      }
      // Biproducts of small pairs and the biequalizer of (1, 1).
      std::vector<std::pair<std::string, CatPtr>> closure;
      for (std::size_t a = 0; a < shapes.size(); ++a) {
        for (std::size_t b = a; b < shapes.size(); ++b) {
          auto const& X = shapes[a].second;
          auto const& Y = shapes[b].second;
          if (X->num_objects() * Y->num_objects() <= 2
              && X->num_morphisms() * Y->num_morphisms() <= 8) {
            closure.emplace_back(shapes[a].first + "x" + shapes[b].first,
                                 biproduct(X, Y).category);
          }
        }
        auto const& X = shapes[a].second;
        if (X->num_objects() <= 2) {
          auto id = Functor::identity(X);
          closure.emplace_back("Eq(" + shapes[a].first + ")",
                               biequalizer(id, id).category);
        }
      }
      std::sort(closure.begin(), closure.end(),
                [](auto const& x, auto const& y) { return x.first < y.first; });
      for (auto const& [k, K] : closure) {
        for (auto const& [d, F] : diagrams) {
          R.check("bicompactness-closure", k + "@" + d, "verify-suite", [&] {
            auto r = check_bicompact_against(K, F);
            return r.verdict ? std::string()
                             : "comparison: " + r.analysis.failure;
          });
        }
      }
    }

    void run_flat(Runner& R) {
      bool rejected = false;
      for (auto const& n : R.of_kind("diagram")) {
        auto F = R._c.diagram(n);
        R.check("flat-agreement", n, "flat decompose " + n, [&] {
          auto v  = check_flat(F);
          auto re = reconstruct_from_representables(F);
          if (!v.outcome() && !v.counterexample().condition.empty()) {
            rejected = true;
          }
          return v.outcome() == re.verdict.outcome()
                     ? std::string()
                     : "check_flat " + yes(v.outcome()) + " but reconstruction "
                           + yes(re.verdict.outcome());
        });
      }
      for (auto const& n : R.of_kind("twocat")) {
        auto I = R._c.twocat(n);
        for (zero_t c = 0; c < I->num_zero_cells(); ++c) {
          R.check("representables-flat", n + "/" + I->zero_name(c),
                  "check bifiltered " + n, [&] {
                    auto F = representable_pseudofunctor(I, c);
                    if (!check_flat(F)) {
                      return std::string("representable not flat");
                    }
                    if (!reconstruct_from_representables(F).verdict) {
                      return std::string("representable not reconstructed");
                    }
                    return std::string();
                  });
        }
      }
      if (R.of_kind("diagram").empty()) {
        return;
      }
      R.check("nonflat-rejected", "corpus", "verify-suite", [&] {
        return rejected ? std::string()
                        : "no diagram fixture was rejected as non-flat";
      });
    }

    void run_bilim(Runner& R) {
      for (auto const& n : R.of_kind("commutation")) {
        R.check("commutation", n, "bilim commute " + n, [&] {
          auto        spec = R._c.commutation(n);
          Commutation c
              = spec.shape == "biproduct"
                    ? commute_product(spec.left, spec.right)
                : spec.shape == "biequalizer"
                    ? commute_biequalizer(spec.left, spec.right, spec.P, spec.Q)
                    : commute_cotensor(spec.left);
          if (!c.verdict) {
            return "comparison: " + c.analysis.failure;
          }
          if (!check_equivalence(c.comparison.source(), c.comparison.target())
                   .verdict) {
            return std::string("colimit of limits not equivalent to limit of "
                               "colimits");
          }
          return std::string();
        });
      }
      for (auto const& n : R.of_kind("pseudoidempotent")) {
        R.check("splitting", n, "bilim split " + n, [&] {
          auto P = R._c.pseudoidempotent(n);
          auto v = check_splitting(P, split_pseudoidempotent(P));
          return v ? std::string() : v.counterexample().condition;
        });
      }
    }

    void run_lex(Runner& R) {
      for (auto const& n : R.of_kind("diagram")) {
        auto tags = R._c.tags(n);
        if (std::find(tags.begin(), tags.end(), "lex") == tags.end()) {
          continue;
        }
        R.check("lex-closure", n, "lex verify-colimit " + n, [&] {
          auto r = verify_lex_bicolimit(R._c.diagram(n));
          if (r.verdict) {
            return std::string();
          }
          return r.verdict.counterexample().condition
                 + (r.formula_failures.empty()
                        ? std::string()
                        : ": " + r.formula_failures.front());
        });
      }
    }

    void run_cofinal(Runner& R) {
      for (auto const& n : R.of_kind("cofinal_map")) {
        R.check("cofinality-transfer", n, "check cofinal " + n, [&] {
          auto M = R._c.cofinal_map(n);
          if (!check_sigma_cofinal(M.functor, M.source_sigma, M.target_sigma)) {
            return std::string("the recorded map is not sigma-cofinal");
          }
          bool src = R.sigma_filtered(M.source_sigma);
          bool tgt = R.sigma_filtered(M.target_sigma);
          if (src && !tgt) {
            return std::string("filteredness does not transfer");
          }
          if (M.diagram && src) {
            auto D = R._c.diagram(*M.diagram);
            auto A = sigma_bicolimit(precompose(D, M.functor), M.source_sigma);
            auto B = sigma_bicolimit(D, M.target_sigma);
            if (!check_equivalence(A.result, B.result).verdict) {
              return std::string("the colimits are not equivalent");
            }
          }
          return std::string();
        });
      }
    }

  }  // namespace

  std::optional<CatPseudoFunctor> bifiltered_restriction(
      CatPseudoFunctor const& F, SigmaClass const& S) {
    auto const& I = *F.base();
    if (I.num_zero_cells() == 0) {
      return std::nullopt;
    }
    if (check_bifiltered(I)) {
      return F;
    }
    auto closed = sigma_closure(S);
    if (!check_sigma_filtered(closed)) {
      return std::nullopt;
    }
    return precompose(F, sigma_subcategory(closed).inclusion);
  }

  SuiteReport verify_suite(Corpus& corpus, SuiteOptions const& options) {
    corpus.validate_all();
    Runner R(corpus, options);
    run_filtered(R);
    run_colimits(R);
    run_compact(R);
    run_flat(R);
    run_bilim(R);
    run_lex(R);
    run_cofinal(R);
    return R.finish();
  }

}  // namespace sigmacat::io
