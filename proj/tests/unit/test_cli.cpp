#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sigmacat/commands.hpp"
#include "sigmacat/filtered.hpp"
#include "sigmacat/suite.hpp"

using namespace sigmacat;
using namespace sigmacat::io;
namespace fs = std::filesystem;

namespace {

  std::string const CORPUS = SIGMACAT_CORPUS_DIR;

  struct Run {
    int         code;
    std::string out, err;
  };

  Run run(std::vector<std::string> args) {
    args.insert(args.begin(), {"--corpus", CORPUS});
    std::ostringstream out, err;
    int                code = run_command(args, out, err);
    return {code, out.str(), err.str()};
  }

  // A scratch directory removed on destruction.
  struct Scratch {
    fs::path dir;

    explicit Scratch(std::string const& name)
        : dir(fs::temp_directory_path() / ("sigmacat-" + name)) {
      fs::remove_all(dir);
      fs::create_directories(dir);
    }
    ~Scratch() {
      fs::remove_all(dir);
    }

    void write(std::string const& file, std::string const& text) const {
      std::ofstream(dir / file) << text;
    }

    void copy_corpus() const {
      for (auto const& e : fs::directory_iterator(CORPUS)) {
        if (e.path().extension() == FIXTURE_EXTENSION) {
          fs::copy_file(e.path(), dir / e.path().filename());
        }
      }
    }
  };

}  // namespace

TEST_CASE("the documented command examples") {
  CHECK(run({"check", "bifiltered", "poset_top.fixture"}).code == EXIT_POSITIVE);
  auto neg = run({"check", "bifiltered", "discrete2.fixture"});
  CHECK(neg.code == EXIT_NEGATIVE);
  CHECK(neg.out.find("instance: (a, b)") != std::string::npos);
  CHECK(run({"flat", "check", "missing.fixture"}).code == EXIT_INPUT);
}

TEST_CASE("unknown commands and bad options exit 2") {
  CHECK(run({"frobnicate"}).code == EXIT_INPUT);
  CHECK(run({"--format", "xml", "validate"}).code == EXIT_INPUT);
  CHECK(run({"check"}).code == EXIT_INPUT);
  CHECK(run({"--help"}).code == EXIT_POSITIVE);
}

TEST_CASE("machine output is structured and carries fixture hashes") {
  auto r = run({"--format", "machine", "check", "bifiltered", "discrete2"});
  auto j = Json::parse(r.out);
  CHECK(j.at("verdict").at("outcome") == "negative");
  CHECK(j.at("verdict").at("counterexample").at("instance")
        == Json::array({"a", "b"}));
  Corpus c(CORPUS);
  CHECK(j.at("fixtures").at("discrete2") == c.fixture("discrete2").sha256);
  CHECK(j.at("command") == Json::array({"check", "bifiltered", "discrete2"}));
}

TEST_CASE("fixture arguments may be paths") {
  auto p = (fs::path(CORPUS) / "poset_top.fixture").string();
  CHECK(run({"check", "bifiltered", p}).code == EXIT_POSITIVE);
  CHECK(run({"check", "bifiltered", "/no/such/dir/x.fixture"}).code
        == EXIT_INPUT);
}

TEST_CASE("the corpus path comes from the environment") {
  ::setenv(CORPUS_ENV, CORPUS.c_str(), 1);
  std::ostringstream out, err;
  CHECK(run_command({"check", "bifiltered", "terminal"}, out, err)
        == EXIT_POSITIVE);
  ::unsetenv(CORPUS_ENV);
}

TEST_CASE("the bundled corpus passes every lemma") {
  Corpus c(CORPUS);
  auto   rep = verify_suite(c);
  CHECK(rep.ok());
  CHECK(rep.fixtures >= 12);
  CHECK(rep.lemmas.size() == suite_lemmas().size());
  for (auto const& l : rep.lemmas) {
    CAPTURE(l.name);
    CHECK(l.passed > 0);
    CHECK(l.failures.empty());
  }
  CHECK(run({"verify-suite"}).code == EXIT_POSITIVE);
}

TEST_CASE("suite reports are deterministic and ignore the visiting order") {
  auto a = run({"--format", "machine", "verify-suite"});
  auto b = run({"--format", "machine", "verify-suite"});
  auto c = run({"--format", "machine", "--seed-order", "7", "verify-suite"});
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("an empty corpus warns and succeeds") {
  Scratch s("empty");
  auto    r = run({"--format", "machine", "verify-suite", s.dir.string()});
  CHECK(r.code == EXIT_POSITIVE);
  auto j = Json::parse(r.out);
  CHECK(j.at("fixtures") == 0);
  CHECK(j.at("warnings").size() == 1);
}

TEST_CASE("an injected non-associative category fails validation") {
  Scratch s("nonassoc");
  s.copy_corpus();
  // h g f is ambiguous: (hg)f = k f = u but h(gf) = h e = v.
  s.write("bad.fixture", R"({
    "kind": "category",
    "objects": ["a", "b", "c", "d"],
    "morphisms": [["f", "a", "b"], ["g", "b", "c"], ["h", "c", "d"],
                  ["e", "a", "c"], ["k", "b", "d"],
                  ["u", "a", "d"], ["v", "a", "d"]],
    "composition": [["g", "f", "e"], ["h", "g", "k"],
                    ["k", "f", "u"], ["h", "e", "v"]]
  })");
  auto r = run({"verify-suite", s.dir.string()});
  CHECK(r.code == EXIT_INPUT);
  CHECK(r.err.find("bad.fixture") != std::string::npos);
}

TEST_CASE("malformed fixtures report their location") {
  Scratch s("malformed");
  s.write("x.fixture", R"({"kind": "category", "objects": ["a"],
                           "morphisms": [["f", "a", "zz"]]})");
  s.write("y.fixture", "{ not json");
  s.write("z.fixture", R"({"kind": "twocat", "locally_discrete": "nope"})");
  Corpus c(s.dir);
  CHECK_THROWS_WITH_AS(c.category("x"), doctest::Contains("x.fixture"),
                       FixtureError);
  CHECK_THROWS_WITH_AS(c.fixture("y"), doctest::Contains("malformed JSON"),
                       FixtureError);
  CHECK_THROWS_AS(c.twocat("z"), FixtureError);
  auto r = run({"check", "bifiltered", (s.dir / "z.fixture").string()});
  CHECK(r.code == EXIT_INPUT);
}

TEST_CASE("a stale manifest is rejected") {
  Scratch s("manifest");
  s.copy_corpus();
  fs::copy_file(fs::path(CORPUS) / MANIFEST_NAME, s.dir / MANIFEST_NAME);
  CHECK(run({"validate", s.dir.string()}).code == EXIT_POSITIVE);
  s.write("terminal.fixture",
          R"({"kind": "twocat", "locally_discrete": "cat_arrow"})");
  CHECK(run({"validate", s.dir.string()}).code == EXIT_INPUT);
}

TEST_CASE("shared fixture names give shared objects") {
  Corpus c(CORPUS);
  auto   spec = c.commutation("comm_biproduct");
  CHECK(spec.left.base() == spec.right.base());
  CHECK(c.diagram("const_z2").base() == c.twocat("poset_top"));
  // Σ is closed on load.
  auto S = c.sigma("sigma_lax_parallel");
  CHECK(sigma_closure(S).members() == S.members());
}

TEST_CASE("verdicts survive a JSON round trip") {
  Corpus c(CORPUS);
  for (auto const& n : c.names()) {
    if (c.kind(n) != "twocat") {
      continue;
    }
    CAPTURE(n);
    auto v = check_sigma_filtered(c.sigma(n));
    CHECK(verdict_from_json(verdict_json(v)) == v);
  }
}

TEST_CASE("every negative verdict replays from its emitted file") {
  Scratch s("replay");
  Corpus  c(CORPUS);
  int     negatives = 0;
  for (auto const& n : c.names()) {
    std::vector<std::string> cmd;
    if (c.kind(n) == "twocat") {
      cmd = {"check", "sigma-filtered", n};
    } else if (c.kind(n) == "diagram") {
      cmd = {"flat", "check", n};
    } else {
      continue;
    }
    CAPTURE(n);
    auto file = (s.dir / (n + ".json")).string();
    cmd.insert(cmd.end(), {"--emit", file});
    auto r = run(cmd);
    REQUIRE(r.code != EXIT_INPUT);
    negatives += r.code == EXIT_NEGATIVE;
    CHECK(run({"replay", file}).code == EXIT_POSITIVE);
  }
  CHECK(negatives >= 3);
}

TEST_CASE("a tampered replay file is detected") {
  Scratch s("tamper");
  auto    file = (s.dir / "r.json").string();
  REQUIRE(run({"check", "bifiltered", "discrete2", "--emit", file}).code
          == EXIT_NEGATIVE);
  Json j;
  std::ifstream(file) >> j;
  j["report"]["verdict"]["counterexample"]["instance"] = {"a", "a"};
  std::ofstream(file) << j.dump();
  auto r = run({"replay", file});
  CHECK(r.code == EXIT_NEGATIVE);
  CHECK(r.out.find("does not re-validate") != std::string::npos);
}

TEST_CASE("compact check states its scope") {
  auto r = run({"compact", "check", "cat_arrow", "chain_inclusions"});
  CHECK(r.code == EXIT_POSITIVE);
  CHECK(r.out.find(COMPACT_SCOPE) != std::string::npos);
  // A σ-filtered but not bifiltered index is restricted to Σ.
  CHECK(run({"compact", "check", "cat_arrow", "const_lax_parallel"}).code
        == EXIT_POSITIVE);
}

TEST_CASE("commands over the corpus") {
  CHECK(run({"check", "sigma-filtered", "sigma_chain3_top"}).code == EXIT_POSITIVE);
  CHECK(run({"check", "sigma-filtered", "chain3", "--sigma", "m12"}).code
        == EXIT_NEGATIVE);
  CHECK(run({"check", "sigma-filtered", "chain3", "--sigma", "none"}).code
        == EXIT_NEGATIVE);
  CHECK(run({"check", "sigma-filtered", "chain3", "--sigma", "nope"}).code
        == EXIT_INPUT);
  CHECK(run({"check", "trivialization", "poset_bottom"}).code == EXIT_POSITIVE);
  CHECK(run({"check", "cofinal", "cofinal_top_of_chain"}).code == EXIT_POSITIVE);
  CHECK(run({"colimit", "const_z2"}).code == EXIT_POSITIVE);
  CHECK(run({"colimit", "--sigma", "chain_sigma"}).code == EXIT_POSITIVE);
  CHECK(run({"colimit", "const_lax_parallel"}).code == EXIT_INPUT);
  CHECK(run({"bilim", "split", "idem_z2"}).code == EXIT_POSITIVE);
  CHECK(run({"bilim", "commute", "comm_biequalizer"}).code == EXIT_POSITIVE);
  CHECK(run({"bilim", "pseudolimit", "chain_inclusions"}).code == EXIT_POSITIVE);
  CHECK(run({"flat", "check", "const_discrete2"}).code == EXIT_NEGATIVE);
  CHECK(run({"flat", "decompose", "const_discrete2"}).code == EXIT_INPUT);
  CHECK(run({"flat", "decompose", "rep_iso_hom_a", "--report"}).code
        == EXIT_POSITIVE);
  CHECK(run({"lex", "check", "cat_diamond"}).code == EXIT_POSITIVE);
  CHECK(run({"lex", "check", "cat_parallel"}).code == EXIT_NEGATIVE);
  CHECK(run({"lex", "verify-colimit", "lex_iso_chain"}).code == EXIT_POSITIVE);
  // Z/2 has no terminal object.
  CHECK(run({"lex", "verify-colimit", "const_z2"}).code == EXIT_INPUT);
  CHECK(run({"lex", "verify-colimit", "const_discrete2"}).code == EXIT_INPUT);
  CHECK(run({"bilim", "split", "cat_z2"}).code == EXIT_INPUT);
}
