#include "sigmacat/commands.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sigmacat/compact.hpp"
#include "sigmacat/errors.hpp"
#include "sigmacat/filtered.hpp"
#include "sigmacat/flat.hpp"
#include "sigmacat/lexkit.hpp"
#include "sigmacat/suite.hpp"

namespace fs = std::filesystem;

namespace sigmacat::io {

  namespace {

    std::vector<std::string> strings(Json const& j, char const* key) {
      return j.contains(key) ? j.at(key).get<std::vector<std::string>>()
                             : std::vector<std::string>{};
    }

    SearchStats stats_of(Json const& j) {
      SearchStats s;
      if (j.contains("stats")) {
        s.instances  = j.at("stats").at("instances").get<std::size_t>();
        s.candidates = j.at("stats").at("candidates").get<std::size_t>();
      }
      return s;
    }

  }  // namespace

  Verdict verdict_from_json(Json const& j) {
    std::vector<Verdict> parts;
    SearchStats          stats = stats_of(j);
    if (j.contains("parts")) {
      for (auto const& p : j.at("parts")) {
        parts.push_back(verdict_from_json(p));
        stats.instances -= parts.back().stats().instances;
        stats.candidates -= parts.back().stats().candidates;
      }
    }
    auto    subject = j.at("subject").get<std::string>();
    Verdict v       = Verdict::positive(subject, {}, stats);
    if (j.at("outcome") == "positive") {
      std::vector<Witness> ws;
      for (auto const& w : j.at("witnesses")) {
        ws.push_back({w.at("condition").get<std::string>(),
                      strings(w, "instance"), strings(w, "data")});
      }
      v = Verdict::positive(subject, std::move(ws), stats);
    } else {
      auto const& c = j.at("counterexample");
      v             = Verdict::negative(subject,
                                        {c.at("condition").get<std::string>(),
                                         strings(c, "instance"),
                                         c.at("search_space").get<std::string>()},
                                        stats);
    }
    for (auto& p : parts) {
      v.add_part(std::move(p));
    }
    for (auto const& n : strings(j, "notes")) {
      v.add_note(n);
    }
    return v;
  }

  namespace {

    std::string outcome_word(bool b) {
      return b ? "positive" : "negative";
    }

    // Fixture arguments are either paths to *.fixture files, whose corpus
    // is the containing directory, or names in the selected corpus.
    class Session {
     public:
      explicit Session(std::string corpus) : _corpus(std::move(corpus)) {}

      std::pair<Corpus*, std::string> resolve(std::string const& arg) {
        fs::path p(arg);
        if (fs::is_regular_file(p)) {
          auto dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
          return {&corpus(dir), p.stem().string()};
        }
        std::string name = p.extension() == FIXTURE_EXTENSION
                               ? p.stem().string()
                               : arg;
        auto& c = corpus(_corpus);
        if (p.has_parent_path() || !c.contains(name)) {
          throw FixtureError(arg, "no such fixture");
        }
        return {&c, name};
      }

      Corpus& corpus(fs::path const& dir) {
        auto key = fs::weakly_canonical(dir).string();
        auto it  = _corpora.find(key);
        if (it == _corpora.end()) {
          it = _corpora.emplace(key, std::make_unique<Corpus>(dir)).first;
        }
        return *it->second;
      }

      // Resolves and records the fixture hash for the report.
      std::pair<Corpus*, std::string> use(std::string const& arg) {
        auto r = resolve(arg);
        _hashes[r.second] = r.first->fixture(r.second).sha256;
        return r;
      }

      Json hashes() const {
        return _hashes;
      }

      std::string const& default_corpus() const {
        return _corpus;
      }

     private:
      std::string                                     _corpus;
      std::map<std::string, std::unique_ptr<Corpus>>  _corpora;
      std::map<std::string, std::string>              _hashes;
    };

    // Σ named on the command line: "all", "none", a fixture carrying a
    // Σ over the same 1-cell names, or a comma-separated list of 1-cells.
    SigmaClass parse_sigma(Session&           s,
                           TwoCatPtr const&   I,
                           std::string const& spec) {
      if (spec == "all") {
        return SigmaClass::all(I);
      }
      if (spec == "none") {
        return SigmaClass::none(I);
      }
      std::vector<std::string> names;
      auto& c = s.corpus(s.default_corpus());
      if (c.contains(spec) && c.kind(spec) == "twocat") {
        auto S = c.sigma(spec);
        for (one_t x : S.members()) {
          names.push_back(S.owner()->one_name(x));
        }
      } else {
        std::stringstream in(spec);
        for (std::string n; std::getline(in, n, ',');) {
          if (!n.empty()) {
            names.push_back(n);
          }
        }
      }
      std::vector<one_t> members;
      for (auto const& n : names) {
        auto x = I->find_one(n);
        if (!x) {
          throw FixtureError("--sigma", "no 1-cell named " + n);
        }
        members.push_back(*x);
      }
      return sigma_closure(SigmaClass(I, members));
    }

    CommandResult from_verdict(Verdict const& v) {
      CommandResult r;
      r.code              = v ? EXIT_POSITIVE : EXIT_NEGATIVE;
      r.report["verdict"] = verdict_json(v);
      r.human             = v.to_string();
      if (r.human.empty() || r.human.back() != '\n') {
        r.human += "\n";
      }
      return r;
    }

    Json category_summary(FinCat const& C) {
      Json objects = Json::array();
      for (obj_t x = 0; x < C.num_objects(); ++x) {
        objects.push_back(C.object_name(x));
      }
      return {{"objects", objects}, {"morphisms", C.num_morphisms()}};
    }

    std::string summary_line(std::string const& what, FinCat const& C) {
      return what + ": " + std::to_string(C.num_objects()) + " objects, "
             + std::to_string(C.num_morphisms()) + " morphisms\n";
    }

    CommandResult run_replay(std::string const& file);

    // The arguments without the global options, which never affect a
    // verdict.
    std::vector<std::string> strip_globals(std::vector<std::string> const& args) {
      static std::vector<std::string> const globals{"--format", "--corpus",
                                                    "--seed-order", "--emit"};
      std::vector<std::string> kept;
      for (std::size_t i = 0; i < args.size(); ++i) {
        bool skip = false;
        for (auto const& g : globals) {
          if (args[i] == g) {
            ++i;
            skip = true;
          } else if (args[i].rfind(g + "=", 0) == 0) {
            skip = true;
          }
        }
        if (!skip) {
          kept.push_back(args[i]);
        }
      }
      return kept;
    }

    struct Cli {
      std::string                         format = "human";
      std::string                         corpus = "corpus";
      std::optional<unsigned>             seed;
      std::string                         emit;
      std::function<CommandResult(Session&)> action;
    };

    CommandResult dispatch(std::vector<std::string> const& args, Cli& cli) {
      CLI::App app{"Finite 2-dimensional filteredness, bicolimits and flatness",
                   "sigmacat"};
      app.require_subcommand(1);
      app.fallthrough();
      app.add_option("--format", cli.format, "Report format")
          ->check(CLI::IsMember({"human", "machine"}));
      app.add_option("--corpus", cli.corpus, "Corpus directory")
          ->envname(CORPUS_ENV);
      app.add_option("--seed-order", cli.seed,
                     "Permute the fixture visiting order");
      app.add_option("--emit", cli.emit, "Write a replay file");

      std::string a, b, sigma_spec;
      bool        sigma_flag = false, write = false, report = false;
      auto        set        = [&](auto f) { return [&cli, f] { cli.action = f; }; };

      auto* check = app.add_subcommand("check", "Filteredness and cofinality");
      check->require_subcommand(1);
      auto* bif = check->add_subcommand("bifiltered", "Is the 2-category bifiltered");
      bif->add_option("fixture", a)->required();
      bif->callback(set([&](Session& s) {
        auto [c, n] = s.use(a);
        return from_verdict(check_bifiltered(*c->twocat(n)));
      }));
      auto* sf = check->add_subcommand("sigma-filtered", "Is (I, Σ) σ-filtered");
      sf->add_option("fixture", a)->required();
      sf->add_option("--sigma", sigma_spec,
                     "all, none, a fixture name or a list of 1-cells");
      sf->callback(set([&](Session& s) {
        auto [c, n] = s.use(a);
        auto S = sigma_spec.empty() ? c->sigma(n)
                                    : parse_sigma(s, c->twocat(n), sigma_spec);
        return from_verdict(check_sigma_filtered(S));
      }));
      auto* triv = check->add_subcommand(
          "trivialization", "Compare σ-filteredness with the Σ-subcategory");
      triv->add_option("fixture", a)->required();
      triv->callback(set([&](Session& s) {
        auto [c, n] = s.use(a);
        auto          t = trivialization_check(c->sigma(n));
        CommandResult r;
        r.code   = t.agree() ? EXIT_POSITIVE : EXIT_NEGATIVE;
        r.report = {{"agree", t.agree()},
                    {"sigma_filtered", verdict_json(t.sigma_filtered)},
                    {"sub_bifiltered", verdict_json(t.sub_bifiltered)},
                    {"cofinal", verdict_json(t.cofinal)}};
        r.human = "sigma-filtered: " + outcome_word(t.sigma_filtered.outcome())
                  + "\nsubcategory bifiltered and cofinal: "
                  + outcome_word(t.right_side()) + "\n"
                  + (t.agree() ? "sides agree\n" : "sides DISAGREE\n");
        return r;
      }));
      auto* cof = check->add_subcommand("cofinal", "Is the recorded map σ-cofinal");
      cof->add_option("fixture", a)->required();
      cof->callback(set([&](Session& s) {
        auto [c, n] = s.use(a);
        auto M      = c->cofinal_map(n);
        return from_verdict(
            check_sigma_cofinal(M.functor, M.source_sigma, M.target_sigma));
      }));

      auto* colim = app.add_subcommand("colimit", "Compute a bicolimit");
      colim->add_option("fixture", a)->required();
      colim->add_flag("--sigma", sigma_flag,
                      "Use the Σ of the base instead of a bifiltered index");
      colim->callback(set([&](Session& s) {
        auto [c, n] = s.use(a);
        auto F      = c->diagram(n);
        auto C      = sigma_flag ? sigma_bicolimit(F, diagram_sigma(*c, n))
                                 : bifiltered_bicolimit(F);
        CommandResult r;
        r.report["colimit"] = category_summary(*C.result);
        r.human             = summary_line("colimit", *C.result);
        return r;
      }));

      auto* bilim = app.add_subcommand("bilim", "Finite bilimits");
      bilim->require_subcommand(1);
      auto* split = bilim->add_subcommand("split", "Split a pseudoidempotent");
      split->add_option("fixture", a)->required();
      split->callback(set([&](Session& s) {
        auto [c, n] = s.use(a);
        auto P      = c->pseudoidempotent(n);
        auto S      = split_pseudoidempotent(P);
        auto r      = from_verdict(check_splitting(P, S));
        r.report["splitting"] = category_summary(*S.category);
        r.human += summary_line("splitting", *S.category);
        return r;
      }));
      auto* commute = bilim->add_subcommand(
          "commute", "Compare colimit of limits with limit of colimits");
      commute->add_option("fixture", a)->required();
      commute->callback(set([&](Session& s) {
        auto [c, n]   = s.use(a);
        auto        spec = c->commutation(n);
        Commutation m
            = spec.shape == "biproduct"
                  ? commute_product(spec.left, spec.right)
              : spec.shape == "biequalizer"
                  ? commute_biequalizer(spec.left, spec.right, spec.P, spec.Q)
                  : commute_cotensor(spec.left);
        auto r = from_verdict(m.verdict);
        r.report["shape"] = spec.shape;
        return r;
      }));
      auto* pl = bilim->add_subcommand("pseudolimit", "Pseudolimit of a diagram");
      pl->add_option("fixture", a)->required();
      pl->callback(set([&](Session& s) {
        auto [c, n] = s.use(a);
        auto          L = pseudolimit_cocycle(c->diagram(n));
        CommandResult r;
        r.report["pseudolimit"] = category_summary(*L.category);
        r.human                 = summary_line("pseudolimit", *L.category);
        return r;
      }));

      auto* flat = app.add_subcommand("flat", "Flatness");
      flat->require_subcommand(1);
      auto* fc = flat->add_subcommand("check", "Is the diagram flat");
      fc->add_option("fixture", a)->required();
      fc->callback(set([&](Session& s) {
        auto [c, n] = s.use(a);
        return from_verdict(check_flat(c->diagram(n)));
      }));
      auto* fd = flat->add_subcommand(
          "decompose", "Reconstruct a flat diagram from representables");
      fd->add_option("fixture", a)->required();
      fd->add_flag("--report", report, "Include pointwise verdicts");
      fd->callback(set([&](Session& s) {
        auto [c, n] = s.use(a);
        auto F      = c->diagram(n);
        auto R      = decompose_flat(F);
        auto r      = from_verdict(R.verdict);
        if (report) {
          Json pw = Json::array();
          for (zero_t j = 0; j < R.pointwise.size(); ++j) {
            pw.push_back(verdict_json(R.pointwise[j]));
            r.human += F.base()->zero_name(j) + ": "
                       + outcome_word(R.pointwise[j].outcome()) + "\n";
          }
          r.report["pointwise"] = pw;
          r.report["natural"]   = R.natural;
        }
        return r;
      }));

      auto* compact = app.add_subcommand("compact", "Bicompactness evidence");
      compact->require_subcommand(1);
      auto* cc = compact->add_subcommand(
          "check", "Compare colim Fun(K, F(-)) with Fun(K, colim F)");
      cc->add_option("category", a)->required();
      cc->add_option("diagram", b)->required();
      cc->callback(set([&](Session& s) {
        auto [ck, nk] = s.use(a);
        auto [cd, nd] = s.use(b);
        auto K        = ck->category(nk);
        auto F = bifiltered_restriction(cd->diagram(nd), diagram_sigma(*cd, nd));
        if (!F) {
          throw PreconditionError("the index of " + nd
                                  + " is neither bifiltered nor sigma-filtered");
        }
        auto R = check_bicompact_against(K, *F);
        auto r = from_verdict(R.verdict);
        r.report["scope"] = COMPACT_SCOPE;
        r.human += std::string("note: ") + COMPACT_SCOPE + "\n";
        return r;
      }));

      auto* lex = app.add_subcommand("lex", "Finite limits");
      lex->require_subcommand(1);
      auto* lc = lex->add_subcommand("check", "Does the category have finite limits");
      lc->add_option("fixture", a)->required();
      lc->callback(set([&](Session& s) {
        auto [c, n] = s.use(a);
        auto w      = finite_limit_witnesses(c->category(n));
        return from_verdict(
            w.complete() ? Verdict::positive("lex", {})
                         : Verdict::negative(
                               "lex", Counterexample{w.failure.value_or(""), {n},
                                                     "terminal, binary products, "
                                                     "equalizers"}));
      }));
      auto* lv = lex->add_subcommand("verify-colimit",
                                     "Finite limits in a bifiltered bicolimit");
      lv->add_option("fixture", a)->required();
      lv->callback(set([&](Session& s) {
        auto [c, n] = s.use(a);
        auto R      = verify_lex_bicolimit(c->diagram(n));
        auto r      = from_verdict(R.verdict);
        r.report["diagrams_checked"] = R.diagrams_checked;
        r.report["formula_failures"] = R.formula_failures;
        r.human += std::to_string(R.diagrams_checked) + " diagrams checked\n";
        return r;
      }));

      auto* vs = app.add_subcommand("verify-suite", "Replay every lemma on a corpus");
      vs->add_option("dir", a, "Corpus directory");
      vs->callback(set([&](Session& s) {
        auto&        c = s.corpus(a.empty() ? s.default_corpus() : a);
        SuiteOptions o;
        o.seed_order  = cli.seed;
        auto          rep = verify_suite(c, o);
        CommandResult r;
        r.code   = rep.ok() ? EXIT_POSITIVE : EXIT_NEGATIVE;
        r.report = rep.machine();
        r.human  = rep.human();
        return r;
      }));

      auto* rp = app.add_subcommand("replay", "Re-run an emitted replay file");
      rp->add_option("file", a)->required();
      rp->callback(set([&](Session&) { return run_replay(a); }));

      auto* man = app.add_subcommand("manifest", "Fixture content hashes");
      man->add_flag("--write", write, "Write the corpus manifest");
      man->callback(set([&](Session& s) {
        auto&         c = s.corpus(s.default_corpus());
        CommandResult r;
        r.report = c.manifest();
        if (write) {
          std::ofstream(c.directory() / MANIFEST_NAME) << r.report.dump(2) << "\n";
        }
        r.human = r.report.dump(2) + "\n";
        return r;
      }));

      auto* val = app.add_subcommand("validate", "Validate every fixture");
      val->add_option("dir", a, "Corpus directory");
      val->callback(set([&](Session& s) {
        auto& c = s.corpus(a.empty() ? s.default_corpus() : a);
        c.validate_all();
        CommandResult r;
        r.report = {{"fixtures", c.names().size()}, {"valid", true}};
        r.human  = std::to_string(c.names().size()) + " fixtures valid\n";
        return r;
      }));

      std::vector<std::string> reversed(args.rbegin(), args.rend());
      try {
        app.parse(reversed);
      } catch (CLI::ParseError const& e) {
        CommandResult r;
        r.code = e.get_exit_code() == 0 ? EXIT_POSITIVE : EXIT_INPUT;
        if (e.get_exit_code() == 0) {
          r.text = app.help();
        } else {
          r.text = std::string("error: ") + e.what() + "\n";
        }
        r.report = {{"error", e.what()}};
        return r;
      }
      Session session(cli.corpus);
      auto    result = cli.action(session);
      Json    full{{"command", strip_globals(args)},
                   {"fixtures", session.hashes()}};
      full.update(result.report);
      result.report = full;
      return result;
    }

    CommandResult input_error(std::string const& what) {
      CommandResult r;
      r.code   = EXIT_INPUT;
      r.report = {{"error", what}};
      r.text   = "error: " + what + "\n";
      return r;
    }

    CommandResult execute_impl(std::vector<std::string> const& args,
                               std::string*                    format) {
      Cli cli;
      try {
        auto r = dispatch(args, cli);
        if (format) {
          *format = cli.format;
        }
        if (!cli.emit.empty() && r.text.empty()) {
          auto kept = strip_globals(args);
          Json file{{"args", kept},
                    {"corpus", fs::absolute(cli.corpus).string()},
                    {"code", r.code},
                    {"report", r.report}};
          std::ofstream out(cli.emit);
          if (!out) {
            throw FixtureError(cli.emit, "cannot write replay file");
          }
          out << file.dump(2) << "\n";
        }
        return r;
      } catch (FixtureError const& e) {
        return input_error(e.what());
      } catch (ValidationError const& e) {
        return input_error(std::string("invalid: ") + e.what());
      } catch (PreconditionError const& e) {
        return input_error(std::string("precondition: ") + e.what());
      } catch (SizeLimitError const& e) {
        return input_error(std::string("size limit: ") + e.what());
      } catch (Json::exception const& e) {
        return input_error(std::string("malformed input: ") + e.what());
      } catch (std::exception const& e) {
        return input_error(e.what());
      }
    }

    // The positional words of a command line.
    std::vector<std::string> words(std::vector<std::string> const& args) {
      std::vector<std::string> out;
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--sigma") {
          ++i;
        } else if (args[i].rfind("--", 0) != 0) {
          out.push_back(args[i]);
        }
      }
      return out;
    }

    std::string option_value(std::vector<std::string> const& args,
                             std::string const&              name) {
      for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == name) {
          return args[i + 1];
        }
      }
      return {};
    }

    // Replays a recorded filteredness or flatness verdict from its
    // witnesses and counterexample; nullopt for other commands.
    std::optional<bool> replay_recorded(std::string const&              corpus,
                                        std::vector<std::string> const& args,
                                        Json const&                     verdict) {
      auto w = words(args);
      if (w.size() < 3) {
        return std::nullopt;
      }
      Session s(corpus);
      auto    v = verdict_from_json(verdict);
      if (w[0] == "check" && (w[1] == "bifiltered" || w[1] == "sigma-filtered")) {
        auto [c, n] = s.resolve(w[2]);
        auto I      = c->twocat(n);
        auto spec   = option_value(args, "--sigma");
        auto S      = w[1] == "bifiltered" ? SigmaClass::all(I)
                      : spec.empty()       ? c->sigma(n)
                                           : parse_sigma(s, I, spec);
        return replay_verdict(S, v);
      }
      if (w[0] == "flat" && w[1] == "check") {
        auto [c, n] = s.resolve(w[2]);
        auto E      = elements_dual(c->diagram(n));
        if (!v.outcome() && v.counterexample().condition == "nonempty") {
          return E.dual->num_zero_cells() == 0;
        }
        return replay_verdict(E.opcartesian, v);
      }
      return std::nullopt;
    }

    // Re-runs the recorded command against unchanged fixtures, requires
    // an identical report, and replays recorded verdicts where possible.
    CommandResult run_replay(std::string const& file) {
      std::ifstream in(file);
      if (!in) {
        throw FixtureError(file, "cannot read replay file");
      }
      Json rec  = Json::parse(in);
      auto args = rec.at("args").get<std::vector<std::string>>();
      std::vector<std::string> rerun{"--corpus",
                                     rec.at("corpus").get<std::string>()};
      rerun.insert(rerun.end(), args.begin(), args.end());
      auto again = execute_impl(rerun, nullptr);

      std::vector<std::string> problems;
      auto const&              before = rec.at("report");
      if (again.code == EXIT_INPUT) {
        problems.push_back("re-run failed: " + again.text);
      } else {
        if (again.report.at("fixtures") != before.at("fixtures")) {
          problems.push_back("fixture contents changed");
        }
        if (again.report != before) {
          problems.push_back("report differs");
        }
        if (before.contains("verdict")) {
          auto ok = replay_recorded(rec.at("corpus").get<std::string>(), args,
                                    before.at("verdict"));
          if (ok && !*ok) {
            problems.push_back("recorded verdict does not re-validate");
          }
        }
      }
      CommandResult r;
      r.code   = problems.empty() ? EXIT_POSITIVE : EXIT_NEGATIVE;
      r.report = {{"replayed", file}, {"problems", problems}};
      r.human  = problems.empty() ? "replay re-validates\n" : "";
      for (auto const& p : problems) {
        r.human += "replay: " + p + "\n";
      }
      return r;
    }

  }  // namespace

  CommandResult execute(std::vector<std::string> const& args) {
    return execute_impl(args, nullptr);
  }

  int run_command(std::vector<std::string> const& args,
                  std::ostream&                   out,
                  std::ostream&                   err) {
    std::string format = "human";
    auto        r      = execute_impl(args, &format);
    if (!r.text.empty()) {
      (r.code == EXIT_POSITIVE ? out : err) << r.text;
    } else if (format == "machine") {
      out << r.report.dump(2) << "\n";
    } else {
      out << r.human;
      if (!r.human.empty() && r.human.back() != '\n') {
        out << "\n";
      }
    }
    return r.code;
  }

}  // namespace sigmacat::io
