#include "sigmacat/fixture.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <sstream>

#include "sigmacat/errors.hpp"
#include "sigmacat/flat.hpp"

namespace sigmacat::io {

  namespace fs = std::filesystem;

  std::string sha256_hex(std::string const& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int  len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static char const* hex = "0123456789abcdef";
    std::string        out;
    for (unsigned int i = 0; i < len; ++i) {
      out += hex[digest[i] >> 4];
      out += hex[digest[i] & 0xf];
    }
    return out;
  }

  namespace {

    Json const& field(Json const& j, char const* key, std::string const& where) {
      if (!j.is_object() || !j.contains(key)) {
        throw FixtureError(where, std::string("missing field '") + key + "'");
      }
      return j.at(key);
    }

    std::string text(Json const& j, std::string const& where) {
      if (!j.is_string()) {
        throw FixtureError(where, "expected a string");
      }
      return j.get<std::string>();
    }

    std::vector<std::string> texts(Json const& j, std::string const& where) {
      if (!j.is_array()) {
        throw FixtureError(where, "expected an array of strings");
      }
      std::vector<std::string> out;
      for (auto const& x : j) {
        out.push_back(text(x, where));
      }
      return out;
    }

    template <std::size_t N>
    std::array<std::string, N> tuple(Json const& j, std::string const& where) {
      auto v = texts(j, where);
      if (v.size() != N) {
        throw FixtureError(where, "expected " + std::to_string(N) + " names");
      }
      std::array<std::string, N> out;
      std::copy(v.begin(), v.end(), out.begin());
      return out;
    }

    // Runs f, turning library validation errors into fixture errors.
    template <typename F>
    auto guarded(std::string const& where, F&& f) -> decltype(f()) {
      try {
        return f();
      } catch (FixtureError const&) {
        throw;
      } catch (std::exception const& e) {
        throw FixtureError(where, e.what());
      }
    }

    CatPtr parse_category(Json const& j, std::string const& where) {
      FinCatData d;
      d.objects = texts(field(j, "objects", where), where + ".objects");
      if (j.contains("morphisms")) {
        for (auto const& m : j.at("morphisms")) {
          auto t = tuple<3>(m, where + ".morphisms");
          d.morphisms.push_back({t[0], t[1], t[2]});
        }
      }
      if (j.contains("identities")) {
        for (auto const& m : j.at("identities")) {
          auto t = tuple<2>(m, where + ".identities");
          d.identities.emplace_back(t[0], t[1]);
        }
      }
      if (j.contains("composition")) {
        for (auto const& m : j.at("composition")) {
          d.composition.push_back(tuple<3>(m, where + ".composition"));
        }
      }
      return guarded(where, [&] {
        return std::make_shared<FinCat const>(validate_fincat(d));
      });
    }

    obj_t object_named(FinCat const& C, std::string const& n,
                       std::string const& where) {
      auto x = C.find_object(n);
      if (!x) {
        throw FixtureError(where, "unknown object '" + n + "'");
      }
      return *x;
    }

    mor_t morphism_named(FinCat const& C, std::string const& n,
                         std::string const& where) {
      auto x = C.find_morphism(n);
      if (!x) {
        throw FixtureError(where, "unknown morphism '" + n + "'");
      }
      return *x;
    }

    zero_t zero_named(TwoCat const& I, std::string const& n,
                      std::string const& where) {
      auto x = I.find_zero(n);
      if (!x) {
        throw FixtureError(where, "unknown 0-cell '" + n + "'");
      }
      return *x;
    }

    one_t one_named(TwoCat const& I, std::string const& n,
                    std::string const& where) {
      auto x = I.find_one(n);
      if (!x) {
        throw FixtureError(where, "unknown 1-cell '" + n + "'");
      }
      return *x;
    }

    two_t two_named(TwoCat const& I, std::string const& n,
                    std::string const& where) {
      auto x = I.find_two(n);
      if (!x) {
        throw FixtureError(where, "unknown 2-cell '" + n + "'");
      }
      return *x;
    }

  }  // namespace

  Functor functor_from_json(CatPtr const&      source,
                            CatPtr const&      target,
                            Json const&        spec,
                            std::string const& where) {
    auto const& S = *source;
    auto const& T = *target;
    if (spec.is_string() && spec.get<std::string>() == "identity") {
      return guarded(where, [&] { return Functor::identity(source); });
    }
    if (spec.is_object() && spec.contains("constant")) {
      auto x = object_named(T, text(spec.at("constant"), where), where);
      return Functor::constant(source, target, x);
    }
    std::vector<obj_t> obj(S.num_objects());
    std::vector<mor_t> mor(S.num_morphisms());
    auto const&        om = field(spec, "objects", where);
    for (obj_t x = 0; x < S.num_objects(); ++x) {
      auto const& n = S.object_name(x);
      if (!om.contains(n)) {
        throw FixtureError(where + ".objects", "object '" + n + "' unmapped");
      }
      obj[x] = object_named(T, text(om.at(n), where), where + ".objects");
    }
    Json mm = spec.contains("morphisms") ? spec.at("morphisms") : Json::object();
    for (mor_t m = 0; m < S.num_morphisms(); ++m) {
      auto const& n = S.morphism_name(m);
      if (mm.contains(n)) {
        mor[m] = morphism_named(T, text(mm.at(n), where), where + ".morphisms");
      } else if (S.is_identity(m)) {
        mor[m] = T.identity(obj[S.dom(m)]);
      } else {
        throw FixtureError(where + ".morphisms",
                           "morphism '" + n + "' unmapped");
      }
    }
    return guarded(where, [&] { return Functor::make(source, target, obj, mor); });
  }

  NatTrans nat_trans_from_json(Functor const&     source,
                               Functor const&     target,
                               Json const&        spec,
                               std::string const& where) {
    auto const&        S = *source.source();
    auto const&        T = *source.target();
    std::vector<mor_t> comps(S.num_objects());
    for (obj_t x = 0; x < S.num_objects(); ++x) {
      auto const& n = S.object_name(x);
      if (spec.is_object() && spec.contains(n)) {
        comps[x] = morphism_named(T, text(spec.at(n), where), where);
      } else if (source(x) == target(x)) {
        comps[x] = T.identity(source(x));
      } else {
        throw FixtureError(where, "component at '" + n + "' missing");
      }
    }
    return guarded(where, [&] { return NatTrans::make(source, target, comps); });
  }

  Corpus::Corpus(fs::path dir) : _dir(std::move(dir)) {
    if (!fs::is_directory(_dir)) {
      throw FixtureError(_dir.string(), "corpus directory not found");
    }
    for (auto const& e : fs::directory_iterator(_dir)) {
      if (e.is_regular_file() && e.path().extension() == FIXTURE_EXTENSION) {
        _files.emplace(e.path().stem().string(), e.path());
      }
    }
  }

  std::vector<std::string> Corpus::names() const {
    std::vector<std::string> out;
    for (auto const& [n, p] : _files) {
      out.push_back(n);
    }
    return out;
  }

  bool Corpus::contains(std::string const& name) const {
    return _files.count(name) > 0;
  }

  std::string Corpus::where(std::string const& name, std::string const& f) {
    auto it = _files.find(name);
    std::string p = it == _files.end() ? name : it->second.filename().string();
    return f.empty() ? p : p + ": " + f;
  }

  Fixture const& Corpus::fixture(std::string const& name) {
    if (auto it = _fixtures.find(name); it != _fixtures.end()) {
      return it->second;
    }
    auto it = _files.find(name);
    if (it == _files.end()) {
      throw FixtureError(name, "no such fixture in " + _dir.string());
    }
    std::ifstream in(it->second, std::ios::binary);
    if (!in) {
      throw FixtureError(where(name), "cannot read file");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Fixture f{name, {}, it->second, sha256_hex(buf.str()), {}};
    try {
      f.json = Json::parse(buf.str());
    } catch (Json::parse_error const& e) {
      throw FixtureError(where(name), std::string("malformed JSON: ") + e.what());
    }
    f.kind = text(field(f.json, "kind", where(name)), where(name, "kind"));
    return _fixtures.emplace(name, std::move(f)).first->second;
  }

  std::string Corpus::kind(std::string const& name) {
    return fixture(name).kind;
  }

  CatPtr Corpus::category_value(Json const& v, std::string const& w) {
    if (v.is_string()) {
      return category(v.get<std::string>());
    }
    return parse_category(v, w);
  }

  CatPtr Corpus::category(std::string const& name) {
    if (auto it = _cats.find(name); it != _cats.end()) {
      return it->second;
    }
    auto const& f = fixture(name);
    if (f.kind != "category") {
      throw FixtureError(where(name), "expected a category fixture, found '"
                                          + f.kind + "'");
    }
    auto C = parse_category(f.json, where(name));
    return _cats.emplace(name, C).first->second;
  }

  TwoCatPtr Corpus::twocat_value(Json const& v, std::string const& w) {
    if (v.is_string()) {
      return twocat(v.get<std::string>());
    }
    if (v.contains("locally_discrete")) {
      auto C = category_value(v.at("locally_discrete"), w + ".locally_discrete");
      return guarded(w, [&] {
        return std::make_shared<TwoCat const>(locally_discrete(*C));
      });
    }
    auto const&           j = field(v, "locally_preordered", w);
    std::string           lw = w + ".locally_preordered";
    LocallyPreorderedData d;
    d.zero_cells = texts(field(j, "zero_cells", lw), lw + ".zero_cells");
    if (j.contains("one_cells")) {
      for (auto const& x : j.at("one_cells")) {
        auto t = tuple<3>(x, lw + ".one_cells");
        d.one_cells.push_back({t[0], t[1], t[2]});
      }
    }
    if (j.contains("units")) {
      d.units = texts(j.at("units"), lw + ".units");
    }
    if (j.contains("composition")) {
      for (auto const& x : j.at("composition")) {
        d.composition.push_back(tuple<3>(x, lw + ".composition"));
      }
    }
    if (j.contains("two_cells")) {
      for (auto const& x : j.at("two_cells")) {
        auto t = tuple<2>(x, lw + ".two_cells");
        d.two_cells.emplace_back(t[0], t[1]);
      }
    }
    return guarded(w, [&] {
      return std::make_shared<TwoCat const>(locally_preordered(d));
    });
  }

  TwoCatPtr Corpus::twocat(std::string const& name) {
    if (auto it = _twocats.find(name); it != _twocats.end()) {
      return it->second;
    }
    auto const& f = fixture(name);
    if (f.kind != "twocat") {
      throw FixtureError(where(name), "expected a twocat fixture, found '"
                                          + f.kind + "'");
    }
    auto I = twocat_value(f.json, where(name));
    _twocats.emplace(name, I);
    if (f.json.contains("sigma")) {
      sigma(name);
    }
    return I;
  }

  bool Corpus::has_sigma(std::string const& name) {
    return fixture(name).json.contains("sigma");
  }

  SigmaClass Corpus::sigma(std::string const& name) {
    auto        I = twocat(name);
    auto const& j = fixture(name).json;
    if (!j.contains("sigma")) {
      return SigmaClass::all(I);
    }
    std::vector<one_t> members;
    for (auto const& n : texts(j.at("sigma"), where(name, "sigma"))) {
      members.push_back(one_named(*I, n, where(name, "sigma")));
    }
    return sigma_closure(SigmaClass(I, members));
  }

  CatPseudoFunctor Corpus::diagram_value(Json const& v, std::string const& w) {
    if (v.is_string()) {
      return diagram(v.get<std::string>());
    }
    auto        I  = twocat_value(field(v, "base", w), w + ".base");
    auto const& B  = *I;
    if (v.contains("constant")) {
      auto X = category_value(v.at("constant"), w + ".constant");
      return guarded(w, [&] { return constant_pseudofunctor(I, X); });
    }
    if (v.contains("representable")) {
      auto c = zero_named(B, text(v.at("representable"), w), w + ".representable");
      return guarded(w, [&] { return representable_pseudofunctor(I, c); });
    }
    CatPseudoFunctor::Data d;
    d.base = I;
    auto const& on0 = field(v, "on0", w);
    for (zero_t i = 0; i < B.num_zero_cells(); ++i) {
      auto const& n = B.zero_name(i);
      if (!on0.contains(n)) {
        throw FixtureError(w + ".on0", "0-cell '" + n + "' unmapped");
      }
      d.on0.push_back(category_value(on0.at(n), w + ".on0." + n));
    }
    Json on1 = v.contains("on1") ? v.at("on1") : Json::object();
    for (one_t s : B.one_cells()) {
      auto const& n  = B.one_name(s);
      auto const& X  = d.on0[B.src(s)];
      auto const& Y  = d.on0[B.tgt(s)];
      if (on1.contains(n)) {
        d.on1.push_back(functor_from_json(X, Y, on1.at(n), w + ".on1." + n));
      } else if (B.is_unit(s)) {
        d.on1.push_back(Functor::identity(X));
      } else {
        throw FixtureError(w + ".on1", "1-cell '" + n + "' unmapped");
      }
    }
    Json on2 = v.contains("on2") ? v.at("on2") : Json::object();
    for (two_t a : B.two_cells()) {
      auto const& n = B.two_name(a);
      auto const& P = d.on1[B.dom2(a)];
      auto const& Q = d.on1[B.cod2(a)];
      if (on2.contains(n)) {
        d.on2.push_back(nat_trans_from_json(P, Q, on2.at(n), w + ".on2." + n));
      } else if (B.is_id2(a)) {
        d.on2.push_back(NatTrans::identity(P));
      } else {
        throw FixtureError(w + ".on2", "2-cell '" + n + "' unmapped");
      }
    }
    if (v.contains("unit_iso")) {
      for (auto const& [n, comps] : v.at("unit_iso").items()) {
        std::string cw = w + ".unit_iso." + n;
        zero_t      i  = zero_named(B, n, cw);
        auto const& X  = *d.on0[i];
        std::vector<mor_t> cs(X.num_objects());
        for (obj_t x = 0; x < X.num_objects(); ++x) {
          cs[x] = morphism_named(
              X, text(field(comps, X.object_name(x).c_str(), cw), cw), cw);
        }
        d.unit_iso[i] = cs;
      }
    }
    if (v.contains("comp_iso")) {
      for (auto const& e : v.at("comp_iso")) {
        std::string cw = w + ".comp_iso";
        one_t t = one_named(B, text(field(e, "outer", cw), cw), cw);
        one_t s = one_named(B, text(field(e, "inner", cw), cw), cw);
        auto const& X  = *d.on0[B.src(s)];
        auto const& Z  = *d.on0[B.tgt(t)];
        auto const& cj = field(e, "components", cw);
        std::vector<mor_t> cs(X.num_objects());
        for (obj_t x = 0; x < X.num_objects(); ++x) {
          cs[x] = morphism_named(
              Z, text(field(cj, X.object_name(x).c_str(), cw), cw), cw);
        }
        d.comp_iso[pair_key(t, s)] = cs;
      }
    }
    return guarded(w, [&] { return CatPseudoFunctor::make(std::move(d)); });
  }

  CatPseudoFunctor Corpus::diagram(std::string const& name) {
    if (auto it = _diagrams.find(name); it != _diagrams.end()) {
      return it->second;
    }
    auto const& f = fixture(name);
    if (f.kind != "diagram") {
      throw FixtureError(where(name), "expected a diagram fixture, found '"
                                          + f.kind + "'");
    }
    auto F = diagram_value(f.json, where(name));
    return _diagrams.emplace(name, F).first->second;
  }

  std::vector<std::string> Corpus::tags(std::string const& name) {
    auto const& j = fixture(name).json;
    return j.contains("tags") ? texts(j.at("tags"), where(name, "tags"))
                              : std::vector<std::string>{};
  }

  Pseudoidempotent Corpus::pseudoidempotent(std::string const& name) {
    auto const& f = fixture(name);
    auto        w = where(name);
    if (f.kind != "pseudoidempotent") {
      throw FixtureError(w, "expected a pseudoidempotent fixture");
    }
    auto X  = category_value(field(f.json, "carrier", w), w + ".carrier");
    auto e  = functor_from_json(X, X, field(f.json, "endo", w), w + ".endo");
    auto mu = nat_trans_from_json(compose(e, e), e, field(f.json, "mult", w),
                                  w + ".mult");
    return guarded(w, [&] { return Pseudoidempotent::make(e, mu); });
  }

  CofinalMap Corpus::cofinal_map(std::string const& name) {
    auto const& f = fixture(name);
    auto        w = where(name);
    if (f.kind != "cofinal_map") {
      throw FixtureError(w, "expected a cofinal_map fixture");
    }
    auto sname = text(field(f.json, "source", w), w + ".source");
    auto tname = text(field(f.json, "target", w), w + ".target");
    auto I     = twocat(sname);
    auto J     = twocat(tname);
    std::vector<zero_t> on0;
    std::vector<one_t>  on1;
    std::vector<two_t>  on2;
    auto const&         j0 = field(f.json, "on0", w);
    for (zero_t i = 0; i < I->num_zero_cells(); ++i) {
      auto const& n = I->zero_name(i);
      if (!j0.contains(n)) {
        throw FixtureError(w + ".on0", "0-cell '" + n + "' unmapped");
      }
      on0.push_back(zero_named(*J, text(j0.at(n), w), w + ".on0"));
    }
    Json j1 = f.json.contains("on1") ? f.json.at("on1") : Json::object();
    for (one_t s : I->one_cells()) {
      auto const& n = I->one_name(s);
      if (j1.contains(n)) {
        on1.push_back(one_named(*J, text(j1.at(n), w), w + ".on1"));
      } else if (I->is_unit(s)) {
        on1.push_back(J->unit(on0[I->src(s)]));
      } else {
        throw FixtureError(w + ".on1", "1-cell '" + n + "' unmapped");
      }
    }
    Json j2 = f.json.contains("on2") ? f.json.at("on2") : Json::object();
    for (two_t a : I->two_cells()) {
      auto const& n = I->two_name(a);
      if (j2.contains(n)) {
        on2.push_back(two_named(*J, text(j2.at(n), w), w + ".on2"));
      } else if (I->is_id2(a)) {
        on2.push_back(J->id2(on1[I->dom2(a)]));
      } else {
        throw FixtureError(w + ".on2", "2-cell '" + n + "' unmapped");
      }
    }
    auto F = guarded(w, [&] { return TwoFunctor::make(I, J, on0, on1, on2); });
    std::optional<std::string> d;
    if (f.json.contains("diagram")) {
      d = text(f.json.at("diagram"), w + ".diagram");
      if (!(diagram(*d).base() == J)) {
        throw FixtureError(w + ".diagram", "the diagram is not over the target");
      }
    }
    return {F, sigma(sname), sigma(tname), d};
  }

  CommutationSpec Corpus::commutation(std::string const& name) {
    auto const& f = fixture(name);
    auto        w = where(name);
    if (f.kind != "commutation") {
      throw FixtureError(w, "expected a commutation fixture");
    }
    CommutationSpec out;
    out.shape = text(field(f.json, "shape", w), w + ".shape");
    if (out.shape == "arrow-cotensor") {
      out.left = diagram_value(field(f.json, "diagram", w), w + ".diagram");
      return out;
    }
    if (out.shape != "biproduct" && out.shape != "biequalizer") {
      throw FixtureError(w + ".shape", "unknown shape '" + out.shape + "'");
    }
    out.left  = diagram_value(field(f.json, "left", w), w + ".left");
    out.right = diagram_value(field(f.json, "right", w), w + ".right");
    if (out.left.base() != out.right.base()) {
      throw FixtureError(w, "left and right must share one base fixture");
    }
    if (out.shape == "biequalizer") {
      auto const& B = *out.left.base();
      for (char const* key : {"P", "Q"}) {
        auto const& jm = field(f.json, key, w);
        auto&       v  = key[0] == 'P' ? out.P : out.Q;
        for (zero_t i = 0; i < B.num_zero_cells(); ++i) {
          std::string kw = w + "." + key + "." + B.zero_name(i);
          v.push_back(functor_from_json(out.left.on0(i), out.right.on0(i),
                                        field(jm, B.zero_name(i).c_str(), kw),
                                        kw));
        }
      }
    }
    return out;
  }

  Json Corpus::manifest() {
    Json m = Json::object();
    for (auto const& n : names()) {
      m[n] = fixture(n).sha256;
    }
    return Json{{"fixtures", m}};
  }

  void Corpus::validate_all() {
    for (auto const& n : names()) {
      auto k = kind(n);
      if (k == "category") {
        category(n);
      } else if (k == "twocat") {
        twocat(n);
      } else if (k == "diagram") {
        diagram(n);
      } else if (k == "pseudoidempotent") {
        pseudoidempotent(n);
      } else if (k == "cofinal_map") {
        cofinal_map(n);
      } else if (k == "commutation") {
        commutation(n);
      } else {
        throw FixtureError(where(n, "kind"), "unknown kind '" + k + "'");
      }
    }
    auto path = _dir / MANIFEST_NAME;
    if (!fs::exists(path)) {
      return;
    }
    Json listed;
    try {
      std::ifstream in(path);
      listed = Json::parse(in);
    } catch (Json::parse_error const& e) {
      throw FixtureError(MANIFEST_NAME, std::string("malformed JSON: ") + e.what());
    }
    auto actual = manifest();
    for (auto const& [n, h] : actual["fixtures"].items()) {
      if (!listed["fixtures"].contains(n)) {
        throw FixtureError(MANIFEST_NAME, "fixture '" + n + "' not listed");
      }
      if (listed["fixtures"][n] != h) {
        throw FixtureError(MANIFEST_NAME, "hash mismatch for '" + n + "'");
      }
    }
    for (auto const& [n, h] : listed["fixtures"].items()) {
      if (!contains(n)) {
        throw FixtureError(MANIFEST_NAME, "listed fixture '" + n + "' missing");
      }
    }
  }

  Json verdict_json(Verdict const& v) {
    Json j{{"subject", v.subject()},
           {"outcome", v.outcome() ? "positive" : "negative"},
           {"stats",
            {{"instances", v.stats().instances},
             {"candidates", v.stats().candidates}}}};
    if (v.outcome()) {
      Json ws = Json::array();
      for (auto const& w : v.witnesses()) {
        ws.push_back({{"condition", w.condition},
                      {"instance", w.instance},
                      {"data", w.data}});
      }
      j["witnesses"] = ws;
    } else {
      auto const& c       = v.counterexample();
      j["counterexample"] = {{"condition", c.condition},
                             {"instance", c.instance},
                             {"search_space", c.search_space}};
    }
    if (!v.parts().empty()) {
      Json ps = Json::array();
      for (auto const& p : v.parts()) {
        ps.push_back(verdict_json(p));
      }
      j["parts"] = ps;
    }
    if (!v.notes().empty()) {
      j["notes"] = v.notes();
    }
    return j;
  }

  SigmaClass diagram_sigma(Corpus& corpus, std::string const& diagram) {
    auto const& j = corpus.fixture(diagram).json;
    if (j.contains("base") && j.at("base").is_string()) {
      return corpus.sigma(j.at("base").get<std::string>());
    }
    return SigmaClass::all(corpus.diagram(diagram).base());
  }

}  // namespace sigmacat::io
