#include "sigmacat/fincat.hpp"

#include <algorithm>
#include <numeric>

namespace sigmacat {

  namespace {
    constexpr std::size_t MAX_REPORTED = 32;

    std::uint64_t key(mor_t g, mor_t f) {
      return (static_cast<std::uint64_t>(g) << 32) | f;
    }

    void group(std::size_t                       buckets,
               std::size_t                       n,
               auto&&                            bucket_of,
               std::vector<mor_t>&               index,
               std::vector<std::size_t>&         offset) {
      offset.assign(buckets + 1, 0);
      for (mor_t f = 0; f < n; ++f) {
        ++offset[bucket_of(f) + 1];
      }
      std::partial_sum(offset.begin(), offset.end(), offset.begin());
      index.assign(n, 0);
      std::vector<std::size_t> next(offset.begin(), offset.end() - 1);
      for (mor_t f = 0; f < n; ++f) {
        index[next[bucket_of(f)]++] = f;
      }
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // FinCat
  ////////////////////////////////////////////////////////////////////////

  std::optional<obj_t> FinCat::find_object(std::string_view name) const {
    auto it = _obj_lookup.find(std::string(name));
    if (it == _obj_lookup.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  std::optional<mor_t> FinCat::find_morphism(std::string_view name) const {
    auto it = _mor_lookup.find(std::string(name));
    if (it == _mor_lookup.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  mor_t FinCat::compose(mor_t g, mor_t f) const {
    if (_cod[f] != _dom[g]) {
      return UNDEFINED;
    }
    return _comp.at(key(g, f));
  }

  mor_t FinCat::compose_path(obj_t start, std::span<mor_t const> path) const {
    if (start >= num_objects()) {
      throw PreconditionError("compose_path: no such object");
    }
    mor_t result = _identity[start];
    for (mor_t f : path) {
      if (f >= num_morphisms() || _dom[f] != _cod[result]) {
        throw PreconditionError("compose_path: non-composable adjacency at "
                                + (f < num_morphisms() ? _mor_names[f]
                                                       : std::string("?")));
      }
      result = compose(f, result);
    }
    return result;
  }

  mor_t FinCat::some_iso(obj_t a, obj_t b) const {
    for (mor_t f : hom(a, b)) {
      if (is_iso(f)) {
        return f;
      }
    }
    return UNDEFINED;
  }

  bool FinCat::operator==(FinCat const& that) const {
    return _obj_names == that._obj_names && _mor_names == that._mor_names
           && _dom == that._dom && _cod == that._cod
           && _identity == that._identity && _comp == that._comp;
  }

  void FinCat::index() {
    std::size_t n = num_objects(), m = num_morphisms();
    group(
        n * n, m, [&](mor_t f) { return _dom[f] * n + _cod[f]; }, _hom_index,
        _hom_offset);
    group(
        n, m, [&](mor_t f) { return _cod[f]; }, _in_index, _in_offset);
    group(
        n, m, [&](mor_t f) { return _dom[f]; }, _out_index, _out_offset);
    // Group incoming/outgoing by the other endpoint for locality.
    std::stable_sort(_in_index.begin(), _in_index.end(), [&](mor_t f, mor_t g) {
      return std::pair(_cod[f], _dom[f]) < std::pair(_cod[g], _dom[g]);
    });
    std::stable_sort(
        _out_index.begin(), _out_index.end(), [&](mor_t f, mor_t g) {
          return std::pair(_dom[f], _cod[f]) < std::pair(_dom[g], _cod[g]);
        });
    _inverse.assign(m, UNDEFINED);
    for (mor_t f = 0; f < m; ++f) {
      for (mor_t g : hom(_cod[f], _dom[f])) {
        if (compose(g, f) == _identity[_dom[f]]
            && compose(f, g) == _identity[_cod[f]]) {
          _inverse[f] = g;
          break;
        }
      }
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // FinCatBuilder
  ////////////////////////////////////////////////////////////////////////

  obj_t FinCatBuilder::add_object(std::string name) {
    obj_t x = _cat._obj_names.size();
    if (!_cat._obj_lookup.emplace(name, x).second) {
      _errors.push_back("duplicate object identifier " + name);
    }
    _cat._obj_names.push_back(std::move(name));
    _cat._identity.push_back(UNDEFINED);
    return x;
  }

  mor_t FinCatBuilder::add_morphism(std::string name, obj_t dom, obj_t cod) {
    mor_t f = _cat._mor_names.size();
    if (!_cat._mor_lookup.emplace(name, f).second) {
      _errors.push_back("duplicate morphism identifier " + name);
    }
    if (dom >= num_objects() || cod >= num_objects()) {
      _errors.push_back("dangling dom/cod on morphism " + name);
      dom = cod = 0;
    }
    _cat._mor_names.push_back(std::move(name));
    _cat._dom.push_back(dom);
    _cat._cod.push_back(cod);
    return f;
  }

  obj_t FinCatBuilder::add_object_with_identity(std::string name,
                                                std::string id_name) {
    obj_t x = add_object(std::move(name));
    set_identity(x, add_morphism(std::move(id_name), x, x));
    return x;
  }

  void FinCatBuilder::set_identity(obj_t x, mor_t f) {
    if (_cat._dom[f] != x || _cat._cod[f] != x) {
      _errors.push_back("identity " + _cat._mor_names[f]
                        + " is not an endomorphism of "
                        + _cat._obj_names[x]);
      return;
    }
    _cat._identity[x] = f;
  }

  void FinCatBuilder::set_composite(mor_t g, mor_t f, mor_t gf) {
    auto const& c = _cat;
    if (c._cod[f] != c._dom[g]) {
      _errors.push_back("composite listed for non-composable pair "
                        + c._mor_names[g] + " o " + c._mor_names[f]);
      return;
    }
    if (c._dom[gf] != c._dom[f] || c._cod[gf] != c._cod[g]) {
      _errors.push_back("composite " + c._mor_names[g] + " o "
                        + c._mor_names[f] + " = " + c._mor_names[gf]
                        + " has wrong dom/cod");
      return;
    }
    auto [it, inserted] = _cat._comp.emplace(key(g, f), gf);
    if (!inserted && it->second != gf) {
      _errors.push_back("conflicting composites for " + c._mor_names[g]
                        + " o " + c._mor_names[f]);
    }
  }

  std::optional<obj_t> FinCatBuilder::find_object(std::string_view name) const {
    return _cat.find_object(name);
  }

  std::optional<mor_t>
  FinCatBuilder::find_morphism(std::string_view name) const {
    return _cat.find_morphism(name);
  }

  FinCat FinCatBuilder::build(Check level) {
    FinCat& C      = _cat;
    auto    errors = _errors;
    auto    report = [&](std::string msg) {
      if (errors.size() < MAX_REPORTED) {
        errors.push_back(std::move(msg));
      }
    };
    std::size_t n = C.num_objects(), m = C.num_morphisms();
    for (obj_t x = 0; x < n; ++x) {
      if (C._identity[x] == UNDEFINED) {
        report("object " + C._obj_names[x] + " has no identity");
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    // Identity composites are forced by the identity laws.
    for (mor_t f = 0; f < m; ++f) {
      for (auto [g, h] : {std::pair(C._identity[C._cod[f]], f),
                          std::pair(f, C._identity[C._dom[f]])}) {
        auto [it, inserted] = C._comp.emplace(key(g, h), f);
        if (!inserted && it->second != f) {
          report("identity law fails for " + C._mor_names[f]);
        }
      }
    }
    C.index();
    // Totality on composable pairs.
    for (obj_t b = 0; b < n; ++b) {
      for (mor_t f : C.incoming(b)) {
        for (mor_t g : C.outgoing(b)) {
          if (!C._comp.contains(key(g, f))) {
            report("composition not total: " + C._mor_names[g] + " o "
                   + C._mor_names[f] + " is missing");
          }
        }
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    if (level == Check::full) {
      for (obj_t b = 0; b < n && errors.empty(); ++b) {
        for (mor_t f : C.incoming(b)) {
          for (mor_t g : C.outgoing(b)) {
            mor_t gf = C.compose(g, f);
            for (mor_t h : C.outgoing(C._cod[g])) {
              if (C.compose(h, gf) != C.compose(C.compose(h, g), f)) {
                report("associativity fails for " + C._mor_names[h] + ", "
                       + C._mor_names[g] + ", " + C._mor_names[f]);
              }
            }
          }
        }
      }
      if (!errors.empty()) {
        throw ValidationError(errors);
      }
    }
    _errors.clear();
    return std::move(_cat);
  }

  FinCat validate_fincat(FinCatData const& data) {
    FinCatBuilder            b;
    std::vector<std::string> errors;
    for (auto const& x : data.objects) {
      b.add_object(x);
    }
    auto object = [&](std::string const& name) -> obj_t {
      auto x = b.find_object(name);
      if (!x) {
        errors.push_back("dangling dom/cod: unknown object " + name);
        return UNDEFINED;
      }
      return *x;
    };
    auto morphism = [&](std::string const& name) -> mor_t {
      auto f = b.find_morphism(name);
      if (!f) {
        errors.push_back("unknown morphism " + name);
        return UNDEFINED;
      }
      return *f;
    };
    for (auto const& f : data.morphisms) {
      obj_t d = object(f.dom), c = object(f.cod);
      if (d != UNDEFINED && c != UNDEFINED) {
        b.add_morphism(f.name, d, c);
      }
    }
    std::vector<bool> has_identity(data.objects.size(), false);
    for (auto const& [x, f] : data.identities) {
      obj_t xx = object(x);
      if (xx == UNDEFINED) {
        continue;
      }
      auto ff = b.find_morphism(f);
      mor_t id = ff ? *ff : b.add_morphism(f, xx, xx);
      b.set_identity(xx, id);
      has_identity[xx] = true;
    }
    if (data.identities.empty()) {
      for (obj_t x = 0; x < data.objects.size(); ++x) {
        std::string name = "1_" + data.objects[x];
        auto        ff   = b.find_morphism(name);
        b.set_identity(x, ff ? *ff : b.add_morphism(name, x, x));
        has_identity[x] = true;
      }
    }
    for (auto const& [g, f, gf] : data.composition) {
      mor_t gg = morphism(g), ff = morphism(f), gff = morphism(gf);
      if (gg != UNDEFINED && ff != UNDEFINED && gff != UNDEFINED) {
        b.set_composite(gg, ff, gff);
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    return b.build(Check::full);
  }

  FinCat terminal_category() {
    FinCatBuilder b;
    b.add_object_with_identity("*", "1_*");
    return b.build();
  }

  FinCat empty_category() {
    return FinCatBuilder().build();
  }

  FinCat discrete_category(std::size_t n) {
    FinCatBuilder b;
    for (std::size_t i = 0; i < n; ++i) {
      b.add_object_with_identity("x" + std::to_string(i),
                                 "1_x" + std::to_string(i));
    }
    return b.build();
  }

  ////////////////////////////////////////////////////////////////////////
  // Functor
  ////////////////////////////////////////////////////////////////////////

  bool same_category(CatPtr const& C, CatPtr const& D) {
    return C == D || (C && D && *C == *D);
  }

  Functor Functor::make(CatPtr             source,
                        CatPtr             target,
                        std::vector<obj_t> obj_map,
                        std::vector<mor_t> mor_map,
                        Check              level) {
    auto const& C = *source;
    auto const& D = *target;
    std::vector<std::string> errors;
    if (obj_map.size() != C.num_objects()
        || mor_map.size() != C.num_morphisms()) {
      throw ValidationError("functor maps have the wrong size");
    }
    for (obj_t x : obj_map) {
      if (x >= D.num_objects()) {
        throw ValidationError("functor object map leaves the target");
      }
    }
    for (mor_t f = 0; f < C.num_morphisms(); ++f) {
      mor_t Ff = mor_map[f];
      if (Ff >= D.num_morphisms()) {
        throw ValidationError("functor morphism map leaves the target");
      }
      if (D.dom(Ff) != obj_map[C.dom(f)] || D.cod(Ff) != obj_map[C.cod(f)]) {
        errors.push_back("functor does not preserve dom/cod of "
                         + C.morphism_name(f));
      }
    }
    for (obj_t x = 0; x < C.num_objects(); ++x) {
      if (mor_map[C.identity(x)] != D.identity(obj_map[x])) {
        errors.push_back("functor does not preserve the identity of "
                         + C.object_name(x));
      }
    }
    if (errors.empty() && level == Check::full) {
      for (obj_t b = 0; b < C.num_objects() && errors.size() < MAX_REPORTED;
           ++b) {
        for (mor_t f : C.incoming(b)) {
          for (mor_t g : C.outgoing(b)) {
            if (mor_map[C.compose(g, f)]
                != D.compose(mor_map[g], mor_map[f])) {
              errors.push_back("functor does not preserve composite "
                               + C.morphism_name(g) + " o "
                               + C.morphism_name(f));
            }
          }
        }
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    Functor F;
    F._source = std::move(source);
    F._target = std::move(target);
    F._obj    = std::move(obj_map);
    F._mor    = std::move(mor_map);
    return F;
  }

  Functor Functor::identity(CatPtr C) {
    std::vector<obj_t> obj(C->num_objects());
    std::vector<mor_t> mor(C->num_morphisms());
    std::iota(obj.begin(), obj.end(), 0);
    std::iota(mor.begin(), mor.end(), 0);
    return make(C, C, std::move(obj), std::move(mor), Check::structural);
  }

  Functor Functor::constant(CatPtr source, CatPtr target, obj_t x) {
    std::vector<obj_t> obj(source->num_objects(), x);
    std::vector<mor_t> mor(source->num_morphisms(), target->identity(x));
    return make(std::move(source),
                std::move(target),
                std::move(obj),
                std::move(mor),
                Check::structural);
  }

  bool Functor::operator==(Functor const& that) const {
    return _obj == that._obj && _mor == that._mor
           && same_category(_source, that._source)
           && same_category(_target, that._target);
  }

  Functor compose(Functor const& G, Functor const& F) {
    if (!same_category(F.target(), G.source())) {
      throw PreconditionError("compose: functors are not composable");
    }
    std::vector<obj_t> obj(F.obj_map().size());
    std::vector<mor_t> mor(F.mor_map().size());
    for (obj_t x = 0; x < obj.size(); ++x) {
      obj[x] = G(F(x));
    }
    for (mor_t f = 0; f < mor.size(); ++f) {
      mor[f] = G.map_morphism(F.map_morphism(f));
    }
    return Functor::make(
        F.source(), G.target(), std::move(obj), std::move(mor),
        Check::structural);
  }

  ////////////////////////////////////////////////////////////////////////
  // NatTrans
  ////////////////////////////////////////////////////////////////////////

  NatTrans NatTrans::make(Functor            source,
                          Functor            target,
                          std::vector<mor_t> components,
                          Check              level) {
    if (!same_category(source.source(), target.source())
        || !same_category(source.target(), target.target())) {
      throw ValidationError("natural transformation between non-parallel "
                            "functors");
    }
    auto const& C = *source.source();
    auto const& D = *source.target();
    if (components.size() != C.num_objects()) {
      throw ValidationError("natural transformation has the wrong number of "
                            "components");
    }
    std::vector<std::string> errors;
    bool                     invertible = true;
    for (obj_t x = 0; x < C.num_objects(); ++x) {
      mor_t a = components[x];
      if (a >= D.num_morphisms() || D.dom(a) != source(x)
          || D.cod(a) != target(x)) {
        throw ValidationError("component at " + C.object_name(x)
                              + " has the wrong type");
      }
      invertible = invertible && D.is_iso(a);
    }
    if (level == Check::full) {
      for (mor_t f = 0; f < C.num_morphisms(); ++f) {
        obj_t x = C.dom(f), y = C.cod(f);
        if (D.compose(target.map_morphism(f), components[x])
            != D.compose(components[y], source.map_morphism(f))) {
          errors.push_back("naturality square fails at "
                           + C.morphism_name(f));
          if (errors.size() >= MAX_REPORTED) {
            break;
          }
        }
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    NatTrans a;
    a._source     = std::move(source);
    a._target     = std::move(target);
    a._components = std::move(components);
    a._invertible = invertible;
    return a;
  }

  NatTrans NatTrans::identity(Functor const& F) {
    auto const&        D = *F.target();
    std::vector<mor_t> comps(F.obj_map().size());
    for (obj_t x = 0; x < comps.size(); ++x) {
      comps[x] = D.identity(F(x));
    }
    return make(F, F, std::move(comps), Check::structural);
  }

  bool NatTrans::is_identity() const {
    auto const& D = *_source.target();
    for (obj_t x = 0; x < _components.size(); ++x) {
      if (!D.is_identity(_components[x])) {
        return false;
      }
    }
    return _source == _target;
  }

  NatTrans NatTrans::inverse() const {
    if (!_invertible) {
      throw PreconditionError("natural transformation is not invertible");
    }
    auto const&        D = *_source.target();
    std::vector<mor_t> comps(_components.size());
    for (obj_t x = 0; x < comps.size(); ++x) {
      comps[x] = D.inverse(_components[x]);
    }
    return make(_target, _source, std::move(comps), Check::structural);
  }

  bool NatTrans::operator==(NatTrans const& that) const {
    return _components == that._components && _source == that._source
           && _target == that._target;
  }

  NatTrans vcompose(NatTrans const& beta, NatTrans const& alpha) {
    if (!(alpha.target() == beta.source())) {
      throw PreconditionError("vcompose: transformations are not composable");
    }
    auto const&        D = *alpha.source().target();
    std::vector<mor_t> comps(alpha.components().size());
    for (obj_t x = 0; x < comps.size(); ++x) {
      comps[x] = D.compose(beta[x], alpha[x]);
    }
    return NatTrans::make(
        alpha.source(), beta.target(), std::move(comps), Check::structural);
  }

  NatTrans whisker_left(Functor const& H, NatTrans const& alpha) {
    std::vector<mor_t> comps(alpha.components().size());
    for (obj_t x = 0; x < comps.size(); ++x) {
      comps[x] = H.map_morphism(alpha[x]);
    }
    return NatTrans::make(compose(H, alpha.source()),
                          compose(H, alpha.target()),
                          std::move(comps),
                          Check::structural);
  }

  NatTrans whisker_right(NatTrans const& alpha, Functor const& K) {
    std::vector<mor_t> comps(K.obj_map().size());
    for (obj_t x = 0; x < comps.size(); ++x) {
      comps[x] = alpha[K(x)];
    }
    return NatTrans::make(compose(alpha.source(), K),
                          compose(alpha.target(), K),
                          std::move(comps),
                          Check::structural);
  }

  NatTrans hcompose(NatTrans const& beta, NatTrans const& alpha) {
    // (β * α)_x = β_{G x} ∘ H(α_x).
    return vcompose(whisker_right(beta, alpha.target()),
                    whisker_left(beta.source(), alpha));
  }

}  // namespace sigmacat
