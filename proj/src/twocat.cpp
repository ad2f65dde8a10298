#include "sigmacat/twocat.hpp"

#include <algorithm>
#include <numeric>

namespace sigmacat {

  namespace {
    constexpr std::size_t MAX_REPORTED = 32;

    CatPtr const& shared_empty() {
      static CatPtr const empty
          = std::make_shared<FinCat const>(empty_category());
      return empty;
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // TwoCat
  ////////////////////////////////////////////////////////////////////////

  std::string const& TwoCat::one_name(one_t s) const {
    return hom(_one_src[s], _one_tgt[s])->object_name(local(s));
  }

  std::string const& TwoCat::two_name(two_t a) const {
    one_t s = _two_dom[a];
    return hom(_one_src[s], _one_tgt[s])->morphism_name(a - two_offset(s));
  }

  std::optional<zero_t> TwoCat::find_zero(std::string_view name) const {
    auto it = _zero_lookup.find(std::string(name));
    return it == _zero_lookup.end() ? std::nullopt
                                    : std::optional<zero_t>(it->second);
  }

  std::optional<one_t> TwoCat::find_one(std::string_view name) const {
    auto it = _one_lookup.find(std::string(name));
    return it == _one_lookup.end() ? std::nullopt
                                   : std::optional<one_t>(it->second);
  }

  std::optional<two_t> TwoCat::find_two(std::string_view name) const {
    auto it = _two_lookup.find(std::string(name));
    return it == _two_lookup.end() ? std::nullopt
                                   : std::optional<two_t>(it->second);
  }

  one_t TwoCat::comp(one_t t, one_t s) const {
    if (_one_tgt[s] != _one_src[t]) {
      return UNDEFINED;
    }
    auto it = _comp1.find(pair_key(t, s));
    return it == _comp1.end() ? UNDEFINED : it->second;
  }

  two_t TwoCat::id2(one_t s) const {
    return two_offset(s) + hom(_one_src[s], _one_tgt[s])->identity(local(s));
  }

  TwoCellRange TwoCat::two_cells(one_t s, one_t t) const {
    auto const& H = *hom(_one_src[s], _one_tgt[s]);
    return {H.hom(local(s), local(t)), two_offset(s)};
  }

  two_t TwoCat::vcomp(two_t b, two_t a) const {
    if (_two_cod[a] != _two_dom[b]) {
      return UNDEFINED;
    }
    one_t s   = _two_dom[a];
    two_t off = two_offset(s);
    return off + hom(_one_src[s], _one_tgt[s])->compose(b - off, a - off);
  }

  two_t TwoCat::hcomp(two_t b, two_t a) const {
    auto it = _comp2.find(pair_key(b, a));
    return it == _comp2.end() ? UNDEFINED : it->second;
  }

  bool TwoCat::is_invertible2(two_t a) const {
    one_t s = _two_dom[a];
    return hom(_one_src[s], _one_tgt[s])->is_iso(a - two_offset(s));
  }

  two_t TwoCat::inverse2(two_t a) const {
    one_t s   = _two_dom[a];
    two_t off = two_offset(s);
    mor_t inv = hom(_one_src[s], _one_tgt[s])->inverse(a - off);
    return inv == UNDEFINED ? UNDEFINED : off + inv;
  }

  two_t TwoCat::some_iso2(one_t s, one_t t) const {
    for (two_t a : two_cells(s, t)) {
      if (is_invertible2(a)) {
        return a;
      }
    }
    return UNDEFINED;
  }

  ////////////////////////////////////////////////////////////////////////
  // TwoCatBuilder
  ////////////////////////////////////////////////////////////////////////

  zero_t TwoCatBuilder::add_zero_cell(std::string name) {
    if (_prepared) {
      throw PreconditionError("add_zero_cell after prepare");
    }
    zero_t i = _cat._zero_names.size();
    if (!_cat._zero_lookup.emplace(name, i).second) {
      _errors.push_back("duplicate 0-cell identifier " + name);
    }
    _cat._zero_names.push_back(std::move(name));
    return i;
  }

  void TwoCatBuilder::set_hom(zero_t i, zero_t j, CatPtr hom) {
    if (_prepared) {
      throw PreconditionError("set_hom after prepare");
    }
    _pending[{i, j}] = std::move(hom);
  }

  void TwoCatBuilder::prepare() {
    TwoCat&     C = _cat;
    std::size_t n = C.num_zero_cells();
    C._hom.assign(n * n, shared_empty());
    for (auto& [ij, h] : _pending) {
      if (ij.first >= n || ij.second >= n) {
        throw PreconditionError("hom-category for an undeclared 0-cell");
      }
      C._hom[ij.first * n + ij.second] = h;
    }
    _pending.clear();
    C._one_offset.assign(n * n + 1, 0);
    C._two_offset.assign(n * n + 1, 0);
    for (std::size_t k = 0; k < n * n; ++k) {
      C._one_offset[k + 1] = C._one_offset[k] + C._hom[k]->num_objects();
      C._two_offset[k + 1] = C._two_offset[k] + C._hom[k]->num_morphisms();
    }
    for (zero_t i = 0; i < n; ++i) {
      for (zero_t j = 0; j < n; ++j) {
        auto const& H = *C._hom[i * n + j];
        for (obj_t x = 0; x < H.num_objects(); ++x) {
          one_t s = C._one_src.size();
          C._one_src.push_back(i);
          C._one_tgt.push_back(j);
          if (!C._one_lookup.emplace(H.object_name(x), s).second) {
            _errors.push_back("duplicate 1-cell identifier "
                              + H.object_name(x));
          }
        }
        one_t base = C._one_offset[i * n + j];
        for (mor_t f = 0; f < H.num_morphisms(); ++f) {
          two_t a = C._two_hom.size();
          C._two_hom.push_back(i * n + j);
          C._two_dom.push_back(base + H.dom(f));
          C._two_cod.push_back(base + H.cod(f));
          if (!C._two_lookup.emplace(H.morphism_name(f), a).second) {
            _errors.push_back("duplicate 2-cell identifier "
                              + H.morphism_name(f));
          }
        }
      }
    }
    C._unit.assign(n, UNDEFINED);
    _prepared = true;
  }

  void TwoCatBuilder::set_unit(zero_t i, one_t s) {
    if (_cat.src(s) != i || _cat.tgt(s) != i) {
      _errors.push_back("unit of " + _cat.zero_name(i)
                        + " is not an endo-1-cell");
      return;
    }
    _cat._unit[i] = s;
  }

  void TwoCatBuilder::set_comp1(one_t t, one_t s, one_t ts) {
    auto const& C = _cat;
    if (C.tgt(s) != C.src(t) || C.src(ts) != C.src(s)
        || C.tgt(ts) != C.tgt(t)) {
      _errors.push_back("ill-typed 1-cell composite " + C.one_name(t) + " o "
                        + C.one_name(s));
      return;
    }
    auto [it, ok] = _cat._comp1.emplace(pair_key(t, s), ts);
    if (!ok && it->second != ts) {
      _errors.push_back("conflicting 1-cell composites for " + C.one_name(t)
                        + " o " + C.one_name(s));
    }
  }

  void TwoCatBuilder::set_comp2(two_t b, two_t a, two_t ba) {
    auto const& C = _cat;
    one_t       t = C.dom2(b), s = C.dom2(a);
    if (C.tgt(s) != C.src(t)) {
      _errors.push_back("ill-typed 2-cell composite " + C.two_name(b) + " * "
                        + C.two_name(a));
      return;
    }
    auto [it, ok] = _cat._comp2.emplace(pair_key(b, a), ba);
    if (!ok && it->second != ba) {
      _errors.push_back("conflicting 2-cell composites for " + C.two_name(b)
                        + " * " + C.two_name(a));
    }
  }

  TwoCat TwoCatBuilder::build() {
    if (!_prepared) {
      prepare();
    }
    TwoCat& C      = _cat;
    auto    errors = _errors;
    auto    report = [&](std::string msg) {
      if (errors.size() < MAX_REPORTED) {
        errors.push_back(std::move(msg));
      }
    };
    std::size_t n = C.num_zero_cells();
    for (zero_t i = 0; i < n; ++i) {
      if (C._unit[i] == UNDEFINED) {
        report("0-cell " + C.zero_name(i) + " has no unit");
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    auto put1 = [&](one_t t, one_t s, one_t ts) {
      auto [it, ok] = C._comp1.emplace(pair_key(t, s), ts);
      if (!ok && it->second != ts) {
        report("unit law fails for 1-cells " + C.one_name(t) + " o "
               + C.one_name(s));
      }
    };
    auto put2 = [&](two_t b, two_t a, two_t ba) {
      auto [it, ok] = C._comp2.emplace(pair_key(b, a), ba);
      if (!ok && it->second != ba) {
        report("unit law fails for 2-cells " + C.two_name(b) + " * "
               + C.two_name(a));
      }
    };
    for (one_t s = 0; s < C.num_one_cells(); ++s) {
      put1(C.unit(C.tgt(s)), s, s);
      put1(s, C.unit(C.src(s)), s);
    }
    for (two_t a = 0; a < C.num_two_cells(); ++a) {
      one_t s = C.dom2(a);
      put2(C.id2(C.unit(C.tgt(s))), a, a);
      put2(a, C.id2(C.unit(C.src(s))), a);
    }
    // 1-cells: totality and associativity.
    for (zero_t i = 0; i < n; ++i) {
      for (zero_t j = 0; j < n; ++j) {
        for (zero_t k = 0; k < n; ++k) {
          for (one_t s : C.one_cells(i, j)) {
            for (one_t t : C.one_cells(j, k)) {
              if (C.comp(t, s) == UNDEFINED) {
                report("hcomp table missing 1-cell composite " + C.one_name(t)
                       + " o " + C.one_name(s));
              }
            }
          }
        }
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    for (zero_t i = 0; i < n; ++i) {
      for (zero_t j = 0; j < n; ++j) {
        for (zero_t k = 0; k < n; ++k) {
          for (zero_t l = 0; l < n; ++l) {
            for (one_t s : C.one_cells(i, j)) {
              for (one_t t : C.one_cells(j, k)) {
                one_t ts = C.comp(t, s);
                for (one_t u : C.one_cells(k, l)) {
                  if (C.comp(u, ts) != C.comp(C.comp(u, t), s)) {
                    report("associativity fails for 1-cells " + C.one_name(u)
                           + ", " + C.one_name(t) + ", " + C.one_name(s));
                  }
                }
              }
            }
          }
        }
      }
    }
    // 2-cells: identities compose to identities.
    for (zero_t i = 0; i < n; ++i) {
      for (zero_t j = 0; j < n; ++j) {
        for (zero_t k = 0; k < n; ++k) {
          for (one_t s : C.one_cells(i, j)) {
            for (one_t t : C.one_cells(j, k)) {
              put2(C.id2(t), C.id2(s), C.id2(C.comp(t, s)));
            }
          }
        }
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    // 2-cells: totality, typing, associativity, interchange.
    auto two_between = [&](zero_t i, zero_t j) {
      std::size_t k = i * n + j;
      return std::views::iota(C._two_offset[k], C._two_offset[k + 1]);
    };
    for (zero_t i = 0; i < n; ++i) {
      for (zero_t j = 0; j < n; ++j) {
        for (zero_t k = 0; k < n; ++k) {
          for (two_t a : two_between(i, j)) {
            for (two_t b : two_between(j, k)) {
              two_t ba = C.hcomp(b, a);
              if (ba == UNDEFINED) {
                report("hcomp table missing 2-cell composite " + C.two_name(b)
                       + " * " + C.two_name(a));
                continue;
              }
              if (C.dom2(ba) != C.comp(C.dom2(b), C.dom2(a))
                  || C.cod2(ba) != C.comp(C.cod2(b), C.cod2(a))) {
                report("2-cell composite " + C.two_name(b) + " * "
                       + C.two_name(a) + " has the wrong boundary");
              }
            }
          }
        }
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    for (zero_t i = 0; i < n; ++i) {
      for (zero_t j = 0; j < n; ++j) {
        for (zero_t k = 0; k < n; ++k) {
          for (two_t a : two_between(i, j)) {
            for (two_t b : two_between(j, k)) {
              two_t ba = C.hcomp(b, a);
              for (zero_t l = 0; l < n; ++l) {
                for (two_t c : two_between(k, l)) {
                  if (C.hcomp(c, ba) != C.hcomp(C.hcomp(c, b), a)) {
                    report("associativity fails for 2-cells " + C.two_name(c)
                           + ", " + C.two_name(b) + ", " + C.two_name(a));
                  }
                }
              }
              // Interchange against every vertical successor pair.
              auto const& Hij = *C.hom(i, j);
              auto const& Hjk = *C.hom(j, k);
              for (mor_t a2l : Hij.outgoing(C.local(C.cod2(a)))) {
                two_t a2 = C._two_offset[i * n + j] + a2l;
                for (mor_t b2l : Hjk.outgoing(C.local(C.cod2(b)))) {
                  two_t b2  = C._two_offset[j * n + k] + b2l;
                  two_t lhs = C.hcomp(C.vcomp(b2, b), C.vcomp(a2, a));
                  two_t rhs = C.vcomp(C.hcomp(b2, a2), ba);
                  if (lhs != rhs) {
                    report("interchange fails for " + C.two_name(b2) + ", "
                           + C.two_name(b) + ", " + C.two_name(a2) + ", "
                           + C.two_name(a));
                  }
                }
              }
            }
          }
        }
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    _errors.clear();
    return std::move(_cat);
  }

  TwoCat locally_discrete(FinCat const& C) {
    TwoCatBuilder b;
    std::size_t   n = C.num_objects();
    for (obj_t x = 0; x < n; ++x) {
      b.add_zero_cell(C.object_name(x));
    }
    for (obj_t x = 0; x < n; ++x) {
      for (obj_t y = 0; y < n; ++y) {
        FinCatBuilder h;
        for (mor_t f : C.hom(x, y)) {
          h.add_object_with_identity(C.morphism_name(f),
                                     "1_" + C.morphism_name(f));
        }
        b.set_hom(x, y, std::make_shared<FinCat const>(h.build()));
      }
    }
    b.prepare();
    auto const& cells = b.cells();
    auto        one   = [&](mor_t f) {
      return cells.global_one(C.dom(f), C.cod(f),
                              std::ranges::find(C.hom(C.dom(f), C.cod(f)), f)
                                  - C.hom(C.dom(f), C.cod(f)).begin());
    };
    for (obj_t x = 0; x < n; ++x) {
      b.set_unit(x, one(C.identity(x)));
    }
    for (mor_t f = 0; f < C.num_morphisms(); ++f) {
      for (mor_t g : C.outgoing(C.cod(f))) {
        b.set_comp1(one(g), one(f), one(C.compose(g, f)));
      }
    }
    return b.build();
  }

  TwoCat locally_preordered(LocallyPreorderedData const& data) {
    std::vector<std::string>                errors;
    std::unordered_map<std::string, zero_t> zero;
    std::size_t                             n = data.zero_cells.size();
    for (zero_t i = 0; i < n; ++i) {
      zero.emplace(data.zero_cells[i], i);
    }
    auto zero_of = [&](std::string const& name) -> zero_t {
      auto it = zero.find(name);
      if (it == zero.end()) {
        throw ValidationError("unknown 0-cell " + name);
      }
      return it->second;
    };
    std::vector<std::string> units(n);
    for (zero_t i = 0; i < n; ++i) {
      units[i] = i < data.units.size() ? data.units[i]
                                       : "1_" + data.zero_cells[i];
    }
    // 1-cells per hom, units first when implicit.
    std::vector<std::vector<std::string>>   cells(n * n);
    std::unordered_map<std::string, obj_t>  local;
    std::unordered_map<std::string, zero_t> hom_of;
    auto add_cell = [&](std::string const& name, zero_t i, zero_t j) {
      if (hom_of.contains(name)) {
        if (hom_of[name] != i * n + j) {
          errors.push_back("1-cell " + name + " declared twice");
        }
        return;
      }
      hom_of.emplace(name, i * n + j);
      local.emplace(name, cells[i * n + j].size());
      cells[i * n + j].push_back(name);
    };
    for (zero_t i = 0; i < n; ++i) {
      add_cell(units[i], i, i);
    }
    for (auto const& c : data.one_cells) {
      add_cell(c.name, zero_of(c.src), zero_of(c.tgt));
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    std::vector<std::vector<std::vector<bool>>> le(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
      std::size_t m = cells[k].size();
      le[k].assign(m, std::vector<bool>(m, false));
      for (std::size_t x = 0; x < m; ++x) {
        le[k][x][x] = true;
      }
    }
    for (auto const& [a, b] : data.two_cells) {
      if (!hom_of.contains(a) || !hom_of.contains(b)
          || hom_of[a] != hom_of[b]) {
        throw ValidationError("2-cell " + a + " => " + b
                              + " between non-parallel or unknown 1-cells");
      }
      le[hom_of[a]][local[a]][local[b]] = true;
    }
    TwoCatBuilder builder;
    for (auto const& z : data.zero_cells) {
      builder.add_zero_cell(z);
    }
    for (std::size_t k = 0; k < n * n; ++k) {
      auto&       R = le[k];
      std::size_t m = R.size();
      for (std::size_t z = 0; z < m; ++z) {
        for (std::size_t x = 0; x < m; ++x) {
          for (std::size_t y = 0; y < m; ++y) {
            R[x][y] = R[x][y] || (R[x][z] && R[z][y]);
          }
        }
      }
      FinCatBuilder h;
      for (auto const& name : cells[k]) {
        h.add_object(name);
      }
      std::vector<mor_t> arrow(m * m, UNDEFINED);
      for (obj_t x = 0; x < m; ++x) {
        for (obj_t y = 0; y < m; ++y) {
          if (R[x][y]) {
            arrow[x * m + y]
                = h.add_morphism(cells[k][x] + "=>" + cells[k][y], x, y);
          }
        }
      }
      for (obj_t x = 0; x < m; ++x) {
        h.set_identity(x, arrow[x * m + x]);
        for (obj_t y = 0; y < m; ++y) {
          for (obj_t z = 0; z < m; ++z) {
            if (R[x][y] && R[y][z]) {
              h.set_composite(arrow[y * m + z], arrow[x * m + y],
                              arrow[x * m + z]);
            }
          }
        }
      }
      builder.set_hom(k / n, k % n,
                      std::make_shared<FinCat const>(h.build(Check::structural)));
    }
    builder.prepare();
    auto const& C   = builder.cells();
    auto        one = [&](std::string const& name) -> one_t {
      auto r = C.find_one(name);
      if (!r) {
        throw ValidationError("unknown 1-cell " + name);
      }
      return *r;
    };
    for (zero_t i = 0; i < n; ++i) {
      builder.set_unit(i, one(units[i]));
    }
    std::unordered_map<std::uint64_t, one_t> comp;
    for (auto const& [t, s, ts] : data.composition) {
      builder.set_comp1(one(t), one(s), one(ts));
      comp.emplace(pair_key(one(t), one(s)), one(ts));
    }
    auto comp1 = [&](one_t t, one_t s) -> one_t {
      if (C.is_unit(t)) {
        return s;
      }
      if (C.is_unit(s)) {
        return t;
      }
      auto it = comp.find(pair_key(t, s));
      return it == comp.end() ? UNDEFINED : it->second;
    };
    for (two_t a : C.two_cells()) {
      for (two_t b : C.two_cells()) {
        if (C.src(C.dom2(b)) != C.tgt(C.dom2(a))) {
          continue;
        }
        one_t lo = comp1(C.dom2(b), C.dom2(a));
        one_t hi = comp1(C.cod2(b), C.cod2(a));
        if (lo == UNDEFINED || hi == UNDEFINED) {
          continue;
        }
        auto c = C.find_two(C.one_name(lo) + "=>" + C.one_name(hi));
        if (!c) {
          errors.push_back("2-cell relation is not compatible with "
                           "composition: "
                           + C.two_name(b) + " * " + C.two_name(a)
                           + " needs " + C.one_name(lo) + " => "
                           + C.one_name(hi));
          if (errors.size() >= MAX_REPORTED) {
            throw ValidationError(errors);
          }
          continue;
        }
        builder.set_comp2(b, a, *c);
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    return builder.build();
  }

  TwoCat dual_one_cells(TwoCat const& I) {
    TwoCatBuilder b;
    std::size_t   n = I.num_zero_cells();
    for (zero_t i = 0; i < n; ++i) {
      b.add_zero_cell(I.zero_name(i));
    }
    for (zero_t i = 0; i < n; ++i) {
      for (zero_t j = 0; j < n; ++j) {
        b.set_hom(i, j, I.hom(j, i));
      }
    }
    b.prepare();
    auto const& D   = b.cells();
    auto        one = [&](one_t s) {
      return D.global_one(I.tgt(s), I.src(s), I.local(s));
    };
    auto two = [&](two_t a) {
      one_t s = I.dom2(a);
      return D.id2(one(s)) + (a - I.id2(s));
    };
    for (zero_t i = 0; i < n; ++i) {
      b.set_unit(i, one(I.unit(i)));
    }
    for (one_t s : I.one_cells()) {
      for (zero_t k = 0; k < n; ++k) {
        for (one_t t : I.one_cells(I.tgt(s), k)) {
          // In the dual, s ∘ t becomes the composite of op-t after op-s.
          b.set_comp1(one(s), one(t), one(I.comp(t, s)));
        }
      }
    }
    for (two_t a : I.two_cells()) {
      one_t s = I.dom2(a);
      for (two_t c : I.two_cells()) {
        if (I.src(I.dom2(c)) == I.tgt(s)) {
          b.set_comp2(two(a), two(c), two(I.hcomp(c, a)));
        }
      }
    }
    return b.build();
  }

  ////////////////////////////////////////////////////////////////////////
  // SigmaClass
  ////////////////////////////////////////////////////////////////////////

  SigmaClass::SigmaClass(TwoCatPtr owner, std::vector<one_t> const& members)
      : _owner(std::move(owner)), _member(_owner->num_one_cells(), false) {
    for (one_t s : members) {
      if (s >= _member.size()) {
        throw ValidationError("Σ member is not a 1-cell of its owner");
      }
      _member[s] = true;
    }
  }

  SigmaClass SigmaClass::all(TwoCatPtr owner) {
    SigmaClass S(std::move(owner), {});
    S._member.assign(S._member.size(), true);
    return S;
  }

  SigmaClass SigmaClass::none(TwoCatPtr owner) {
    return SigmaClass(std::move(owner), {});
  }

  std::vector<one_t> SigmaClass::members() const {
    std::vector<one_t> out;
    for (one_t s = 0; s < _member.size(); ++s) {
      if (_member[s]) {
        out.push_back(s);
      }
    }
    return out;
  }

  std::size_t SigmaClass::size() const {
    return std::count(_member.begin(), _member.end(), true);
  }

  bool SigmaClass::subset_of(SigmaClass const& that) const {
    for (one_t s = 0; s < _member.size(); ++s) {
      if (_member[s] && !that._member[s]) {
        return false;
      }
    }
    return true;
  }

  SigmaClass sigma_closure(SigmaClass const& S) {
    SigmaClass  R = S;
    auto const& I = *S.owner();
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      R.insert(I.unit(i));
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (one_t s : R.members()) {
        // Rule 3: mates along invertible 2-cells.
        for (one_t d : I.one_cells(I.src(s), I.tgt(s))) {
          if (!R.contains(d) && I.some_iso2(d, s) != UNDEFINED) {
            R.insert(d);
            changed = true;
          }
        }
        // Rule 1: composites.
        for (zero_t k = 0; k < I.num_zero_cells(); ++k) {
          for (one_t t : I.one_cells(I.tgt(s), k)) {
            if (R.contains(t)) {
              one_t ts = I.comp(t, s);
              if (!R.contains(ts)) {
                R.insert(ts);
                changed = true;
              }
            }
          }
        }
      }
    }
    return R;
  }

  std::vector<one_t> internal_equivalences(TwoCat const& I) {
    std::vector<one_t> out;
    for (one_t f : I.one_cells()) {
      zero_t i = I.src(f), j = I.tgt(f);
      for (one_t g : I.one_cells(j, i)) {
        if (I.some_iso2(I.comp(g, f), I.unit(i)) != UNDEFINED
            && I.some_iso2(I.comp(f, g), I.unit(j)) != UNDEFINED) {
          out.push_back(f);
          break;
        }
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // TwoFunctor
  ////////////////////////////////////////////////////////////////////////

  TwoFunctor TwoFunctor::make(TwoCatPtr           source,
                              TwoCatPtr           target,
                              std::vector<zero_t> on0,
                              std::vector<one_t>  on1,
                              std::vector<two_t>  on2) {
    auto const&              I = *source;
    auto const&              J = *target;
    std::vector<std::string> errors;
    if (on0.size() != I.num_zero_cells() || on1.size() != I.num_one_cells()
        || on2.size() != I.num_two_cells()) {
      throw ValidationError("2-functor maps have the wrong size");
    }
    for (auto x : on0) {
      if (x >= J.num_zero_cells()) {
        throw ValidationError("2-functor 0-cell map leaves the target");
      }
    }
    for (auto x : on1) {
      if (x >= J.num_one_cells()) {
        throw ValidationError("2-functor 1-cell map leaves the target");
      }
    }
    for (auto x : on2) {
      if (x >= J.num_two_cells()) {
        throw ValidationError("2-functor 2-cell map leaves the target");
      }
    }
    for (one_t s : I.one_cells()) {
      if (J.src(on1[s]) != on0[I.src(s)] || J.tgt(on1[s]) != on0[I.tgt(s)]) {
        errors.push_back("2-functor does not preserve the boundary of "
                         + I.one_name(s));
      }
    }
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      if (on1[I.unit(i)] != J.unit(on0[i])) {
        errors.push_back("2-functor does not preserve the unit of "
                         + I.zero_name(i));
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    for (one_t s : I.one_cells()) {
      for (zero_t k = 0; k < I.num_zero_cells(); ++k) {
        for (one_t t : I.one_cells(I.tgt(s), k)) {
          if (on1[I.comp(t, s)] != J.comp(on1[t], on1[s])) {
            errors.push_back("2-functor does not preserve " + I.one_name(t)
                             + " o " + I.one_name(s));
          }
        }
      }
    }
    for (two_t a : I.two_cells()) {
      if (J.dom2(on2[a]) != on1[I.dom2(a)]
          || J.cod2(on2[a]) != on1[I.cod2(a)]) {
        errors.push_back("2-functor does not preserve the boundary of "
                         + I.two_name(a));
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    for (one_t s : I.one_cells()) {
      if (on2[I.id2(s)] != J.id2(on1[s])) {
        errors.push_back("2-functor does not preserve the identity 2-cell of "
                         + I.one_name(s));
      }
    }
    for (two_t a : I.two_cells()) {
      one_t s = I.dom2(a);
      for (two_t b : I.two_cells()) {
        if (I.dom2(b) == I.cod2(a)) {
          if (on2[I.vcomp(b, a)] != J.vcomp(on2[b], on2[a])) {
            errors.push_back("2-functor does not preserve "
                             + I.two_name(b) + " . " + I.two_name(a));
          }
        }
        if (I.src(I.dom2(b)) == I.tgt(s)) {
          if (on2[I.hcomp(b, a)] != J.hcomp(on2[b], on2[a])) {
            errors.push_back("2-functor does not preserve "
                             + I.two_name(b) + " * " + I.two_name(a));
          }
        }
        if (errors.size() > MAX_REPORTED) {
          throw ValidationError(errors);
        }
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    TwoFunctor F;
    F._source = std::move(source);
    F._target = std::move(target);
    F._on0    = std::move(on0);
    F._on1    = std::move(on1);
    F._on2    = std::move(on2);
    return F;
  }

  TwoFunctor TwoFunctor::identity(TwoCatPtr I) {
    std::vector<zero_t> on0(I->num_zero_cells());
    std::vector<one_t>  on1(I->num_one_cells());
    std::vector<two_t>  on2(I->num_two_cells());
    std::iota(on0.begin(), on0.end(), 0);
    std::iota(on1.begin(), on1.end(), 0);
    std::iota(on2.begin(), on2.end(), 0);
    return make(I, I, std::move(on0), std::move(on1), std::move(on2));
  }

  SigmaClass image(TwoFunctor const& F, SigmaClass const& S) {
    SigmaClass R = SigmaClass::none(F.target());
    for (one_t s : S.members()) {
      R.insert(F.on1(s));
    }
    return R;
  }

  SigmaSubcategory sigma_subcategory(SigmaClass const& S) {
    auto const&   I = *S.owner();
    std::size_t   n = I.num_zero_cells();
    TwoCatBuilder b;
    for (zero_t i = 0; i < n; ++i) {
      b.add_zero_cell(I.zero_name(i));
    }
    for (zero_t i = 0; i < n; ++i) {
      for (zero_t j = 0; j < n; ++j) {
        std::vector<obj_t> keep;
        for (one_t s : I.one_cells(i, j)) {
          if (S.contains(s)) {
            keep.push_back(I.local(s));
          }
        }
        b.set_hom(i, j, full_subcategory(I.hom(i, j), keep).category);
      }
    }
    b.prepare();
    auto const&        J = b.cells();
    std::vector<one_t> on1(J.num_one_cells());
    std::vector<two_t> on2(J.num_two_cells());
    for (one_t s = 0; s < J.num_one_cells(); ++s) {
      on1[s] = *I.find_one(J.one_name(s));
    }
    for (two_t a = 0; a < J.num_two_cells(); ++a) {
      on2[a] = *I.find_two(J.two_name(a));
    }
    auto one_back = [&](one_t s) -> one_t {
      auto r = J.find_one(I.one_name(s));
      if (!r) {
        throw PreconditionError("Σ is not closed: " + I.one_name(s)
                                + " is missing");
      }
      return *r;
    };
    for (zero_t i = 0; i < n; ++i) {
      b.set_unit(i, one_back(I.unit(i)));
    }
    for (one_t s = 0; s < J.num_one_cells(); ++s) {
      for (one_t t = 0; t < J.num_one_cells(); ++t) {
        if (J.tgt(s) == J.src(t)) {
          b.set_comp1(t, s, one_back(I.comp(on1[t], on1[s])));
        }
      }
    }
    for (two_t a = 0; a < J.num_two_cells(); ++a) {
      for (two_t c = 0; c < J.num_two_cells(); ++c) {
        if (J.tgt(J.dom2(a)) == J.src(J.dom2(c))) {
          b.set_comp2(c, a, *J.find_two(I.two_name(I.hcomp(on2[c], on2[a]))));
        }
      }
    }
    auto                Jp = std::make_shared<TwoCat const>(b.build());
    std::vector<zero_t> on0(n);
    std::iota(on0.begin(), on0.end(), 0);
    auto inc = TwoFunctor::make(Jp, S.owner(), std::move(on0), std::move(on1),
                                std::move(on2));
    return {Jp, std::move(inc)};
  }

}  // namespace sigmacat
