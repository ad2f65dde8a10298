#include "sigmacat/filtered.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace sigmacat {

  namespace {

    // Deterministic candidate orders: preferred apexes first, then
    // declaration order; within a hom, the unit first.
    class Engine {
     public:
      Engine(TwoCat const& I, std::vector<bool> in)
          : _I(I), _in(std::move(in)) {}

      TwoCat const& cat() const {
        return _I;
      }
      bool in(one_t s) const {
        return _in[s];
      }

      std::vector<zero_t> apexes(std::vector<zero_t> preferred) const {
        std::vector<zero_t> out;
        for (zero_t k : preferred) {
          if (std::find(out.begin(), out.end(), k) == out.end()) {
            out.push_back(k);
          }
        }
        for (zero_t k = 0; k < _I.num_zero_cells(); ++k) {
          if (std::find(out.begin(), out.end(), k) == out.end()) {
            out.push_back(k);
          }
        }
        return out;
      }

      std::vector<one_t> sigma_cells(zero_t i, zero_t k) const {
        std::vector<one_t> out;
        if (i == k && in(_I.unit(i))) {
          out.push_back(_I.unit(i));
        }
        for (one_t s : _I.one_cells(i, k)) {
          if (in(s) && !(i == k && s == _I.unit(i))) {
            out.push_back(s);
          }
        }
        return out;
      }

      std::optional<std::pair<one_t, one_t>> span(zero_t        i,
                                                  zero_t        i2,
                                                  std::size_t& tried) const {
        for (zero_t k : apexes({i2, i})) {
          auto left  = sigma_cells(i, k);
          auto right = sigma_cells(i2, k);
          tried += left.size() * right.size();
          if (!left.empty() && !right.empty()) {
            return std::pair{left.front(), right.front()};
          }
        }
        return std::nullopt;
      }

      // t in Σ out of the common target and α: t d ⇒ t s.
      std::optional<std::pair<one_t, two_t>> insertion(
          one_t d, one_t s, bool invertible, std::size_t& tried) const {
        zero_t j = _I.tgt(d);
        for (zero_t k : apexes({j})) {
          for (one_t t : sigma_cells(j, k)) {
            for (two_t a : _I.two_cells(_I.comp(t, d), _I.comp(t, s))) {
              ++tried;
              if (!invertible || _I.is_invertible2(a)) {
                return std::pair{t, a};
              }
            }
          }
        }
        return std::nullopt;
      }

      std::optional<one_t> equify(two_t a, two_t b, std::size_t& tried) const {
        zero_t j = _I.tgt(_I.dom2(a));
        for (zero_t k : apexes({j})) {
          for (one_t f : sigma_cells(j, k)) {
            ++tried;
            if (_I.lwhisker(f, a) == _I.lwhisker(f, b)) {
              return f;
            }
          }
        }
        return std::nullopt;
      }

      std::optional<std::vector<one_t>> family(std::vector<zero_t> const& xs,
                                               std::size_t& tried) const {
        for (zero_t k : apexes({})) {
          std::vector<one_t> legs;
          for (zero_t x : xs) {
            auto c = sigma_cells(x, k);
            ++tried;
            if (c.empty()) {
              break;
            }
            legs.push_back(c.front());
          }
          if (legs.size() == xs.size()) {
            legs.insert(legs.begin(), k);
            return legs;
          }
        }
        return std::nullopt;
      }

     private:
      TwoCat const&     _I;
      std::vector<bool> _in;
    };

    // Accumulates the instances of one condition.
    class Part {
     public:
      explicit Part(std::string condition) : _condition(std::move(condition)) {}

      void witness(std::vector<std::string> instance,
                   std::vector<std::string> data) {
        ++_stats.instances;
        _witnesses.push_back({_condition, std::move(instance), std::move(data)});
      }
      void fail(std::vector<std::string> instance, std::string space) {
        ++_stats.instances;
        if (!_counter) {
          _counter = Counterexample{_condition, std::move(instance),
                                    std::move(space)};
        }
      }
      bool failed() const {
        return _counter.has_value();
      }
      void tried(std::size_t n) {
        _stats.candidates += n;
      }
      Verdict finish() && {
        if (_counter) {
          return Verdict::negative(_condition, std::move(*_counter), _stats);
        }
        return Verdict::positive(_condition, std::move(_witnesses), _stats);
      }

     private:
      std::string                   _condition;
      std::vector<Witness>          _witnesses;
      std::optional<Counterexample> _counter;
      SearchStats                   _stats;
    };

    std::string candidates(std::size_t n, char const* what) {
      return std::to_string(n) + " candidate " + what + " exhausted";
    }

    std::vector<bool> all_cells(TwoCat const& I) {
      return std::vector<bool>(I.num_one_cells(), true);
    }

    std::vector<bool> members(SigmaClass const& S) {
      std::vector<bool> in(S.owner()->num_one_cells());
      for (one_t s : S.members()) {
        in[s] = true;
      }
      return in;
    }

    void require_nonempty(TwoCat const& I) {
      if (I.num_zero_cells() == 0) {
        throw PreconditionError("the index 2-category has no 0-cells");
      }
    }

    Verdict spans(Engine const& E) {
      auto const& I = E.cat();
      Part        p(cond::span);
      for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
        for (zero_t i2 = i; i2 < I.num_zero_cells(); ++i2) {
          std::size_t tried = 0;
          auto        w     = E.span(i, i2, tried);
          p.tried(tried);
          if (w) {
            p.witness({I.zero_name(i), I.zero_name(i2)},
                      {I.one_name(w->first), I.one_name(w->second)});
          } else {
            p.fail({I.zero_name(i), I.zero_name(i2)},
                   candidates(tried, "spans"));
          }
        }
      }
      return std::move(p).finish();
    }

    Verdict families(Engine const& E, std::size_t m) {
      auto const& I = E.cat();
      std::size_t n = I.num_zero_cells();
      m             = std::min(m, n);
      Part                p(cond::family);
      std::vector<zero_t> xs(m);
      std::function<void(std::size_t, zero_t)> rec = [&](std::size_t pos,
                                                         zero_t start) {
        if (pos == m) {
          std::vector<std::string> inst;
          for (zero_t x : xs) {
            inst.push_back(I.zero_name(x));
          }
          std::size_t tried = 0;
          auto        w     = E.family(xs, tried);
          p.tried(tried);
          if (w) {
            std::vector<std::string> data{I.zero_name((*w)[0])};
            for (std::size_t k = 1; k < w->size(); ++k) {
              data.push_back(I.one_name((*w)[k]));
            }
            p.witness(std::move(inst), std::move(data));
          } else {
            p.fail(std::move(inst), candidates(tried, "cocones"));
          }
          return;
        }
        for (zero_t x = start; x < n; ++x) {
          xs[pos] = x;
          rec(pos + 1, x + 1);
        }
      };
      rec(0, 0);
      return std::move(p).finish();
    }

    // Ordered pairs (d, s) with s in Σ, d ≠ s; with `both`, d in Σ as
    // well, and `unordered` restricts to d < s.
    Verdict insertions(Engine const& E,
                       char const*   name,
                       bool          both,
                       bool          unordered,
                       bool          invertible) {
      auto const& I = E.cat();
      Part        p(name);
      for (one_t d : I.one_cells()) {
        if (both && !E.in(d)) {
          continue;
        }
        for (one_t s : I.one_cells(I.src(d), I.tgt(d))) {
          if (s == d || !E.in(s) || (unordered && s < d)) {
            continue;
          }
          std::size_t tried = 0;
          auto        w     = E.insertion(d, s, invertible, tried);
          p.tried(tried);
          if (w) {
            p.witness({I.one_name(d), I.one_name(s)},
                      {I.one_name(w->first), I.two_name(w->second)});
          } else {
            p.fail({I.one_name(d), I.one_name(s)},
                   candidates(tried, invertible ? "invertible insertions"
                                                : "insertions"));
          }
        }
      }
      return std::move(p).finish();
    }

    Verdict equifications(Engine const& E) {
      auto const& I = E.cat();
      Part        p(cond::equification);
      for (two_t a : I.two_cells()) {
        one_t d = I.dom2(a), s = I.cod2(a);
        if (!E.in(s)) {
          continue;
        }
        for (two_t b : I.two_cells(d, s)) {
          if (b <= a) {
            continue;
          }
          std::size_t tried = 0;
          auto        w     = E.equify(a, b, tried);
          p.tried(tried);
          if (w) {
            p.witness({I.two_name(a), I.two_name(b)}, {I.one_name(*w)});
          } else {
            p.fail({I.two_name(a), I.two_name(b)},
                   candidates(tried, "equifying 1-cells"));
          }
        }
      }
      return std::move(p).finish();
    }

    Verdict combine(std::string subject, std::vector<Verdict> parts) {
      auto v = Verdict::positive(std::move(subject), {});
      for (auto& p : parts) {
        v.add_part(std::move(p));
      }
      return v;
    }

  }  // namespace

  Verdict check_bifiltered(TwoCat const& I) {
    require_nonempty(I);
    Engine E(I, all_cells(I));
    return combine("bifiltered",
                   {spans(E),
                    insertions(E, cond::invertible_insertion, true, true, true),
                    equifications(E)});
  }

  Verdict check_sigma_filtered(SigmaClass const&      S,
                               FilteredOptions const& options) {
    auto const& I = *S.owner();
    require_nonempty(I);
    Engine               E(I, members(S));
    std::vector<Verdict> parts{spans(E)};
    if (options.family_size > 2) {
      parts.push_back(families(E, options.family_size));
    }
    parts.push_back(insertions(E, cond::insertion, false, false, false));
    parts.push_back(
        insertions(E, cond::invertible_insertion, true, false, true));
    parts.push_back(equifications(E));
    return combine("sigma-filtered", std::move(parts));
  }

  std::optional<std::pair<one_t, one_t>> find_span(SigmaClass const& S,
                                                   zero_t            i,
                                                   zero_t            j) {
    std::size_t tried = 0;
    return Engine(*S.owner(), members(S)).span(i, j, tried);
  }

  std::optional<std::pair<one_t, two_t>> find_insertion(SigmaClass const& S,
                                                        one_t             d,
                                                        one_t             s,
                                                        bool invertible) {
    std::size_t tried = 0;
    return Engine(*S.owner(), members(S)).insertion(d, s, invertible, tried);
  }

  std::optional<one_t> find_equifier(SigmaClass const& S, two_t a, two_t b) {
    std::size_t tried = 0;
    return Engine(*S.owner(), members(S)).equify(a, b, tried);
  }

  ////////////////////////////////////////////////////////////////////////
  // Triangle
  ////////////////////////////////////////////////////////////////////////

  Triangle triangle_completion(SigmaClass const& S, one_t d) {
    auto const& I = *S.owner();
    Engine      E(I, members(S));
    zero_t      i = I.src(d), i2 = I.tgt(d);
    bool        any_span = false;
    for (zero_t k : E.apexes({i2, i})) {
      for (one_t t : E.sigma_cells(i, k)) {
        for (one_t t2 : E.sigma_cells(i2, k)) {
          any_span = true;
          one_t td = I.comp(t2, d);
          for (zero_t l : E.apexes({k})) {
            for (one_t t3 : E.sigma_cells(k, l)) {
              one_t s = I.comp(t3, t), s2 = I.comp(t3, t2);
              if (!S.contains(s) || !S.contains(s2)) {
                continue;
              }
              for (two_t phi : I.two_cells(I.comp(t3, td), s)) {
                return {d, s, s2, phi, t, t2, t3};
              }
            }
          }
        }
      }
    }
    if (!any_span) {
      throw SearchExhausted("triangle for " + I.one_name(d)
                            + ": no span in Σ for " + I.zero_name(i) + ", "
                            + I.zero_name(i2));
    }
    throw SearchExhausted("triangle for " + I.one_name(d)
                          + ": no insertion in Σ for any span");
  }

  bool validate_triangle(SigmaClass const& S, Triangle const& w) {
    auto const& I = *S.owner();
    return S.contains(w.s) && S.contains(w.s_prime)
           && I.src(w.s) == I.src(w.d) && I.src(w.s_prime) == I.tgt(w.d)
           && I.tgt(w.s) == I.tgt(w.s_prime)
           && I.dom2(w.phi) == I.comp(w.s_prime, w.d)
           && I.cod2(w.phi) == w.s;
  }

  ////////////////////////////////////////////////////////////////////////
  // Cofinality
  ////////////////////////////////////////////////////////////////////////

  namespace {

    class CofinalEngine {
     public:
      CofinalEngine(TwoFunctor const& F,
                    SigmaClass const& S,
                    SigmaClass const& S2)
          : _F(F), _I(*F.source()), _J(*F.target()), _S(S), _S2(S2) {}

      std::optional<std::pair<zero_t, one_t>> arrow(zero_t      j,
                                                    std::size_t& tried) const {
        for (zero_t i = 0; i < _I.num_zero_cells(); ++i) {
          for (one_t s : _J.one_cells(j, _F.on0(i))) {
            ++tried;
            if (_S2.contains(s)) {
              return std::pair{i, s};
            }
          }
        }
        return std::nullopt;
      }

      std::vector<one_t> sigma_out(zero_t i) const {
        std::vector<one_t> out;
        if (_S.contains(_I.unit(i))) {
          out.push_back(_I.unit(i));
        }
        for (zero_t k = 0; k < _I.num_zero_cells(); ++k) {
          for (one_t s : _I.one_cells(i, k)) {
            if (_S.contains(s) && s != _I.unit(i)) {
              out.push_back(s);
            }
          }
        }
        return out;
      }

      std::optional<std::pair<one_t, two_t>> insertion(
          zero_t i, one_t d, one_t t, bool invertible, std::size_t& tried) const {
        for (one_t s : sigma_out(i)) {
          one_t Fs = _F.on1(s);
          for (two_t a : _J.two_cells(_J.comp(Fs, d), _J.comp(Fs, t))) {
            ++tried;
            if (!invertible || _J.is_invertible2(a)) {
              return std::pair{s, a};
            }
          }
        }
        return std::nullopt;
      }

      std::optional<one_t> equify(zero_t i, two_t a, two_t b,
                                  std::size_t& tried) const {
        for (one_t s : sigma_out(i)) {
          ++tried;
          one_t Fs = _F.on1(s);
          if (_J.lwhisker(Fs, a) == _J.lwhisker(Fs, b)) {
            return s;
          }
        }
        return std::nullopt;
      }

      TwoFunctor const& _F;
      TwoCat const&     _I;
      TwoCat const&     _J;
      SigmaClass const& _S;
      SigmaClass const& _S2;
    };

  }  // namespace

  Verdict check_sigma_cofinal(TwoFunctor const& F,
                              SigmaClass const& S,
                              SigmaClass const& S_target) {
    CofinalEngine E(F, S, S_target);
    auto const&   I = E._I;
    auto const&   J = E._J;
    Part          arrows(cond::cofinal_arrow);
    for (zero_t j = 0; j < J.num_zero_cells(); ++j) {
      std::size_t tried = 0;
      auto        w     = E.arrow(j, tried);
      arrows.tried(tried);
      if (w) {
        arrows.witness({J.zero_name(j)},
                       {I.zero_name(w->first), J.one_name(w->second)});
      } else {
        arrows.fail({J.zero_name(j)}, candidates(tried, "arrows"));
      }
    }
    Part ins(cond::cofinal_insertion);
    Part inv(cond::cofinal_invertible_insertion);
    Part eq(cond::cofinal_equification);
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      zero_t Fi = F.on0(i);
      for (zero_t j = 0; j < J.num_zero_cells(); ++j) {
        for (one_t t : J.one_cells(j, Fi)) {
          if (!S_target.contains(t)) {
            continue;
          }
          for (one_t d : J.one_cells(j, Fi)) {
            if (d == t) {
              continue;
            }
            std::vector<std::string> inst{I.zero_name(i), J.one_name(d),
                                          J.one_name(t)};
            for (bool invertible : {false, true}) {
              if (invertible && !S_target.contains(d)) {
                continue;
              }
              Part&       p     = invertible ? inv : ins;
              std::size_t tried = 0;
              auto        w     = E.insertion(i, d, t, invertible, tried);
              p.tried(tried);
              if (w) {
                p.witness(inst, {I.one_name(w->first), J.two_name(w->second)});
              } else {
                p.fail(inst, candidates(tried, invertible
                                                   ? "invertible insertions"
                                                   : "insertions"));
              }
            }
          }
          for (one_t d : J.one_cells(j, Fi)) {
            auto cells = J.two_cells(d, t);
            for (auto a = cells.begin(); a != cells.end(); ++a) {
              for (auto b = std::next(a); b != cells.end(); ++b) {
                std::size_t tried = 0;
                auto        w     = E.equify(i, *a, *b, tried);
                eq.tried(tried);
                std::vector<std::string> inst{I.zero_name(i), J.two_name(*a),
                                              J.two_name(*b)};
                if (w) {
                  eq.witness(std::move(inst), {I.one_name(*w)});
                } else {
                  eq.fail(std::move(inst), candidates(tried, "equifying 1-cells"));
                }
              }
            }
          }
        }
      }
    }
    return combine("sigma-cofinal",
                   {std::move(arrows).finish(), std::move(ins).finish(),
                    std::move(inv).finish(), std::move(eq).finish()});
  }

  TrivializationReport trivialization_check(SigmaClass const& S) {
    auto closed = sigma_closure(S);
    auto sub    = sigma_subcategory(closed);
    auto inner  = SigmaClass::all(sub.category);
    return {closed, check_sigma_filtered(closed), check_bifiltered(*sub.category),
            check_sigma_cofinal(sub.inclusion, inner, closed)};
  }

  ////////////////////////////////////////////////////////////////////////
  // σ-cones
  ////////////////////////////////////////////////////////////////////////

  namespace {

    struct ConeShape {
      std::vector<zero_t> objects;
      std::vector<one_t>  cells;  // all 1-cells among objects
      std::vector<int>    pos;    // 0-cell → index in objects, or -1
      std::vector<int>    cpos;   // 1-cell → index in cells, or -1
      // Composition triples (e, d, ed) and 2-cells γ, by cell index.
      std::vector<std::array<int, 3>> triples;
      std::vector<two_t>              two_cells;
    };

    ConeShape cone_shape(TwoCat const& I, std::vector<zero_t> objects) {
      ConeShape c;
      std::sort(objects.begin(), objects.end());
      objects.erase(std::unique(objects.begin(), objects.end()), objects.end());
      c.objects = objects;
      c.pos.assign(I.num_zero_cells(), -1);
      c.cpos.assign(I.num_one_cells(), -1);
      for (std::size_t k = 0; k < objects.size(); ++k) {
        c.pos[objects[k]] = k;
      }
      for (one_t d : I.one_cells()) {
        if (c.pos[I.src(d)] >= 0 && c.pos[I.tgt(d)] >= 0) {
          c.cpos[d] = c.cells.size();
          c.cells.push_back(d);
        }
      }
      for (one_t d : c.cells) {
        for (one_t e : c.cells) {
          if (I.src(e) == I.tgt(d)) {
            c.triples.push_back(
                {c.cpos[e], c.cpos[d], c.cpos[I.comp(e, d)]});
          }
        }
        for (one_t d2 : c.cells) {
          if (I.src(d2) == I.src(d) && I.tgt(d2) == I.tgt(d)) {
            for (two_t g : I.two_cells(d, d2)) {
              c.two_cells.push_back(g);
            }
          }
        }
      }
      return c;
    }

    class ConeSearch {
     public:
      ConeSearch(SigmaClass const& S, ConeShape const& shape, std::size_t bound)
          : _S(S), _I(*S.owner()), _c(shape), _bound(bound) {}

      std::optional<std::vector<std::string>> run() {
        for (zero_t k = 0; k < _I.num_zero_cells(); ++k) {
          _k = k;
          _legs.assign(_c.objects.size(), UNDEFINED);
          if (legs(0)) {
            std::vector<std::string> data{_I.zero_name(k)};
            for (one_t s : _legs) {
              data.push_back(_I.one_name(s));
            }
            for (two_t l : _lambda) {
              data.push_back(_I.two_name(l));
            }
            return data;
          }
        }
        return std::nullopt;
      }

      std::size_t tried() const {
        return _tried;
      }

     private:
      bool legs(std::size_t x) {
        if (x == _c.objects.size()) {
          _lambda.assign(_c.cells.size(), UNDEFINED);
          return cells(0);
        }
        for (one_t s : _I.one_cells(_c.objects[x], _k)) {
          if (!_S.contains(s)) {
            continue;
          }
          tick();
          _legs[x] = s;
          if (legs(x + 1)) {
            return true;
          }
        }
        return false;
      }

      bool cells(std::size_t n) {
        if (n == _c.cells.size()) {
          return true;
        }
        one_t d  = _c.cells[n];
        one_t sx = _legs[_c.pos[_I.src(d)]];
        one_t sy = _legs[_c.pos[_I.tgt(d)]];
        if (_I.is_unit(d)) {
          _lambda[n] = _I.id2(sx);
          if (consistent(n) && cells(n + 1)) {
            return true;
          }
          _lambda[n] = UNDEFINED;
          return false;
        }
        for (two_t l : _I.two_cells(_I.comp(sy, d), sx)) {
          if (_S.contains(d) && !_I.is_invertible2(l)) {
            continue;
          }
          tick();
          _lambda[n] = l;
          if (consistent(n) && cells(n + 1)) {
            return true;
          }
        }
        _lambda[n] = UNDEFINED;
        return false;
      }

      // Checks constraints whose cells are all assigned and involve n.
      bool consistent(std::size_t n) const {
        for (auto const& [e, d, ed] : _c.triples) {
          if ((std::size_t) e != n && (std::size_t) d != n
              && (std::size_t) ed != n) {
            continue;
          }
          if (_lambda[e] == UNDEFINED || _lambda[d] == UNDEFINED
              || _lambda[ed] == UNDEFINED) {
            continue;
          }
          two_t rhs
              = _I.vcomp(_lambda[d], _I.rwhisker(_lambda[e], _c.cells[d]));
          if (_lambda[ed] != rhs) {
            return false;
          }
        }
        for (two_t g : _c.two_cells) {
          int a = _c.cpos[_I.dom2(g)], b = _c.cpos[_I.cod2(g)];
          if (((std::size_t) a != n && (std::size_t) b != n)
              || _lambda[a] == UNDEFINED || _lambda[b] == UNDEFINED) {
            continue;
          }
          one_t sy = _legs[_c.pos[_I.tgt(_I.dom2(g))]];
          if (_I.vcomp(_lambda[b], _I.lwhisker(sy, g)) != _lambda[a]) {
            return false;
          }
        }
        return true;
      }

      void tick() {
        if (++_tried > _bound) {
          throw SizeLimitError("σ-cone search exceeds the bound of "
                               + std::to_string(_bound) + " candidates");
        }
      }

      SigmaClass const&  _S;
      TwoCat const&      _I;
      ConeShape const&   _c;
      std::size_t        _bound;
      std::size_t        _tried = 0;
      zero_t             _k     = 0;
      std::vector<one_t> _legs;
      std::vector<two_t> _lambda;
    };

    std::vector<std::string> zero_names(TwoCat const&              I,
                                        std::vector<zero_t> const& xs) {
      std::vector<std::string> out;
      for (zero_t x : xs) {
        out.push_back(I.zero_name(x));
      }
      return out;
    }

  }  // namespace

  Verdict find_sigma_cone(SigmaClass const&          S,
                          std::vector<zero_t> const& objects,
                          std::size_t                bound) {
    auto const& I     = *S.owner();
    auto        shape = cone_shape(I, objects);
    ConeSearch  search(S, shape, bound);
    Part        p(cond::sigma_cone);
    auto        w = search.run();
    p.tried(search.tried());
    if (w) {
      p.witness(zero_names(I, shape.objects), std::move(*w));
    } else {
      p.fail(zero_names(I, shape.objects),
             candidates(search.tried(), "cone assignments"));
    }
    return std::move(p).finish();
  }

  Verdict check_sigma_cones(SigmaClass const& S, std::size_t bound) {
    auto const& I = *S.owner();
    std::size_t n = I.num_zero_cells();
    if (n > 12) {
      throw SizeLimitError("σ-cone check enumerates 2^" + std::to_string(n)
                           + " object subsets");
    }
    Part p(cond::sigma_cone);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<zero_t> xs;
      for (zero_t x = 0; x < n; ++x) {
        if (mask & (1u << x)) {
          xs.push_back(x);
        }
      }
      auto v = find_sigma_cone(S, xs, bound);
      p.tried(v.stats().candidates);
      if (v.outcome()) {
        p.witness(v.witnesses().front().instance, v.witnesses().front().data);
      } else {
        p.fail(v.counterexample().instance, v.counterexample().search_space);
      }
    }
    return std::move(p).finish();
  }

  ////////////////////////////////////////////////////////////////////////
  // Replay
  ////////////////////////////////////////////////////////////////////////

  namespace {

    template <typename T>
    T need(std::optional<T> const& x) {
      if (!x) {
        throw std::out_of_range("unknown identifier");
      }
      return *x;
    }

    bool replay_cone(SigmaClass const& S, Witness const& w) {
      auto const&         I = *S.owner();
      std::vector<zero_t> xs;
      for (auto const& name : w.instance) {
        xs.push_back(need(I.find_zero(name)));
      }
      auto shape = cone_shape(I, xs);
      if (w.data.size() != 1 + shape.objects.size() + shape.cells.size()) {
        return false;
      }
      zero_t             k = need(I.find_zero(w.data[0]));
      std::vector<one_t> legs;
      for (std::size_t x = 0; x < shape.objects.size(); ++x) {
        one_t s = need(I.find_one(w.data[1 + x]));
        if (!S.contains(s) || I.src(s) != shape.objects[x] || I.tgt(s) != k) {
          return false;
        }
        legs.push_back(s);
      }
      std::vector<two_t> lambda;
      for (std::size_t n = 0; n < shape.cells.size(); ++n) {
        two_t l  = need(I.find_two(w.data[1 + shape.objects.size() + n]));
        one_t d  = shape.cells[n];
        one_t sx = legs[shape.pos[I.src(d)]];
        one_t sy = legs[shape.pos[I.tgt(d)]];
        if (I.dom2(l) != I.comp(sy, d) || I.cod2(l) != sx
            || (S.contains(d) && !I.is_invertible2(l))
            || (I.is_unit(d) && l != I.id2(sx))) {
          return false;
        }
        lambda.push_back(l);
      }
      for (auto const& [e, d, ed] : shape.triples) {
        if (lambda[ed]
            != I.vcomp(lambda[d], I.rwhisker(lambda[e], shape.cells[d]))) {
          return false;
        }
      }
      for (two_t g : shape.two_cells) {
        one_t sy = legs[shape.pos[I.tgt(I.dom2(g))]];
        if (I.vcomp(lambda[shape.cpos[I.cod2(g)]], I.lwhisker(sy, g))
            != lambda[shape.cpos[I.dom2(g)]]) {
          return false;
        }
      }
      return true;
    }

  }  // namespace

  bool replay_witness(SigmaClass const& S, Witness const& w) {
    auto const& I = *S.owner();
    try {
      if (w.condition == cond::span) {
        zero_t i = need(I.find_zero(w.instance.at(0)));
        zero_t j = need(I.find_zero(w.instance.at(1)));
        one_t  s = need(I.find_one(w.data.at(0)));
        one_t  t = need(I.find_one(w.data.at(1)));
        return S.contains(s) && S.contains(t) && I.src(s) == i
               && I.src(t) == j && I.tgt(s) == I.tgt(t);
      }
      if (w.condition == cond::family) {
        zero_t k = need(I.find_zero(w.data.at(0)));
        if (w.data.size() != w.instance.size() + 1) {
          return false;
        }
        for (std::size_t x = 0; x < w.instance.size(); ++x) {
          one_t s = need(I.find_one(w.data[x + 1]));
          if (!S.contains(s) || I.src(s) != need(I.find_zero(w.instance[x]))
              || I.tgt(s) != k) {
            return false;
          }
        }
        return true;
      }
      if (w.condition == cond::insertion
          || w.condition == cond::invertible_insertion) {
        bool  inv = w.condition == cond::invertible_insertion;
        one_t d   = need(I.find_one(w.instance.at(0)));
        one_t s   = need(I.find_one(w.instance.at(1)));
        one_t t   = need(I.find_one(w.data.at(0)));
        two_t a   = need(I.find_two(w.data.at(1)));
        return I.src(d) == I.src(s) && I.tgt(d) == I.tgt(s) && S.contains(s)
               && (!inv || S.contains(d)) && S.contains(t)
               && I.src(t) == I.tgt(d) && I.dom2(a) == I.comp(t, d)
               && I.cod2(a) == I.comp(t, s) && (!inv || I.is_invertible2(a));
      }
      if (w.condition == cond::equification) {
        two_t a = need(I.find_two(w.instance.at(0)));
        two_t b = need(I.find_two(w.instance.at(1)));
        one_t f = need(I.find_one(w.data.at(0)));
        return I.dom2(a) == I.dom2(b) && I.cod2(a) == I.cod2(b)
               && S.contains(I.cod2(a)) && S.contains(f)
               && I.src(f) == I.tgt(I.dom2(a))
               && I.lwhisker(f, a) == I.lwhisker(f, b);
      }
      if (w.condition == cond::sigma_cone) {
        return replay_cone(S, w);
      }
    } catch (std::out_of_range const&) {
      return false;
    }
    return false;
  }

  bool replay_counterexample(SigmaClass const& S, Counterexample const& c) {
    auto const& I = *S.owner();
    Engine      E(I, members(S));
    std::size_t tried = 0;
    try {
      if (c.condition == cond::span) {
        return !E.span(need(I.find_zero(c.instance.at(0))),
                       need(I.find_zero(c.instance.at(1))), tried);
      }
      if (c.condition == cond::family) {
        std::vector<zero_t> xs;
        for (auto const& n : c.instance) {
          xs.push_back(need(I.find_zero(n)));
        }
        return !E.family(xs, tried);
      }
      if (c.condition == cond::insertion
          || c.condition == cond::invertible_insertion) {
        one_t d = need(I.find_one(c.instance.at(0)));
        one_t s = need(I.find_one(c.instance.at(1)));
        return S.contains(s)
               && !E.insertion(d, s, c.condition == cond::invertible_insertion,
                               tried);
      }
      if (c.condition == cond::equification) {
        two_t a = need(I.find_two(c.instance.at(0)));
        two_t b = need(I.find_two(c.instance.at(1)));
        return S.contains(I.cod2(a)) && !E.equify(a, b, tried);
      }
      if (c.condition == cond::sigma_cone) {
        std::vector<zero_t> xs;
        for (auto const& n : c.instance) {
          xs.push_back(need(I.find_zero(n)));
        }
        return !find_sigma_cone(S, xs).outcome();
      }
    } catch (std::out_of_range const&) {
      return false;
    }
    return false;
  }

  bool replay_cofinal_witness(TwoFunctor const& F,
                              SigmaClass const& S,
                              SigmaClass const& S_target,
                              Witness const&    w) {
    auto const& I = *F.source();
    auto const& J = *F.target();
    try {
      if (w.condition == cond::cofinal_arrow) {
        zero_t j = need(J.find_zero(w.instance.at(0)));
        zero_t i = need(I.find_zero(w.data.at(0)));
        one_t  s = need(J.find_one(w.data.at(1)));
        return S_target.contains(s) && J.src(s) == j && J.tgt(s) == F.on0(i);
      }
      if (w.condition == cond::cofinal_insertion
          || w.condition == cond::cofinal_invertible_insertion) {
        bool   inv = w.condition == cond::cofinal_invertible_insertion;
        zero_t i   = need(I.find_zero(w.instance.at(0)));
        one_t  d   = need(J.find_one(w.instance.at(1)));
        one_t  t   = need(J.find_one(w.instance.at(2)));
        one_t  s   = need(I.find_one(w.data.at(0)));
        two_t  a   = need(J.find_two(w.data.at(1)));
        one_t  Fs  = F.on1(s);
        return J.tgt(t) == F.on0(i) && J.tgt(d) == F.on0(i)
               && J.src(d) == J.src(t) && S_target.contains(t)
               && (!inv || S_target.contains(d)) && S.contains(s)
               && I.src(s) == i && J.dom2(a) == J.comp(Fs, d)
               && J.cod2(a) == J.comp(Fs, t) && (!inv || J.is_invertible2(a));
      }
      if (w.condition == cond::cofinal_equification) {
        zero_t i  = need(I.find_zero(w.instance.at(0)));
        two_t  a  = need(J.find_two(w.instance.at(1)));
        two_t  b  = need(J.find_two(w.instance.at(2)));
        one_t  s  = need(I.find_one(w.data.at(0)));
        one_t  Fs = F.on1(s);
        return J.dom2(a) == J.dom2(b) && J.cod2(a) == J.cod2(b)
               && S_target.contains(J.cod2(a)) && J.tgt(J.cod2(a)) == F.on0(i)
               && S.contains(s) && I.src(s) == i
               && J.lwhisker(Fs, a) == J.lwhisker(Fs, b);
      }
    } catch (std::out_of_range const&) {
      return false;
    }
    return false;
  }

  bool replay_cofinal_counterexample(TwoFunctor const&     F,
                                     SigmaClass const&     S,
                                     SigmaClass const&     S_target,
                                     Counterexample const& c) {
    CofinalEngine E(F, S, S_target);
    auto const&   I     = E._I;
    auto const&   J     = E._J;
    std::size_t   tried = 0;
    try {
      if (c.condition == cond::cofinal_arrow) {
        return !E.arrow(need(J.find_zero(c.instance.at(0))), tried);
      }
      if (c.condition == cond::cofinal_insertion
          || c.condition == cond::cofinal_invertible_insertion) {
        return !E.insertion(need(I.find_zero(c.instance.at(0))),
                            need(J.find_one(c.instance.at(1))),
                            need(J.find_one(c.instance.at(2))),
                            c.condition == cond::cofinal_invertible_insertion,
                            tried);
      }
      if (c.condition == cond::cofinal_equification) {
        return !E.equify(need(I.find_zero(c.instance.at(0))),
                         need(J.find_two(c.instance.at(1))),
                         need(J.find_two(c.instance.at(2))), tried);
      }
    } catch (std::out_of_range const&) {
      return false;
    }
    return false;
  }

  bool replay_verdict(SigmaClass const& S, Verdict const& v) {
    if (v.parts().empty()) {
      if (v.outcome()) {
        return std::all_of(v.witnesses().begin(), v.witnesses().end(),
                           [&](Witness const& w) {
                             return replay_witness(S, w);
                           });
      }
      return replay_counterexample(S, v.counterexample());
    }
    bool ok = std::all_of(v.parts().begin(), v.parts().end(),
                          [&](Verdict const& p) {
                            return replay_verdict(S, p);
                          });
    return ok && (v.outcome() || replay_counterexample(S, v.counterexample()));
  }

}  // namespace sigmacat
