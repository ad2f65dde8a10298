#include "sigmacat/colim.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sigmacat/errors.hpp"
#include "sigmacat/filtered.hpp"

namespace sigmacat {

  ////////////////////////////////////////////////////////////////////////
  // Elements
  ////////////////////////////////////////////////////////////////////////

  zero_t ElementsCat::object(zero_t i, obj_t a) const {
    auto it = std::find(objects.begin(), objects.end(), std::pair{i, a});
    if (it == objects.end()) {
      throw std::out_of_range("no element (" + base->zero_name(i) + ", "
                              + std::to_string(a) + ")");
    }
    return it - objects.begin();
  }

  SigmaClass ElementsCat::opcartesian_class() const {
    std::vector<one_t> members;
    for (one_t s = 0; s < opcartesian.size(); ++s) {
      if (opcartesian[s]) {
        members.push_back(s);
      }
    }
    return SigmaClass(total, members);
  }

  ElementsCat elements_category(CatPseudoFunctor const& F) {
    auto const& I = *F.base();
    ElementsCat E;
    E.base    = F.base();
    E.functor = F;

    TwoCatBuilder b;
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      auto const& X = *F.on0(i);
      for (obj_t a = 0; a < X.num_objects(); ++a) {
        E.objects.emplace_back(i, a);
        b.add_zero_cell("(" + I.zero_name(i) + "," + X.object_name(a) + ")");
      }
    }
    std::size_t n = E.objects.size();

    // Per hom: local objects (f, φ) and local morphisms keyed by
    // (dom, cod, α).
    struct Hom {
      std::vector<std::pair<one_t, mor_t>>          cells;
      std::map<std::array<std::uint32_t, 3>, mor_t> two;
      std::vector<std::array<std::uint32_t, 3>>     two_list;
    };
    std::vector<Hom> homs(n * n);
    for (zero_t x = 0; x < n; ++x) {
      auto [i, a] = E.objects[x];
      for (zero_t y = 0; y < n; ++y) {
        auto [j, c]  = E.objects[y];
        auto const& Y = *F.on0(j);
        Hom&          h = homs[x * n + y];
        FinCatBuilder hb;
        std::vector<std::string> names;
        for (one_t f : I.one_cells(i, j)) {
          for (mor_t phi : Y.hom(F.on1(f)(a), c)) {
            h.cells.emplace_back(f, phi);
            names.push_back("(" + F.on0(i)->object_name(a) + ","
                            + I.one_name(f) + "," + Y.morphism_name(phi) + ")");
            hb.add_object(names.back());
          }
        }
        for (obj_t u = 0; u < h.cells.size(); ++u) {
          for (obj_t v = 0; v < h.cells.size(); ++v) {
            auto [f, phi]  = h.cells[u];
            auto [f2, phi2] = h.cells[v];
            for (two_t al : I.two_cells(f, f2)) {
              if (Y.compose(phi2, F.on2(al)[a]) != phi) {
                continue;
              }
              std::string name = I.is_id2(al)
                                     ? "1_" + names[u]
                                     : "(" + I.two_name(al) + ":" + names[u]
                                           + "=>" + names[v] + ")";
              mor_t m = hb.add_morphism(std::move(name), u, v);
              h.two.emplace(std::array{u, v, al}, m);
              h.two_list.push_back({u, v, al});
              if (I.is_id2(al)) {
                hb.set_identity(u, m);
              }
            }
          }
        }
        for (mor_t m1 = 0; m1 < h.two_list.size(); ++m1) {
          for (mor_t m2 = 0; m2 < h.two_list.size(); ++m2) {
            auto [u, v, al]  = h.two_list[m1];
            auto [v2, w, be] = h.two_list[m2];
            if (v != v2) {
              continue;
            }
            auto it = h.two.find({u, w, I.vcomp(be, al)});
            if (it == h.two.end()) {
              throw std::logic_error("elements: vertical composite missing");
            }
            hb.set_composite(m2, m1, it->second);
          }
        }
        b.set_hom(x, y, std::make_shared<FinCat const>(hb.build()));
      }
    }
    b.prepare();
    auto const& T = b.cells();

    // 1-cells by (source, f, φ).
    std::map<std::array<std::uint32_t, 3>, one_t> one_lookup;
    E.arrows.resize(T.num_one_cells());
    E.opcartesian.resize(T.num_one_cells());
    for (zero_t x = 0; x < n; ++x) {
      for (zero_t y = 0; y < n; ++y) {
        auto const& h = homs[x * n + y];
        for (obj_t u = 0; u < h.cells.size(); ++u) {
          one_t g      = T.global_one(x, y, u);
          E.arrows[g]  = h.cells[u];
          auto [j, c]  = E.objects[y];
          E.opcartesian[g] = F.on0(j)->is_iso(h.cells[u].second);
          one_lookup.emplace(std::array{x, h.cells[u].first, h.cells[u].second},
                             g);
        }
      }
    }
    auto cell = [&](zero_t x, one_t f, mor_t phi) {
      auto it = one_lookup.find({x, f, phi});
      if (it == one_lookup.end()) {
        throw std::logic_error("elements: 1-cell composite missing");
      }
      return it->second;
    };
    for (zero_t x = 0; x < n; ++x) {
      auto [i, a] = E.objects[x];
      b.set_unit(x, cell(x, I.unit(i), F.unit_inv_at(i, a)));
    }
    // Composite (g, ψ) ∘ (f, φ) = (gf, ψ ∘ F(g)(φ) ∘ c⁻¹).
    auto comp1 = [&](one_t G, one_t Fc) {
      zero_t x     = T.src(Fc);
      auto [i, a]  = E.objects[x];
      auto [f, phi] = E.arrows[Fc];
      auto [g, psi] = E.arrows[G];
      auto const& Z = *F.on0(I.tgt(g));
      mor_t chi = Z.compose(psi, Z.compose(F.on1(g).map_morphism(phi),
                                           F.comp_inv_at(g, f, a)));
      return cell(x, I.comp(g, f), chi);
    };
    for (one_t Fc : T.one_cells()) {
      for (zero_t z = 0; z < n; ++z) {
        for (one_t G : T.one_cells(T.tgt(Fc), z)) {
          b.set_comp1(G, Fc, comp1(G, Fc));
        }
      }
    }
    auto two_id = [&](one_t dom, one_t cod, two_t al) {
      zero_t x = T.src(dom), y = T.tgt(dom);
      auto const& h  = homs[x * n + y];
      auto        it = h.two.find({T.local(dom), T.local(cod), al});
      if (it == h.two.end()) {
        throw std::logic_error("elements: horizontal composite missing");
      }
      return T.global_two(dom, it->second);
    };
    auto base2 = [&](TwoCat const& C, two_t A) {
      zero_t x = C.src(C.dom2(A)), y = C.tgt(C.dom2(A));
      return homs[x * n + y].two_list[C.local2(A)][2];
    };
    for (two_t A : T.two_cells()) {
      one_t s = T.dom2(A), s2 = T.cod2(A);
      for (zero_t z = 0; z < n; ++z) {
        for (one_t t : T.one_cells(T.tgt(s), z)) {
          for (one_t t2 : T.one_cells(T.tgt(s), z)) {
            for (two_t B : T.two_cells(t, t2)) {
              b.set_comp2(B, A,
                          two_id(comp1(t, s), comp1(t2, s2),
                                 I.hcomp(base2(T, B), base2(T, A))));
            }
          }
        }
      }
    }
    E.total = std::make_shared<TwoCat const>(b.build());
    auto const&         Tot = *E.total;
    std::vector<zero_t> on0;
    std::vector<one_t>  on1;
    std::vector<two_t>  on2;
    for (auto [i, a] : E.objects) {
      on0.push_back(i);
    }
    for (auto [f, phi] : E.arrows) {
      on1.push_back(f);
    }
    for (two_t A : Tot.two_cells()) {
      on2.push_back(base2(Tot, A));
    }
    E.projection = TwoFunctor::make(E.total, E.base, on0, on1, on2);
    return E;
  }

  ////////////////////////////////////////////////////////////////////////
  // The premorphism quotient
  ////////////////////////////////////////////////////////////////////////

  class Quotient {
   public:
    // The engine runs on (index, sigma, F). With a trivialization route,
    // `inclusion` maps engine 1-cells to the outer index.
    TwoCatPtr                 index;
    SigmaClass                sigma;
    CatPseudoFunctor          F;
    std::optional<TwoFunctor> inclusion;
    std::vector<one_t>        to_inner;  // outer 1-cell → engine, or UNDEFINED
    TwoCatPtr                 outer_index;
    SigmaClass                outer_sigma;
    CatPseudoFunctor          outer_F;

    std::vector<std::size_t>                        obj_offset;
    std::map<std::array<std::uint32_t, 4>, std::uint32_t> groups;
    std::vector<Premorphism>                        pre;
    std::vector<mor_t>                              cls;
    std::vector<std::uint32_t>                      canonical;

    mutable std::map<std::pair<zero_t, zero_t>, std::pair<one_t, one_t>> spans;
    mutable std::map<std::pair<one_t, one_t>, std::pair<one_t, two_t>>   inserts;

    obj_t object(zero_t i, obj_t a) const {
      return obj_offset[i] + a;
    }

    std::uint32_t id_of(Premorphism const& p) const {
      auto it = groups.find({p.left, p.a1, p.right, p.a2});
      if (it == groups.end()) {
        return UNDEFINED;
      }
      auto const& I = *index;
      auto const& X = *F.on0(I.tgt(p.left));
      auto        h = X.hom(F.on1(p.left)(p.a1), F.on1(p.right)(p.a2));
      auto        k = std::find(h.begin(), h.end(), p.cell);
      if (k == h.end()) {
        return UNDEFINED;
      }
      return it->second + (k - h.begin());
    }

    std::uint32_t find(std::vector<std::uint32_t>& parent,
                       std::uint32_t               x) const {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x         = parent[x];
      }
      return x;
    }

    void enumerate(std::size_t bound) {
      auto const& I = *index;
      obj_offset.assign(I.num_zero_cells() + 1, 0);
      for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
        obj_offset[i + 1] = obj_offset[i] + F.on0(i)->num_objects();
      }
      for (zero_t i1 = 0; i1 < I.num_zero_cells(); ++i1) {
        for (obj_t a1 = 0; a1 < F.on0(i1)->num_objects(); ++a1) {
          for (zero_t i2 = 0; i2 < I.num_zero_cells(); ++i2) {
            for (obj_t a2 = 0; a2 < F.on0(i2)->num_objects(); ++a2) {
              for (zero_t j = 0; j < I.num_zero_cells(); ++j) {
                auto const& X = *F.on0(j);
                for (one_t s : I.one_cells(i1, j)) {
                  if (!sigma.contains(s)) {
                    continue;
                  }
                  for (one_t d : I.one_cells(i2, j)) {
                    auto h = X.hom(F.on1(s)(a1), F.on1(d)(a2));
                    groups.emplace(std::array{s, a1, d, a2}, pre.size());
                    for (mor_t phi : h) {
                      pre.push_back({i1, a1, i2, a2, s, d, phi});
                    }
                    if (pre.size() > bound) {
                      throw SizeLimitError(
                          "colimit exceeds the bound of "
                          + std::to_string(bound) + " premorphisms");
                    }
                  }
                }
              }
            }
          }
        }
      }
    }

    void identify() {
      auto const&                I = *index;
      std::vector<std::uint32_t> parent(pre.size());
      std::iota(parent.begin(), parent.end(), 0);
      auto unite = [&](std::uint32_t x, Premorphism const& q) {
        std::uint32_t y = id_of(q);
        if (y == UNDEFINED) {
          throw std::logic_error("premorphism move leaves the enumeration");
        }
        x = find(parent, x);
        y = find(parent, y);
        if (x != y) {
          parent[std::max(x, y)] = std::min(x, y);
        }
      };
      for (std::uint32_t k = 0; k < pre.size(); ++k) {
        Premorphism const& p = pre[k];
        zero_t             j = I.tgt(p.left);
        for (zero_t l = 0; l < I.num_zero_cells(); ++l) {
          auto const& Y = *F.on0(l);
          for (one_t t : I.one_cells(j, l)) {
            one_t ts = I.comp(t, p.left);
            if (!sigma.contains(ts)) {
              continue;
            }
            mor_t cell = Y.compose(
                F.comp_at(t, p.right, p.a2),
                Y.compose(F.on1(t).map_morphism(p.cell),
                          F.comp_inv_at(t, p.left, p.a1)));
            unite(k, {p.i1, p.a1, p.i2, p.a2, ts, I.comp(t, p.right), cell});
          }
        }
        auto const& X = *F.on0(j);
        for (one_t s0 : I.one_cells(p.i1, j)) {
          if (!sigma.contains(s0)) {
            continue;
          }
          for (two_t be : I.two_cells(s0, p.left)) {
            unite(k, {p.i1, p.a1, p.i2, p.a2, s0, p.right,
                      X.compose(p.cell, F.on2(be)[p.a1])});
          }
        }
        for (one_t d2 : I.one_cells(p.i2, j)) {
          for (two_t be : I.two_cells(p.right, d2)) {
            unite(k, {p.i1, p.a1, p.i2, p.a2, p.left, d2,
                      X.compose(F.on2(be)[p.a2], p.cell)});
          }
        }
      }
      cls.assign(pre.size(), UNDEFINED);
      std::vector<mor_t> root_class(pre.size(), UNDEFINED);
      for (std::uint32_t k = 0; k < pre.size(); ++k) {
        std::uint32_t r = find(parent, k);
        if (root_class[r] == UNDEFINED) {
          root_class[r] = canonical.size();
          canonical.push_back(k);
        }
        cls[k] = root_class[r];
      }
    }

    std::pair<one_t, one_t> span(zero_t j, zero_t j2) const {
      auto it = spans.find({j, j2});
      if (it != spans.end()) {
        return it->second;
      }
      auto w = find_span(sigma, j, j2);
      if (!w) {
        throw SearchExhausted("amalgamation: no span for "
                              + index->zero_name(j) + ", "
                              + index->zero_name(j2));
      }
      return spans[{j, j2}] = *w;
    }

    std::pair<one_t, two_t> insertion(one_t d, one_t s) const {
      auto it = inserts.find({d, s});
      if (it != inserts.end()) {
        return it->second;
      }
      auto w = find_insertion(sigma, d, s, false);
      if (!w) {
        throw SearchExhausted("amalgamation: no insertion for "
                              + index->one_name(d) + ", "
                              + index->one_name(s));
      }
      return inserts[{d, s}] = *w;
    }

    // q ∘ p on engine premorphisms.
    Premorphism compose(Premorphism const& q, Premorphism const& p) const {
      auto const& I      = *index;
      auto [u, u2]       = span(I.tgt(p.left), I.tgt(q.left));
      one_t ud           = I.comp(u, p.right);
      one_t us           = I.comp(u2, q.left);
      auto [f, al]       = insertion(ud, us);
      one_t       U      = I.comp(f, u);
      one_t       U2     = I.comp(f, u2);
      auto const& Z      = *F.on0(I.tgt(f));
      mor_t       chi    = F.comp_inv_at(U, p.left, p.a1);
      auto        then   = [&](mor_t g) { chi = Z.compose(g, chi); };
      then(F.on1(U).map_morphism(p.cell));
      then(F.comp_at(U, p.right, p.a2));
      then(F.on2(al)[p.a2]);
      then(F.comp_inv_at(U2, q.left, p.a2));
      then(F.on1(U2).map_morphism(q.cell));
      then(F.comp_at(U2, q.right, q.a2));
      return {p.i1, p.a1, q.i2, q.a2, I.comp(U, p.left), I.comp(U2, q.right),
              chi};
    }

    Premorphism outer(Premorphism p) const {
      if (inclusion) {
        p.left  = inclusion->on1(p.left);
        p.right = inclusion->on1(p.right);
      }
      return p;
    }

    bool well_formed(Premorphism const& p) const {
      auto const& I = *outer_index;
      auto const& F0 = outer_F;
      if (p.i1 >= I.num_zero_cells() || p.i2 >= I.num_zero_cells()
          || p.left >= I.num_one_cells() || p.right >= I.num_one_cells()) {
        return false;
      }
      if (I.src(p.left) != p.i1 || I.src(p.right) != p.i2
          || I.tgt(p.left) != I.tgt(p.right)
          || p.a1 >= F0.on0(p.i1)->num_objects()
          || p.a2 >= F0.on0(p.i2)->num_objects()) {
        return false;
      }
      auto const& X = *F0.on0(I.tgt(p.left));
      return p.cell < X.num_morphisms()
             && X.dom(p.cell) == F0.on1(p.left)(p.a1)
             && X.cod(p.cell) == F0.on1(p.right)(p.a2);
    }

    bool admissible(Premorphism const& p) const {
      return well_formed(p) && outer_sigma.contains(p.left);
    }

    // Engine form of an outer premorphism; on the trivialization route a
    // right leg outside Σ is swallowed by a triangle.
    Premorphism inner(Premorphism p) const {
      if (!admissible(p)) {
        throw PreconditionError("not a premorphism of this colimit");
      }
      if (!inclusion) {
        return p;
      }
      auto const& I = *outer_index;
      if (!outer_sigma.contains(p.right)) {
        auto        w = triangle_completion(outer_sigma, p.right);
        one_t       t = w.s_prime;
        auto const& Y = *outer_F.on0(I.tgt(t));
        mor_t cell    = Y.compose(
            outer_F.comp_at(t, p.right, p.a2),
            Y.compose(outer_F.on1(t).map_morphism(p.cell),
                      outer_F.comp_inv_at(t, p.left, p.a1)));
        cell    = Y.compose(outer_F.on2(w.phi)[p.a2], cell);
        p.left  = I.comp(t, p.left);
        p.right = w.s;
        p.cell  = cell;
      }
      p.left  = to_inner[p.left];
      p.right = to_inner[p.right];
      return p;
    }

    mor_t class_of(Premorphism const& p) const {
      auto id = id_of(inner(p));
      if (id == UNDEFINED) {
        throw std::logic_error("premorphism missing from the enumeration");
      }
      return cls[id];
    }
  };

  namespace {

    std::string object_label(TwoCat const& I, CatPseudoFunctor const& F,
                             zero_t i, obj_t a) {
      return "(" + I.zero_name(i) + "," + F.on0(i)->object_name(a) + ")";
    }

    std::string premorphism_label(TwoCat const& I, CatPseudoFunctor const& F,
                                  Premorphism const& p) {
      auto const& X = *F.on0(I.tgt(p.left));
      return "[" + I.one_name(p.left) + ";" + I.one_name(p.right) + ";"
             + X.morphism_name(p.cell) + "]:" + object_label(I, F, p.i1, p.a1)
             + "->" + object_label(I, F, p.i2, p.a2);
    }

    ColimitCat assemble(std::shared_ptr<Quotient> Q,
                        ColimitOptions const&     options) {
      Q->enumerate(options.premorphism_bound);
      Q->identify();
      auto const& I  = *Q->outer_index;
      auto const& F  = Q->outer_F;
      ColimitCat  C;
      C.index   = Q->outer_index;
      C.sigma   = Q->outer_sigma;
      C.diagram = F;

      FinCatBuilder b;
      for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
        for (obj_t a = 0; a < F.on0(i)->num_objects(); ++a) {
          C.objects.emplace_back(i, a);
          b.add_object(object_label(I, F, i, a));
        }
      }
      std::size_t m = Q->canonical.size();
      std::vector<std::vector<mor_t>> by_dom(C.objects.size());
      for (mor_t c = 0; c < m; ++c) {
        Premorphism p = Q->outer(Q->pre[Q->canonical[c]]);
        C.representatives.push_back(p);
        obj_t x = Q->object(p.i1, p.a1), y = Q->object(p.i2, p.a2);
        b.add_morphism(premorphism_label(I, F, p), x, y);
        by_dom[x].push_back(c);
      }
      for (obj_t x = 0; x < C.objects.size(); ++x) {
        auto [i, a] = C.objects[x];
        Premorphism id{i, a, i, a, I.unit(i), I.unit(i),
                       F.on0(i)->identity(F.on1(I.unit(i))(a))};
        b.set_identity(x, Q->class_of(id));
      }
      for (mor_t f = 0; f < m; ++f) {
        Premorphism const& p = Q->pre[Q->canonical[f]];
        for (mor_t g : by_dom[Q->object(p.i2, p.a2)]) {
          Premorphism const& q  = Q->pre[Q->canonical[g]];
          auto               gf = Q->id_of(Q->compose(q, p));
          if (gf == UNDEFINED) {
            throw std::logic_error("amalgamated composite not enumerated");
          }
          b.set_composite(g, f, Q->cls[gf]);
        }
      }
      C.result   = std::make_shared<FinCat const>(
          b.build(options.verify ? Check::full : Check::structural));
      C.quotient = Q;

      for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
        auto const&        X = *F.on0(i);
        std::vector<obj_t> obj(X.num_objects());
        std::vector<mor_t> mor(X.num_morphisms());
        for (obj_t a = 0; a < X.num_objects(); ++a) {
          obj[a] = Q->object(i, a);
        }
        for (mor_t f = 0; f < X.num_morphisms(); ++f) {
          mor[f] = Q->class_of(fiber_premorphism(F, i, f));
        }
        C.legs.push_back(Functor::make(F.on0(i), C.result, obj, mor));
      }
      for (one_t d : I.one_cells()) {
        zero_t             i = I.src(d), j = I.tgt(d);
        std::vector<mor_t> comps(F.on0(i)->num_objects());
        for (obj_t a = 0; a < comps.size(); ++a) {
          obj_t x  = F.on1(d)(a);
          comps[a] = Q->class_of(
              {j, x, i, a, I.unit(j), d, F.unit_inv_at(j, x)});
        }
        C.transitions.push_back(NatTrans::make(
            compose(C.legs[j], F.on1(d)), C.legs[i], std::move(comps)));
      }
      return C;
    }

    std::shared_ptr<Quotient> direct_quotient(CatPseudoFunctor const& F,
                                              SigmaClass const&       S) {
      auto Q         = std::make_shared<Quotient>();
      Q->index       = F.base();
      Q->sigma       = S;
      Q->F           = F;
      Q->outer_index = F.base();
      Q->outer_sigma = S;
      Q->outer_F     = F;
      return Q;
    }

    SigmaClass closed_sigma_filtered(SigmaClass const& S) {
      auto closed = sigma_closure(S);
      auto v      = check_sigma_filtered(closed);
      if (!v.outcome()) {
        throw PreconditionError("index is not σ-filtered: "
                                + v.counterexample().condition + " fails");
      }
      return closed;
    }

  }  // namespace

  ColimitCat bifiltered_bicolimit(CatPseudoFunctor const& F,
                                  ColimitOptions const&   options) {
    auto v = check_bifiltered(*F.base());
    if (!v.outcome()) {
      throw PreconditionError("index is not bifiltered: "
                              + v.counterexample().condition + " fails");
    }
    return assemble(direct_quotient(F, SigmaClass::all(F.base())), options);
  }

  ColimitCat direct_sigma_bicolimit(CatPseudoFunctor const& F,
                                    SigmaClass const&       S,
                                    ColimitOptions const&   options) {
    return assemble(direct_quotient(F, closed_sigma_filtered(S)), options);
  }

  ColimitCat sigma_bicolimit(CatPseudoFunctor const& F,
                             SigmaClass const&       S,
                             ColimitOptions const&   options) {
    auto closed    = closed_sigma_filtered(S);
    auto sub       = sigma_subcategory(closed);
    auto Q         = std::make_shared<Quotient>();
    Q->index       = sub.category;
    Q->sigma       = SigmaClass::all(sub.category);
    Q->F           = precompose(F, sub.inclusion);
    Q->inclusion   = sub.inclusion;
    Q->outer_index = F.base();
    Q->outer_sigma = closed;
    Q->outer_F     = F;
    Q->to_inner.assign(F.base()->num_one_cells(), UNDEFINED);
    for (one_t s : sub.category->one_cells()) {
      Q->to_inner[sub.inclusion.on1(s)] = s;
    }
    return assemble(Q, options);
  }

  obj_t ColimitCat::object(zero_t i, obj_t a) const {
    return quotient->object(i, a);
  }

  mor_t ColimitCat::class_of(Premorphism const& p) const {
    return quotient->class_of(p);
  }

  bool ColimitCat::is_premorphism(Premorphism const& p) const {
    return quotient->admissible(p);
  }

  Premorphism ColimitCat::compose(Premorphism const& q,
                                  Premorphism const& p) const {
    if (p.i2 != q.i1 || p.a2 != q.a1) {
      throw PreconditionError("premorphisms are not composable");
    }
    return quotient->outer(
        quotient->compose(quotient->inner(q), quotient->inner(p)));
  }

  std::vector<Premorphism> ColimitCat::premorphisms() const {
    std::vector<Premorphism> out;
    for (auto const& p : quotient->pre) {
      out.push_back(quotient->outer(p));
    }
    return out;
  }

  bool premorphism_equal(ColimitCat const&  C,
                         Premorphism const& p,
                         Premorphism const& q) {
    return C.class_of(p) == C.class_of(q);
  }

  Premorphism fiber_premorphism(CatPseudoFunctor const& F, zero_t i, mor_t f) {
    auto const& X = *F.on0(i);
    one_t       u = F.base()->unit(i);
    return {i, X.dom(f), i, X.cod(f), u, u, F.on1(u).map_morphism(f)};
  }

  ////////////////////////////////////////////////////////////////////////
  // Cocones
  ////////////////////////////////////////////////////////////////////////

  Verdict check_sigma_cocone(CatPseudoFunctor const& F,
                             SigmaClass const&       S,
                             Cocone const&           K) {
    auto const& I     = *F.base();
    auto const& X     = *K.apex;
    SearchStats stats;
    auto fail = [&](std::string condition, std::vector<std::string> inst) {
      return Verdict::negative("sigma-cocone",
                               {std::move(condition), std::move(inst), ""},
                               stats);
    };
    if (K.legs.size() != I.num_zero_cells()
        || K.cells.size() != I.num_one_cells()) {
      return fail("shape", {});
    }
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      if (!same_category(K.legs[i].source(), F.on0(i))
          || !same_category(K.legs[i].target(), K.apex)) {
        return fail("shape", {I.zero_name(i)});
      }
    }
    for (one_t d : I.one_cells()) {
      auto const& l = K.cells[d];
      if (!(l.source() == compose(K.legs[I.tgt(d)], F.on1(d)))
          || !(l.target() == K.legs[I.src(d)])) {
        return fail("shape", {I.one_name(d)});
      }
    }
    for (one_t d : I.one_cells()) {
      ++stats.instances;
      if (S.contains(d) && !K.cells[d].is_invertible()) {
        return fail("invertibility", {I.one_name(d)});
      }
    }
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      ++stats.instances;
      one_t u = I.unit(i);
      for (obj_t a = 0; a < F.on0(i)->num_objects(); ++a) {
        if (X.compose(K.cells[u][a],
                      K.legs[i].map_morphism(F.unit_at(i, a)))
            != X.identity(K.legs[i](a))) {
          return fail("unit", {I.zero_name(i)});
        }
      }
    }
    for (one_t d : I.one_cells()) {
      for (zero_t k = 0; k < I.num_zero_cells(); ++k) {
        for (one_t e : I.one_cells(I.tgt(d), k)) {
          ++stats.instances;
          one_t ed = I.comp(e, d);
          for (obj_t a = 0; a < F.on0(I.src(d))->num_objects(); ++a) {
            mor_t lhs = X.compose(K.cells[ed][a],
                                  K.legs[k].map_morphism(F.comp_at(e, d, a)));
            mor_t rhs = X.compose(K.cells[d][a], K.cells[e][F.on1(d)(a)]);
            if (lhs != rhs) {
              return fail("composition", {I.one_name(e), I.one_name(d)});
            }
          }
        }
      }
    }
    for (two_t al : I.two_cells()) {
      ++stats.instances;
      one_t d = I.dom2(al), d2 = I.cod2(al);
      zero_t j = I.tgt(d);
      for (obj_t a = 0; a < F.on0(I.src(d))->num_objects(); ++a) {
        if (X.compose(K.cells[d2][a], K.legs[j].map_morphism(F.on2(al)[a]))
            != K.cells[d][a]) {
          return fail("2-cell", {I.two_name(al)});
        }
      }
    }
    return Verdict::positive("sigma-cocone", {}, stats);
  }

  Cocone colimit_cocone(ColimitCat const& C) {
    return {C.result, C.legs, C.transitions};
  }

  Factorization factor_cocone(ColimitCat const& C, Cocone const& K) {
    auto v = check_sigma_cocone(C.diagram, C.sigma, K);
    if (!v.outcome()) {
      throw ValidationError("invalid σ-cocone: "
                            + v.counterexample().condition + " fails");
    }
    auto const&        I = *C.index;
    auto const&        X = *K.apex;
    std::vector<obj_t> obj;
    for (auto [i, a] : C.objects) {
      obj.push_back(K.legs[i](a));
    }
    auto value = [&](Premorphism const& p) {
      zero_t j   = I.tgt(p.left);
      mor_t  inv = X.inverse(K.cells[p.left][p.a1]);
      return X.compose(K.cells[p.right][p.a2],
                       X.compose(K.legs[j].map_morphism(p.cell), inv));
    };
    std::vector<mor_t> mor(C.result->num_morphisms(), UNDEFINED);
    auto const&        Q = *C.quotient;
    for (std::uint32_t k = 0; k < Q.pre.size(); ++k) {
      mor_t v = value(Q.outer(Q.pre[k]));
      mor_t c = Q.cls[k];
      if (mor[c] == UNDEFINED) {
        mor[c] = v;
      } else if (mor[c] != v) {
        throw ValidationError(
            "cocone separates identified premorphisms "
            + premorphism_label(I, C.diagram, Q.outer(Q.pre[k])));
      }
    }
    Factorization out;
    out.functor = Functor::make(C.result, K.apex, std::move(obj), std::move(mor));
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      auto               HQ = compose(out.functor, C.legs[i]);
      std::vector<mor_t> ids;
      for (obj_t a = 0; a < C.diagram.on0(i)->num_objects(); ++a) {
        ids.push_back(X.identity(K.legs[i](a)));
      }
      out.comparisons.push_back(NatTrans::make(HQ, K.legs[i], std::move(ids)));
    }
    return out;
  }

  Functor map_colimit(ColimitCat const&           CF,
                      ColimitCat const&           CG,
                      std::vector<Functor> const& P) {
    auto const& I = *CF.index;
    auto const& F = CF.diagram;
    auto const& G = CG.diagram;
    if (CF.index != CG.index || !(CF.sigma == CG.sigma)
        || P.size() != I.num_zero_cells()) {
      throw PreconditionError("colimits over different indexes");
    }
    std::vector<std::string> errors;
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      if (!same_category(P[i].source(), F.on0(i))
          || !same_category(P[i].target(), G.on0(i))) {
        errors.push_back("component at " + I.zero_name(i) + " has wrong type");
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    for (one_t d : I.one_cells()) {
      if (!(compose(G.on1(d), P[I.src(d)]) == compose(P[I.tgt(d)], F.on1(d)))) {
        errors.push_back("not strictly natural at " + I.one_name(d));
      }
      for (zero_t k = 0; k < I.num_zero_cells(); ++k) {
        for (one_t e : I.one_cells(I.tgt(d), k)) {
          for (obj_t a = 0; a < F.on0(I.src(d))->num_objects(); ++a) {
            if (P[k].map_morphism(F.comp_at(e, d, a))
                != G.comp_at(e, d, P[I.src(d)](a))) {
              errors.push_back("does not preserve the comparison at "
                               + I.one_name(e) + " o " + I.one_name(d));
              break;
            }
          }
        }
      }
    }
    for (zero_t i = 0; i < I.num_zero_cells(); ++i) {
      for (obj_t a = 0; a < F.on0(i)->num_objects(); ++a) {
        if (P[i].map_morphism(F.unit_at(i, a)) != G.unit_at(i, P[i](a))) {
          errors.push_back("does not preserve the unit at " + I.zero_name(i));
          break;
        }
      }
    }
    for (two_t al : I.two_cells()) {
      zero_t i = I.src(I.dom2(al)), j = I.tgt(I.dom2(al));
      for (obj_t a = 0; a < F.on0(i)->num_objects(); ++a) {
        if (P[j].map_morphism(F.on2(al)[a]) != G.on2(al)[P[i](a)]) {
          errors.push_back("not strictly natural at " + I.two_name(al));
          break;
        }
      }
    }
    if (!errors.empty()) {
      throw ValidationError(errors);
    }
    std::vector<obj_t> obj;
    for (auto [i, a] : CF.objects) {
      obj.push_back(CG.object(i, P[i](a)));
    }
    std::vector<mor_t> mor;
    for (auto const& p : CF.representatives) {
      zero_t j = I.tgt(p.left);
      mor.push_back(CG.class_of({p.i1, P[p.i1](p.a1), p.i2, P[p.i2](p.a2),
                                 p.left, p.right,
                                 P[j].map_morphism(p.cell)}));
    }
    return Functor::make(CF.result, CG.result, std::move(obj), std::move(mor));
  }

}  // namespace sigmacat
