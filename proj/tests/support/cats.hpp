#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "sigmacat/fincat.hpp"

namespace sigmacat::test {

  inline CatPtr share(FinCat C) {
    return std::make_shared<FinCat const>(std::move(C));
  }

  inline CatPtr make_cat(std::vector<std::string>                 objects,
                         std::vector<FinCatData::Morphism>        morphisms,
                         std::vector<std::array<std::string, 3>> composition
                         = {}) {
    FinCatData data;
    data.objects     = std::move(objects);
    data.morphisms   = std::move(morphisms);
    data.composition = std::move(composition);
    return share(validate_fincat(data));
  }

  inline CatPtr terminal() {
    return share(terminal_category());
  }

  inline CatPtr discrete(std::size_t n) {
    return share(discrete_category(n));
  }

  inline CatPtr walking_arrow() {
    return make_cat({"a", "b"}, {{"f", "a", "b"}});
  }

  inline CatPtr walking_iso() {
    return make_cat({"a", "b"},
                    {{"f", "a", "b"}, {"g", "b", "a"}},
                    {{"g", "f", "1_a"}, {"f", "g", "1_b"}});
  }

  inline CatPtr parallel_pair() {
    return make_cat({"a", "b"}, {{"f", "a", "b"}, {"g", "a", "b"}});
  }

  // The group Z/2 as a one-object category.
  inline CatPtr z2() {
    return make_cat({"*"}, {{"s", "*", "*"}}, {{"s", "s", "1_*"}});
  }

  // The chain 0 < 1 < ... < n-1 as a category.
  inline CatPtr chain(std::size_t n) {
    std::vector<std::string>                 objs;
    std::vector<FinCatData::Morphism>        mors;
    std::vector<std::array<std::string, 3>> comp;
    auto name = [](std::size_t i, std::size_t j) {
      return "m" + std::to_string(i) + std::to_string(j);
    };
    for (std::size_t i = 0; i < n; ++i) {
      objs.push_back(std::to_string(i));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        mors.push_back({name(i, j), objs[i], objs[j]});
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          comp.push_back({name(j, k), name(i, j), name(i, k)});
        }
      }
    }
    return make_cat(objs, mors, comp);
  }

  // The poset generated by `covers` (x ≤ y), with morphisms "x<y".
  inline CatPtr poset(std::vector<std::string>                         names,
                      std::vector<std::pair<std::string, std::string>> covers) {
    std::size_t                    n = names.size();
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
    auto idx = [&](std::string const& x) {
      return static_cast<std::size_t>(
          std::find(names.begin(), names.end(), x) - names.begin());
    };
    for (auto const& [x, y] : covers) {
      le[idx(x)][idx(y)] = true;
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          le[i][j] = le[i][j] || (le[i][k] && le[k][j]);
        }
      }
    }
    auto nm = [&](std::size_t i, std::size_t j) {
      return names[i] + "<" + names[j];
    };
    std::vector<FinCatData::Morphism>        mors;
    std::vector<std::array<std::string, 3>> comp;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && le[i][j]) {
          mors.push_back({nm(i, j), names[i], names[j]});
          for (std::size_t k = 0; k < n; ++k) {
            if (k != j && k != i && le[j][k]) {
              comp.push_back({nm(j, k), nm(i, j), nm(i, k)});
            }
          }
        }
      }
    }
    return make_cat(names, mors, comp);
  }

}  // namespace sigmacat::test
