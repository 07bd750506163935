#pragma once

// Naive breadth-first decider. Builds the free algebra on two generators and
// the elementary matrices by brute-force closure, then composes squares
// pairwise level by level. Slow; only for the small catalog.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "oracles/square_oracle.hpp"

namespace oracle {

  struct BfsResult {
    bool                   yes = false;
    std::optional<int>     level;
    std::size_t            free_size = 0;
    std::size_t            e_size    = 0;
    std::size_t            last_size = 0;
    std::vector<std::size_t> sizes;
  };

  inline BfsResult bfs_decide(Raw const& a, int max_rounds = 64) {
    int const        n = a.n;
    std::vector<int> px, py;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        px.push_back(i);
        py.push_back(j);
      }
    }
    auto                                     free = naive_sg(a, {px, py});
    std::map<std::vector<int>, int>          id;
    std::vector<std::vector<int>>            elems(free.begin(), free.end());
    for (std::size_t i = 0; i < elems.size(); ++i) {
      id[elems[i]] = static_cast<int>(i);
    }
    BfsResult r;
    r.free_size = elems.size();

    auto cat = [&](std::vector<int> const& p, std::vector<int> const& q,
                   std::vector<int> const& s, std::vector<int> const& t) {
      std::vector<int> out = p;
      for (auto const* v : {&q, &s, &t}) {
        out.insert(out.end(), v->begin(), v->end());
      }
      return out;
    };
    std::set<std::vector<int>> gens = {
        cat(px, px, px, px), cat(py, py, py, py), cat(px, py, px, py),
        cat(py, px, py, px), cat(px, px, py, py), cat(py, py, px, px)};
    SqSet level;
    for (auto const& t : naive_sg(a, gens)) {
      Sq   q{};
      auto w = static_cast<std::size_t>(n * n);
      for (int k = 0; k < 4; ++k) {
        q[k] = id.at(std::vector<int>(t.begin() + k * w, t.begin() + (k + 1) * w));
      }
      level.insert(q);
    }
    r.e_size = level.size();
    Sq target{id.at(px), id.at(px), id.at(px), id.at(py)};
    r.sizes.push_back(level.size());
    for (int round = 0; round <= max_rounds; ++round) {
      if (level.count(target) != 0) {
        r.yes   = true;
        r.level = round;
        break;
      }
      auto next = naive_v(naive_h(level));
      r.sizes.push_back(next.size());
      if (next == level) {
        break;
      }
      level = std::move(next);
    }
    r.last_size = level.size();
    return r;
  }

}  // namespace oracle
