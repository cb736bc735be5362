#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <tuple>
#include <vector>

#include "corrtree/correlation.hpp"
#include "corrtree/dendrogram.hpp"
#include "corrtree/error.hpp"

namespace corrtree::detail {

// Generic agglomerative clustering over a dense distance matrix with a
// Lance-Williams style update. Each step scans all active pairs, O(N^3) total.
// Candidate merges are ordered by (distance, smaller id, larger id).
template <typename Update>
Dendrogram agglomerate(const DistanceMatrix& dist, Linkage kind, Update update) {
  const std::size_t n = dist.size();
  if (n < 2) {
    throw Error(ErrorCode::too_few_entities,
                "clustering needs at least 2 entities, got " + std::to_string(n));
  }
  Matrix<double> d = dist.values;
  std::vector<std::size_t> id(n);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = active[i] = i;

  Dendrogram tree{dist.entities, {}, kind};
  tree.merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    auto best = std::make_tuple(std::numeric_limits<double>::infinity(),
                                std::numeric_limits<std::size_t>::max(),
                                std::numeric_limits<std::size_t>::max());
    std::size_t bi = 0, bj = 0;
    for (std::size_t p = 0; p < active.size(); ++p) {
      for (std::size_t q = p + 1; q < active.size(); ++q) {
        const std::size_t i = active[p], j = active[q];
        auto key = std::make_tuple(d(i, j), std::min(id[i], id[j]), std::max(id[i], id[j]));
        if (key < best) {
          best = key;
          bi = i;
          bj = j;
        }
      }
    }
    const double height = std::get<0>(best);
    tree.merges.push_back({std::get<1>(best), std::get<2>(best), height, size[bi] + size[bj]});

    for (std::size_t m : active) {
      if (m == bi || m == bj) continue;
      const double merged = update(d(bi, m), d(bj, m), size[bi], size[bj]);
      d(bi, m) = merged;
      d(m, bi) = merged;
    }
    size[bi] += size[bj];
    id[bi] = n + step;
    active.erase(std::find(active.begin(), active.end(), bj));
  }
  return tree;
}

}  // namespace corrtree::detail
