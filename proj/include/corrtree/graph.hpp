#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "corrtree/agglomerate.hpp"
#include "corrtree/correlation.hpp"
#include "corrtree/dendrogram.hpp"
#include "corrtree/disjoint_set.hpp"
#include "corrtree/error.hpp"
#include "corrtree/matrix.hpp"

namespace corrtree {

/// Tree edge between entity indices a < b.
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
  std::optional<double> bootstrap;

  bool operator==(const Edge&) const = default;
};

/// N-1 edges, canonical: a < b and sorted by (weight, a, b).
struct SpanningTree {
  std::vector<std::string> entities;
  std::vector<Edge> edges;

  double total_weight() const {
    return std::accumulate(edges.begin(), edges.end(), 0.0,
                           [](double s, const Edge& e) { return s + e.weight; });
  }
  bool operator==(const SpanningTree&) const = default;
};

/// Maximum edge weight on the tree path between each pair of entities.
struct UltrametricMatrix {
  std::vector<std::string> entities;
  Matrix<double> values;

  bool operator==(const UltrametricMatrix&) const = default;
};

/// Kruskal's algorithm on the complete graph. Candidate edges are taken in
/// (weight, a, b) order, so equal distances resolve toward earlier entities.
inline SpanningTree kruskal_mst(const DistanceMatrix& dist) {
  const std::size_t n = dist.size();
  if (n < 2) {
    throw Error(ErrorCode::too_few_entities,
                "a spanning tree needs at least 2 entities, got " + std::to_string(n));
  }
  std::vector<Edge> candidates;
  candidates.reserve(n * (n - 1) / 2);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) candidates.push_back({a, b, dist(a, b), std::nullopt});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.weight, x.a, x.b) < std::tie(y.weight, y.a, y.b);
  });

  SpanningTree tree{dist.entities, {}};
  tree.edges.reserve(n - 1);
  DisjointSet components(n);
  for (const Edge& e : candidates) {
    if (components.unite(e.a, e.b)) {
      tree.edges.push_back(e);
      if (tree.edges.size() == n - 1) break;
    }
  }
  return tree;
}

/// Subdominant ultrametric of a spanning tree: one depth-first walk per
/// source carrying the running path maximum, O(N^2) overall.
inline UltrametricMatrix subdominant_ultrametric(const SpanningTree& tree) {
  const std::size_t n = tree.entities.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacent(n);
  for (const Edge& e : tree.edges) {
    adjacent[e.a].emplace_back(e.b, e.weight);
    adjacent[e.b].emplace_back(e.a, e.weight);
  }
  UltrametricMatrix out{tree.entities, Matrix<double>(n, n, 0.0)};
  struct Frame {
    std::size_t node;
    std::size_t parent;
    double max;
  };
  std::vector<Frame> stack;
  for (std::size_t source = 0; source < n; ++source) {
    stack.push_back({source, source, 0.0});
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      out.values(source, f.node) = f.max;
      for (auto [next, w] : adjacent[f.node]) {
        if (next != f.parent) stack.push_back({next, f.node, std::max(f.max, w)});
      }
    }
  }
  return out;
}

/// Single-linkage hierarchical tree: cluster distance is the minimum
/// cross-pair distance. Computed by direct agglomeration, independent of the
/// spanning tree; its cophenetic matrix equals the subdominant ultrametric.
inline Dendrogram single_linkage(const DistanceMatrix& dist) {
  return detail::agglomerate(dist, Linkage::single,
                             [](double da, double db, std::size_t, std::size_t) {
                               return std::min(da, db);
                             });
}

}  // namespace corrtree
