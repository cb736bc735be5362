#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "corrtree/error.hpp"
#include "corrtree/matrix.hpp"

namespace corrtree {

enum class Linkage { single, average };

constexpr std::string_view to_string(Linkage kind) noexcept {
  return kind == Linkage::single ? "single" : "average";
}

/// One agglomeration step. Leaves are ids 0..N-1 and the k-th merge
/// (0-based) creates cluster id N+k; left < right.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;

  bool operator==(const Merge&) const = default;
};

struct Dendrogram {
  std::vector<std::string> entities;
  std::vector<Merge> merges;  // N-1 entries, heights non-decreasing
  Linkage linkage = Linkage::single;

  std::size_t n_leaves() const noexcept { return entities.size(); }
  bool operator==(const Dendrogram&) const = default;
};

/// Leaf indices under every node id, leaves first, then one entry per merge.
/// Each member list is sorted ascending.
inline std::vector<std::vector<std::size_t>> node_members(const Dendrogram& tree) {
  const std::size_t n = tree.n_leaves();
  std::vector<std::vector<std::size_t>> members(n + tree.merges.size());
  for (std::size_t i = 0; i < n; ++i) members[i] = {i};
  for (std::size_t k = 0; k < tree.merges.size(); ++k) {
    const auto& m = tree.merges[k];
    auto& out = members[n + k];
    out.reserve(members[m.left].size() + members[m.right].size());
    std::merge(members[m.left].begin(), members[m.left].end(), members[m.right].begin(),
               members[m.right].end(), std::back_inserter(out));
  }
  return members;
}

/// Cophenetic distances: the height at which two leaves first share a cluster.
inline Matrix<double> cophenetic(const Dendrogram& tree) {
  const std::size_t n = tree.n_leaves();
  Matrix<double> out(n, n, 0.0);
  auto members = node_members(tree);
  for (const auto& m : tree.merges) {
    for (std::size_t a : members[m.left]) {
      for (std::size_t b : members[m.right]) {
        out(a, b) = m.height;
        out(b, a) = m.height;
      }
    }
  }
  return out;
}

struct ClusterCount {
  std::size_t k;
};
struct CutHeight {
  double height;
};
using CutSelector = std::variant<ClusterCount, CutHeight>;

/// Partition obtained by cutting a dendrogram. Clusters are ordered by their
/// first entity (input order) and list members in input order.
struct ClusterCut {
  Linkage linkage = Linkage::single;
  std::optional<std::size_t> k;
  std::optional<double> threshold;
  std::vector<std::vector<std::string>> clusters;

  bool operator==(const ClusterCut&) const = default;
};

namespace detail {

inline ClusterCut partition_after(const Dendrogram& tree, std::size_t applied) {
  const std::size_t n = tree.n_leaves();
  auto members = node_members(tree);
  std::vector<bool> absorbed(n + applied, false);
  for (std::size_t k = 0; k < applied; ++k) {
    absorbed[tree.merges[k].left] = true;
    absorbed[tree.merges[k].right] = true;
  }
  std::vector<const std::vector<std::size_t>*> roots;
  for (std::size_t id = 0; id < n + applied; ++id) {
    if (!absorbed[id]) roots.push_back(&members[id]);
  }
  std::sort(roots.begin(), roots.end(),
            [](const auto* a, const auto* b) { return a->front() < b->front(); });
  ClusterCut cut;
  cut.linkage = tree.linkage;
  for (const auto* r : roots) {
    std::vector<std::string> labels;
    for (std::size_t leaf : *r) labels.push_back(tree.entities[leaf]);
    cut.clusters.push_back(std::move(labels));
  }
  return cut;
}

}  // namespace detail

/// Cuts a dendrogram either into `k` clusters (the first N-k merges are kept,
/// so ties at the boundary favour earlier merges) or at a height (every merge
/// with height <= threshold is kept).
inline ClusterCut cut(const Dendrogram& tree, CutSelector selector) {
  const std::size_t n = tree.n_leaves();
  if (n == 0 || tree.merges.size() + 1 != n) {
    throw Error(ErrorCode::range_error, "dendrogram must have exactly N-1 merges");
  }
  if (const auto* count = std::get_if<ClusterCount>(&selector)) {
    if (count->k < 1 || count->k > n) {
      throw Error(ErrorCode::range_error, "cluster count " + std::to_string(count->k) +
                                              " outside [1, " + std::to_string(n) + "]");
    }
    ClusterCut out = detail::partition_after(tree, n - count->k);
    out.k = count->k;
    return out;
  }
  const double h = std::get<CutHeight>(selector).height;
  std::size_t applied = 0;
  while (applied < tree.merges.size() && tree.merges[applied].height <= h) ++applied;
  ClusterCut out = detail::partition_after(tree, applied);
  out.threshold = h;
  return out;
}

}  // namespace corrtree
