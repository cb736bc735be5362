#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "corrtree/correlation.hpp"
#include "corrtree/error.hpp"
#include "corrtree/graph.hpp"
#include "corrtree/panel.hpp"

namespace corrtree {

/// Identifies the resampling stream. Bump the version if the derivation of
/// indices from (seed, replicate) ever changes.
inline constexpr const char* kBootstrapRng = "mt19937_64/seed_seq(seed,replicate)/mod-rejection/v1";

struct EdgeReliability {
  std::string a;
  std::string b;
  std::size_t hits = 0;   // valid replicates whose tree contains the edge
  double fraction = 0.0;  // hits / valid replicates

  bool operator==(const EdgeReliability&) const = default;
};

struct BootstrapReport {
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  std::string rng = kBootstrapRng;
  std::size_t excluded_replicates = 0;
  std::vector<EdgeReliability> per_edge;  // in the original tree's edge order

  std::size_t valid_replicates() const noexcept { return replicates - excluded_replicates; }
  bool operator==(const BootstrapReport&) const = default;
};

/// Time indices drawn uniformly with replacement for one replicate. The
/// stream depends only on (seed, replicate), never on scheduling.
inline std::vector<std::size_t> resample_indices(std::uint64_t seed, std::size_t replicate,
                                                 std::size_t length) {
  const auto r = static_cast<std::uint64_t>(replicate);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
  std::mt19937_64 engine(seq);
  const std::uint64_t n = length;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::vector<std::size_t> out(length);
  for (auto& idx : out) {
    std::uint64_t u;
    do {
      u = engine();
    } while (u >= limit);
    idx = static_cast<std::size_t>(u % n);
  }
  return out;
}

/// Whole cross-sections picked by `indices`; every entity shares them.
inline ReturnMatrix resample_columns(const ReturnMatrix& returns,
                                     const std::vector<std::size_t>& indices) {
  ReturnMatrix out{returns.entities, Matrix<double>(returns.n_entities(), indices.size()),
                   returns.lag};
  for (std::size_t i = 0; i < returns.n_entities(); ++i) {
    auto src = returns.returns.row(i);
    auto dst = out.returns.row(i);
    for (std::size_t t = 0; t < indices.size(); ++t) dst[t] = src[indices[t]];
  }
  return out;
}

/// Fraction of bootstrap replicates whose spanning tree keeps each edge of
/// `original`. Replicates with a zero-variance resampled series are skipped
/// and counted; more than half skipped is an error. Results are identical
/// for any `workers` value.
inline BootstrapReport bootstrap_links(const ReturnMatrix& returns, const SpanningTree& original,
                                       std::size_t replicates, std::uint64_t seed,
                                       unsigned workers = 1) {
  if (replicates < 1) throw Error(ErrorCode::range_error, "replicates must be at least 1");
  const std::size_t n = returns.n_entities();
  if (original.entities != returns.entities || original.edges.size() + 1 != n) {
    throw Error(ErrorCode::inconsistent_report,
                "spanning tree does not match the return matrix entities");
  }
  const std::size_t m = original.edges.size();

  // presence[r * m + e]: replicate r contains original edge e. valid[r]: not skipped.
  std::vector<unsigned char> presence(replicates * m, 0);
  std::vector<unsigned char> valid(replicates, 0);

  std::vector<std::size_t> edge_slot(n * n, m);
  for (std::size_t e = 0; e < m; ++e) {
    edge_slot[original.edges[e].a * n + original.edges[e].b] = e;
  }

  auto run_replicate = [&](std::size_t r) {
    auto sample = resample_columns(returns, resample_indices(seed, r, returns.n_observations()));
    SpanningTree tree;
    try {
      tree = kruskal_mst(to_distance(pearson(sample)));
    } catch (const Error& err) {
      if (err.code() == ErrorCode::degenerate_series) return;
      throw;
    }
    valid[r] = 1;
    for (const Edge& e : tree.edges) {
      const std::size_t slot = edge_slot[e.a * n + e.b];
      if (slot < m) presence[r * m + slot] = 1;
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(replicates)));
  if (threads == 1) {
    for (std::size_t r = 0; r < replicates; ++r) run_replicate(r);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t r = w; r < replicates; r += threads) run_replicate(r);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  BootstrapReport report;
  report.replicates = replicates;
  report.seed = seed;
  std::size_t valid_count = 0;
  for (auto v : valid) valid_count += v;
  report.excluded_replicates = replicates - valid_count;
  if (report.excluded_replicates * 2 > replicates) {
    throw Error(ErrorCode::degenerate_bootstrap,
                std::to_string(report.excluded_replicates) + " of " + std::to_string(replicates) +
                    " replicates had a zero-variance series");
  }
  for (std::size_t e = 0; e < m; ++e) {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < replicates; ++r) hits += presence[r * m + e];
    report.per_edge.push_back({original.entities[original.edges[e].a],
                               original.entities[original.edges[e].b], hits,
                               static_cast<double>(hits) / static_cast<double>(valid_count)});
  }
  return report;
}

/// Copies `tree` with every edge's bootstrap value taken from `report`.
inline SpanningTree annotate(const SpanningTree& tree, const BootstrapReport& report) {
  if (report.per_edge.size() != tree.edges.size()) {
    throw Error(ErrorCode::inconsistent_report,
                "report has " + std::to_string(report.per_edge.size()) + " edges, tree has " +
                    std::to_string(tree.edges.size()));
  }
  std::set<std::pair<std::string, std::string>> seen;
  SpanningTree out = tree;
  for (Edge& e : out.edges) {
    const auto& a = tree.entities[e.a];
    const auto& b = tree.entities[e.b];
    auto it = std::find_if(report.per_edge.begin(), report.per_edge.end(),
                           [&](const EdgeReliability& r) { return r.a == a && r.b == b; });
    if (it == report.per_edge.end() || !seen.emplace(a, b).second) {
      throw Error(ErrorCode::inconsistent_report, "no unique reliability entry for edge " + a + "-" + b);
    }
    e.bootstrap = it->fraction;
  }
  return out;
}

}  // namespace corrtree
