#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "corrtree/disjoint_set.hpp"
#include "corrtree/graph.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace corrtree;

namespace {

DistanceMatrix literal(std::vector<std::string> names, const oracle::Table& t) {
  DistanceMatrix d{std::move(names), Matrix<double>(t.size(), t.size())};
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j) d.values(i, j) = t[i][j];
  return d;
}

// Fixed 4-entity instance; the unique minimum is 0-1, 1-2, 2-3 with weight 1.5.
DistanceMatrix four_entities() {
  return literal({"a", "b", "c", "d"}, {{0.0, 0.3, 0.9, 1.1},
                                        {0.3, 0.0, 0.5, 1.4},
                                        {0.9, 0.5, 0.0, 0.7},
                                        {1.1, 1.4, 0.7, 0.0}});
}

std::set<std::pair<std::size_t, std::size_t>> edge_set(const SpanningTree& t) {
  std::set<std::pair<std::size_t, std::size_t>> s;
  for (const auto& e : t.edges) s.emplace(e.a, e.b);
  return s;
}

}  // namespace

TEST(DisjointSet, UnionAndFind) {
  DisjointSet s(6);
  EXPECT_EQ(s.set_count(), 6u);
  EXPECT_TRUE(s.unite(0, 1));
  EXPECT_TRUE(s.unite(2, 3));
  EXPECT_FALSE(s.unite(1, 0));
  EXPECT_TRUE(s.unite(1, 3));
  EXPECT_TRUE(s.same(0, 2));
  EXPECT_FALSE(s.same(0, 4));
  EXPECT_EQ(s.set_count(), 3u);
}

TEST(Kruskal, TwoEntities) {
  auto d = literal({"a", "b"}, {{0.0, 0.8}, {0.8, 0.0}});
  auto t = kruskal_mst(d);
  ASSERT_EQ(t.edges.size(), 1u);
  EXPECT_EQ(t.edges[0].a, 0u);
  EXPECT_EQ(t.edges[0].b, 1u);
  EXPECT_EQ(t.edges[0].weight, 0.8);
  EXPECT_FALSE(t.edges[0].bootstrap.has_value());
}

TEST(Kruskal, TooFewEntities) {
  auto d = literal({"a"}, {{0.0}});
  try {
    kruskal_mst(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::too_few_entities);
  }
}

TEST(Kruskal, FourEntitiesAgainstAllSixteenTrees) {
  auto d = four_entities();
  std::size_t trees = 0;
  const double brute = oracle::brute_force_mst_weight(synthetic::table(d.values), &trees);
  EXPECT_EQ(trees, 16u);
  EXPECT_DOUBLE_EQ(brute, 1.5);
  auto t = kruskal_mst(d);
  EXPECT_DOUBLE_EQ(t.total_weight(), brute);
  EXPECT_EQ(edge_set(t), (std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}, {2, 3}}));
}

TEST(Kruskal, RandomInstancesAreOptimalAndCanonical) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + trial % 4;
    auto d = synthetic::random_distances(n, rng);
    auto t = kruskal_mst(d);
    ASSERT_EQ(t.edges.size(), n - 1);
    EXPECT_NEAR(t.total_weight(), oracle::brute_force_mst_weight(synthetic::table(d.values)), 1e-12);
    DisjointSet s(n);
    for (std::size_t k = 0; k < t.edges.size(); ++k) {
      const auto& e = t.edges[k];
      EXPECT_LT(e.a, e.b);
      EXPECT_EQ(e.weight, d(e.a, e.b));
      EXPECT_TRUE(s.unite(e.a, e.b)) << "cycle";
      if (k > 0) {
        const auto& p = t.edges[k - 1];
        EXPECT_TRUE(std::tie(p.weight, p.a, p.b) < std::tie(e.weight, e.a, e.b));
      }
    }
    for (std::size_t i = 1; i < n; ++i) EXPECT_EQ(s.find(i), s.find(0));
  }
}

TEST(Kruskal, SixtyEntitiesGiveFiftyNineEdges) {
  std::mt19937_64 rng(47);
  auto t = kruskal_mst(synthetic::random_distances(60, rng));
  EXPECT_EQ(t.edges.size(), 59u);
}

TEST(Kruskal, TiesResolveTowardEarlierEntities) {
  // All distances equal: the tree is the star centred on the first entity.
  DistanceMatrix d{synthetic::labels(5), Matrix<double>(5, 5, 1.0)};
  for (std::size_t i = 0; i < 5; ++i) d.values(i, i) = 0.0;
  auto t = kruskal_mst(d);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(t.edges[k].a, 0u);
    EXPECT_EQ(t.edges[k].b, k + 1);
  }
  EXPECT_EQ(kruskal_mst(d), t);
}

TEST(Kruskal, EdgeSetInvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng() % 10;
    auto d = synthetic::random_distances(n, rng);
    auto transformed = d;
    const double p = 0.2 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        transformed.values(i, j) = i == j ? 0.0 : std::exp(std::pow(d.values(i, j), p)) - 0.5;
    EXPECT_EQ(edge_set(kruskal_mst(d)), edge_set(kruskal_mst(transformed)));
  }
}

TEST(Kruskal, CutProperty) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng() % 8;
    auto d = synthetic::random_distances(n, rng);
    auto t = kruskal_mst(d);
    for (std::size_t removed = 0; removed < t.edges.size(); ++removed) {
      DisjointSet s(n);
      for (std::size_t k = 0; k < t.edges.size(); ++k)
        if (k != removed) s.unite(t.edges[k].a, t.edges[k].b);
      double crossing = 1e9;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (!s.same(i, j)) crossing = std::min(crossing, d(i, j));
      EXPECT_EQ(crossing, t.edges[removed].weight);
    }
  }
}

TEST(Ultrametric, PathTree) {
  SpanningTree t{{"a", "b", "c"}, {{0, 1, 1.0, {}}, {1, 2, 2.0, {}}}};
  auto u = subdominant_ultrametric(t);
  EXPECT_EQ(u.values(0, 2), 2.0);
  EXPECT_EQ(u.values(0, 1), 1.0);
  EXPECT_EQ(u.values(2, 2), 0.0);
}

TEST(Ultrametric, StarTree) {
  SpanningTree t{{"x", "p", "q"}, {{0, 1, 0.5, {}}, {0, 2, 0.9, {}}}};
  EXPECT_EQ(subdominant_ultrametric(t).values(1, 2), 0.9);
}

TEST(Ultrametric, EqualsSingleLinkageCopheneticAndMinimaxClosure) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    auto d = synthetic::random_distances(6, rng);
    auto u = subdominant_ultrametric(kruskal_mst(d));
    auto coph = cophenetic(single_linkage(d));
    auto minimax = oracle::minimax_closure(synthetic::table(d.values));
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        EXPECT_NEAR(u.values(i, j), coph(i, j), 1e-12);
        EXPECT_NEAR(u.values(i, j), minimax[i][j], 1e-12);
      }
  }
}

TEST(SingleLinkage, TwoEntities) {
  auto d = literal({"a", "b"}, {{0.0, 0.7}, {0.7, 0.0}});
  auto h = single_linkage(d);
  ASSERT_EQ(h.merges.size(), 1u);
  EXPECT_EQ(h.merges[0], (Merge{0, 1, 0.7, 2}));
  EXPECT_EQ(h.linkage, Linkage::single);
}

TEST(SingleLinkage, ThreePointWorkedExample) {
  auto d = literal({"a", "b", "c"}, {{0, 1, 2}, {1, 0, 3}, {2, 3, 0}});
  auto h = single_linkage(d);
  ASSERT_EQ(h.merges.size(), 2u);
  EXPECT_EQ(h.merges[0], (Merge{0, 1, 1.0, 2}));
  EXPECT_EQ(h.merges[1], (Merge{2, 3, 2.0, 3}));
}

TEST(SingleLinkage, UltrametricInequalityOnAllTriples) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    auto coph = cophenetic(single_linkage(synthetic::random_distances(8, rng)));
    std::size_t triples = 0;
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j)
        for (std::size_t k = 0; k < 8; ++k) {
          if (i == j || j == k || i == k) continue;
          ++triples;
          EXPECT_LE(coph(i, j), std::max(coph(i, k), coph(k, j)));
        }
    EXPECT_EQ(triples, 336u);
  }
}

TEST(SingleLinkage, MatchesNaiveOracleAndMonotone) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    auto d = synthetic::random_distances(9, rng);
    auto h = single_linkage(d);
    auto naive = oracle::naive_linkage(synthetic::table(d.values), false);
    ASSERT_EQ(h.merges.size(), naive.size());
    for (std::size_t k = 0; k < naive.size(); ++k) {
      EXPECT_EQ(h.merges[k].left, naive[k].left);
      EXPECT_EQ(h.merges[k].right, naive[k].right);
      EXPECT_EQ(h.merges[k].height, naive[k].height);
      EXPECT_EQ(h.merges[k].size, naive[k].size);
      if (k > 0) { EXPECT_LE(h.merges[k - 1].height, h.merges[k].height); }
    }
    EXPECT_EQ(h.merges.back().size, 9u);
  }
}

TEST(SingleLinkage, FirstMergeAtGlobalMinimum) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 10; ++trial) {
    auto d = synthetic::random_distances(12, rng);
    double lowest = 10.0;
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t j = i + 1; j < 12; ++j) lowest = std::min(lowest, d(i, j));
    EXPECT_EQ(single_linkage(d).merges.front().height, lowest);
  }
}
