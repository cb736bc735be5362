#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "corrtree/correlation.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace corrtree;

namespace {

ReturnMatrix two_series(const std::vector<double>& x, const std::vector<double>& y) {
  ReturnMatrix r{{"x", "y"}, Matrix<double>(2, x.size()), 1};
  for (std::size_t t = 0; t < x.size(); ++t) {
    r.returns(0, t) = x[t];
    r.returns(1, t) = y[t];
  }
  return r;
}

}  // namespace

TEST(Pearson, IdenticalSeries) {
  auto c = pearson(two_series({0.1, -0.3, 0.2, 0.5}, {0.1, -0.3, 0.2, 0.5}));
  EXPECT_EQ(c.values(0, 1), 1.0);
  EXPECT_EQ(c.values(0, 0), 1.0);
}

TEST(Pearson, Anticorrelated) {
  auto c = pearson(two_series({0.1, -0.3, 0.2, 0.5}, {-0.1, 0.3, -0.2, -0.5}));
  EXPECT_NEAR(c.values(0, 1), -1.0, 1e-15);
  EXPECT_GE(c.values(0, 1), -1.0);
}

TEST(Pearson, TextbookExample) {
  const std::vector<double> x{1, 2, 3, 4}, y{2, 1, 4, 3};
  // Oracle: sum of centred products 3, sums of squares 5 and 5 -> 3/5.
  const double expected = oracle::pearson(x, y);
  EXPECT_NEAR(expected, 0.6, 1e-15);
  auto c = pearson(two_series(x, y));
  EXPECT_NEAR(c.values(0, 1), expected, 1e-12);
  EXPECT_EQ(c.values(0, 1), c.values(1, 0));
}

TEST(Pearson, MatchesOracleOnRandomMatrices) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    auto r = synthetic::random_returns(2 + rng() % 9, 2 + rng() % 49, rng);
    auto c = pearson(r);
    auto expected = oracle::pearson_matrix(synthetic::table(r.returns));
    for (std::size_t i = 0; i < r.n_entities(); ++i)
      for (std::size_t j = 0; j < r.n_entities(); ++j) {
        EXPECT_NEAR(c.values(i, j), expected[i][j], 1e-12);
        EXPECT_EQ(c.values(i, j), c.values(j, i));
      }
  }
}

TEST(Pearson, ZeroVarianceNamesEntities) {
  ReturnMatrix r{{"flat", "ok", "also_flat"}, Matrix<double>(3, 4, 0.25), 1};
  r.returns(1, 0) = 0.5;
  try {
    pearson(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_series);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("flat"), std::string::npos);
    EXPECT_NE(msg.find("also_flat"), std::string::npos);
    EXPECT_EQ(msg.find("ok"), std::string::npos);
  }
}

TEST(Pearson, SingleObservationRejected) {
  ReturnMatrix r{{"x", "y"}, Matrix<double>(2, 1, 0.1), 1};
  EXPECT_THROW(pearson(r), Error);
}

TEST(Distance, FixedPoints) {
  EXPECT_EQ(correlation_to_distance(1.0), 0.0);
  EXPECT_EQ(correlation_to_distance(-1.0), 2.0);
  EXPECT_NEAR(correlation_to_distance(0.0), 1.41421356, 1e-8);
  EXPECT_NEAR(correlation_to_distance(0.0), std::sqrt(2.0), 1e-15);
}

TEST(Distance, MatrixShapeAndBounds) {
  std::mt19937_64 rng(23);
  auto r = synthetic::random_returns(7, 30, rng);
  auto c = pearson(r);
  auto d = to_distance(c);
  EXPECT_EQ(d.entities, r.entities);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(d.values(i, i), 0.0);
    for (std::size_t j = 0; j < 7; ++j) {
      EXPECT_GE(d.values(i, j), 0.0);
      EXPECT_LE(d.values(i, j), 2.0);
      EXPECT_EQ(d.values(i, j), d.values(j, i));
      if (i != j) { EXPECT_EQ(d.values(i, j), std::sqrt(2.0 * (1.0 - c.values(i, j)))); }
    }
  }
}

TEST(Distance, StrictlyDecreasingInCorrelation) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    EXPECT_EQ(a > b, correlation_to_distance(a) < correlation_to_distance(b)) << a << " " << b;
  }
}

TEST(Pearson, PermutationConjugates) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng() % 6, len = 10 + rng() % 20;
    auto r = synthetic::random_returns(n, len, rng);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    ReturnMatrix p{{}, Matrix<double>(n, len), 1};
    for (std::size_t i = 0; i < n; ++i) {
      p.entities.push_back(r.entities[perm[i]]);
      for (std::size_t t = 0; t < len; ++t) p.returns(i, t) = r.returns(perm[i], t);
    }
    auto c = pearson(r), cp = pearson(p);
    auto d = to_distance(c), dp = to_distance(cp);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(cp.values(i, j), c.values(perm[i], perm[j]));
        EXPECT_EQ(dp.values(i, j), d.values(perm[i], perm[j]));
      }
  }
}

// Regression with fixed seeds: shrinking the noise on a copy of a series
// drives the correlation toward one.
TEST(Pearson, ShrinkingNoiseApproachesIdentity) {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> base(40), noise(40);
  for (auto& v : base) v = g(rng);
  for (auto& v : noise) v = g(rng);
  double previous_d = 3.0;
  for (double amp : {1.0, 0.3, 0.1, 0.03, 0.01, 0.001}) {
    std::vector<double> copy(40);
    for (std::size_t t = 0; t < 40; ++t) copy[t] = base[t] + amp * noise[t];
    auto d = to_distance(pearson(two_series(base, copy)));
    EXPECT_LT(d.values(0, 1), previous_d);
    previous_d = d.values(0, 1);
  }
  EXPECT_LT(previous_d, 0.01);
}

TEST(MatrixCsv, RoundTripPrecision) {
  std::mt19937_64 rng(41);
  auto c = pearson(synthetic::random_returns(4, 12, rng));
  std::ostringstream out;
  write_matrix_csv(out, c.entities, c.values);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "entity,E0,E1,E2,E3");
  for (std::size_t i = 0; i < 4; ++i) {
    std::getline(in, line);
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    EXPECT_EQ(cell, c.entities[i]);
    for (std::size_t j = 0; j < 4; ++j) {
      std::getline(cells, cell, ',');
      EXPECT_EQ(*parse_double(cell), c.values(i, j));
    }
  }
}
