#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "corrtree/csv.hpp"
#include "corrtree/error.hpp"
#include "corrtree/format.hpp"
#include "corrtree/matrix.hpp"
#include "corrtree/panel.hpp"

namespace corrtree {

/// Symmetric Pearson correlations with unit diagonal, entries in [-1, 1].
struct CorrelationMatrix {
  std::vector<std::string> entities;
  Matrix<double> values;

  std::size_t size() const noexcept { return entities.size(); }
  bool operator==(const CorrelationMatrix&) const = default;
};

/// Symmetric distances d = sqrt(2 (1 - C)) in [0, 2] with zero diagonal.
struct DistanceMatrix {
  std::vector<std::string> entities;
  Matrix<double> values;

  std::size_t size() const noexcept { return entities.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values(i, j); }
  bool operator==(const DistanceMatrix&) const = default;
};

/// Pearson correlation of every pair of return series.
///
/// Each series is mean-centred once; each pair then accumulates its cross
/// products in time order, so results do not depend on evaluation order.
/// Population and sample moments give the same ratio, the normalisation
/// cancels between numerator and denominator.
inline CorrelationMatrix pearson(const ReturnMatrix& returns) {
  const std::size_t n = returns.n_entities();
  const std::size_t len = returns.n_observations();
  if (len < 2) {
    throw Error(ErrorCode::insufficient_data, "correlation needs at least 2 observations per series");
  }

  Matrix<double> centred(n, len);
  std::vector<double> sum_sq(n);
  std::vector<std::string> degenerate;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = returns.returns.row(i);
    double sum = 0.0;
    for (double v : row) sum += v;
    const double mean = sum / static_cast<double>(len);
    double ss = 0.0;
    for (std::size_t t = 0; t < len; ++t) {
      const double c = row[t] - mean;
      centred(i, t) = c;
      ss += c * c;
    }
    const bool constant = std::all_of(row.begin(), row.end(), [&](double v) { return v == row[0]; });
    if (constant || !(ss > 0.0)) degenerate.push_back(returns.entities[i]);
    sum_sq[i] = ss;
  }
  if (!degenerate.empty()) {
    std::string names;
    for (const auto& d : degenerate) names += (names.empty() ? "" : ", ") + d;
    throw Error(ErrorCode::degenerate_series, "zero-variance return series: " + names);
  }

  CorrelationMatrix corr{returns.entities, Matrix<double>(n, n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    corr.values(i, i) = 1.0;
    auto xi = centred.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto xj = centred.row(j);
      double cross = 0.0;
      for (std::size_t t = 0; t < len; ++t) cross += xi[t] * xj[t];
      const double c = std::clamp(cross / std::sqrt(sum_sq[i] * sum_sq[j]), -1.0, 1.0);
      corr.values(i, j) = c;
      corr.values(j, i) = c;
    }
  }
  return corr;
}

inline double correlation_to_distance(double c) {
  return std::sqrt(2.0 * (1.0 - std::clamp(c, -1.0, 1.0)));
}

inline DistanceMatrix to_distance(const CorrelationMatrix& corr) {
  const std::size_t n = corr.size();
  DistanceMatrix dist{corr.entities, Matrix<double>(n, n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist.values(i, j) = i == j ? 0.0 : correlation_to_distance(corr.values(i, j));
    }
  }
  return dist;
}

/// Square CSV with a label header row and column; values round-trip exactly.
inline void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels,
                             const Matrix<double>& values) {
  out << "entity";
  for (const auto& l : labels) {
    out << ',';
    csv::write_field(out, l);
  }
  out << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    csv::write_field(out, labels[i]);
    for (std::size_t j = 0; j < labels.size(); ++j) out << ',' << format_roundtrip(values(i, j));
    out << '\n';
  }
}

}  // namespace corrtree
