#pragma once

#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include "corrtree/csv.hpp"
#include "corrtree/error.hpp"
#include "corrtree/format.hpp"
#include "corrtree/matrix.hpp"

namespace corrtree {

/// Raw observations P_i(t): one row per entity, one column per period.
///
/// Invariants (established by load_panel):
///   - periods are strictly increasing consecutive integers;
///   - entity labels are unique and non-empty;
///   - every value is finite and strictly positive.
struct TimeSeriesPanel {
  std::vector<std::string> entities;
  std::vector<long long> periods;
  Matrix<double> values;  // entities.size() x periods.size()

  std::size_t n_entities() const noexcept { return entities.size(); }
  std::size_t n_periods() const noexcept { return periods.size(); }

  bool operator==(const TimeSeriesPanel&) const = default;
};

/// Log-returns R_i(t) = ln P_i(t + lag) - ln P_i(t).
struct ReturnMatrix {
  std::vector<std::string> entities;
  Matrix<double> returns;  // entities.size() x (T - lag)
  int lag = 1;

  std::size_t n_entities() const noexcept { return entities.size(); }
  std::size_t n_observations() const noexcept { return returns.cols(); }

  bool operator==(const ReturnMatrix&) const = default;
};

enum class MissingDataPolicy { drop_entity, error };

constexpr std::string_view to_string(MissingDataPolicy policy) noexcept {
  return policy == MissingDataPolicy::drop_entity ? "drop-entity" : "error";
}

struct Exclusion {
  std::string entity;
  std::string reason;

  bool operator==(const Exclusion&) const = default;
};

struct LoadedPanel {
  TimeSeriesPanel panel;
  std::vector<Exclusion> excluded;
};

namespace detail {

inline bool is_missing_token(std::string_view cell) {
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
  return cell.empty() || cell == "..";
}

[[noreturn]] inline void parse_fail(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorCode::parse_error, "line " + std::to_string(line) + ", column " +
                                          std::to_string(column) + ": " + what);
}

}  // namespace detail

/// Reads a panel CSV: header `period,<label>...`, then one row per period.
/// Empty cells and `..` are missing; zero, negative and non-finite values are
/// treated as missing too. Under drop-entity every entity with a missing value
/// is removed and reported; under error the first such value aborts.
inline LoadedPanel load_panel(std::istream& source,
                              MissingDataPolicy policy = MissingDataPolicy::drop_entity) {
  csv::Reader reader(source);
  std::vector<std::string> fields;
  if (!reader.next(fields)) {
    throw Error(ErrorCode::parse_error, "line 1: missing header row");
  }
  auto first = fields.front();
  if (first != "period") {
    detail::parse_fail(reader.line(), 1, "first header cell must be 'period', got '" + first + "'");
  }
  const std::size_t n = fields.size() - 1;
  std::vector<std::string> labels(fields.begin() + 1, fields.end());
  {
    std::unordered_set<std::string> seen;
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[j].empty()) detail::parse_fail(reader.line(), j + 2, "empty entity label");
      if (!seen.insert(labels[j]).second) {
        detail::parse_fail(reader.line(), j + 2, "duplicate entity label '" + labels[j] + "'");
      }
    }
  }

  std::vector<long long> periods;
  std::vector<std::vector<double>> columns(n);  // per entity; NaN marks missing
  std::vector<std::string> reasons(n);

  while (reader.next(fields)) {
    const std::size_t line = reader.line();
    if (fields.size() != n + 1) {
      detail::parse_fail(line, fields.size(), "expected " + std::to_string(n + 1) +
                                                  " cells, found " + std::to_string(fields.size()));
    }
    auto period = parse_integer(fields[0]);
    if (!period) detail::parse_fail(line, 1, "period '" + fields[0] + "' is not an integer");
    if (!periods.empty() && *period != periods.back() + 1) {
      detail::parse_fail(line, 1, "period " + std::to_string(*period) +
                                      " does not follow " + std::to_string(periods.back()));
    }
    periods.push_back(*period);

    for (std::size_t j = 0; j < n; ++j) {
      const std::string& cell = fields[j + 1];
      double value = std::nan("");
      std::string problem;
      if (detail::is_missing_token(cell)) {
        problem = "missing value";
      } else {
        auto parsed = parse_double(cell);
        if (!parsed) detail::parse_fail(line, j + 2, "non-numeric cell '" + cell + "'");
        if (!std::isfinite(*parsed) || *parsed <= 0.0) {
          problem = "non-positive or non-finite value " + cell;
        } else {
          value = *parsed;
        }
      }
      if (!problem.empty()) {
        std::string where = problem + " for period " + std::to_string(*period);
        if (policy == MissingDataPolicy::error) {
          throw Error(ErrorCode::missing_data, "line " + std::to_string(line) + ", column " +
                                                   std::to_string(j + 2) + ": entity '" +
                                                   labels[j] + "': " + where);
        }
        if (reasons[j].empty()) reasons[j] = where;
      }
      columns[j].push_back(value);
    }
  }

  LoadedPanel out;
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < n; ++j) {
    if (reasons[j].empty()) {
      kept.push_back(j);
    } else {
      out.excluded.push_back({labels[j], reasons[j]});
    }
  }
  if (kept.empty()) {
    throw Error(ErrorCode::empty_panel, n == 0 ? "panel has no entities"
                                               : "every entity was excluded for missing data");
  }
  out.panel.periods = std::move(periods);
  out.panel.values = Matrix<double>(kept.size(), out.panel.periods.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    out.panel.entities.push_back(labels[kept[i]]);
    for (std::size_t t = 0; t < out.panel.periods.size(); ++t) {
      out.panel.values(i, t) = columns[kept[i]][t];
    }
  }
  return out;
}

/// Writes the panel in the format accepted by load_panel. Values use the
/// shortest round-trip representation, so a write/read cycle is lossless.
inline void write_panel(std::ostream& out, const TimeSeriesPanel& panel) {
  out << "period";
  for (const auto& label : panel.entities) {
    out << ',';
    csv::write_field(out, label);
  }
  out << '\n';
  for (std::size_t t = 0; t < panel.n_periods(); ++t) {
    out << panel.periods[t];
    for (std::size_t i = 0; i < panel.n_entities(); ++i) {
      out << ',' << format_roundtrip(panel.values(i, t));
    }
    out << '\n';
  }
}

inline ReturnMatrix log_returns(const TimeSeriesPanel& panel, int lag = 1) {
  if (lag < 1) {
    throw Error(ErrorCode::range_error, "lag must be a positive integer, got " + std::to_string(lag));
  }
  const std::size_t periods = panel.n_periods();
  if (periods < 2 || static_cast<std::size_t>(lag) + 2 > periods) {
    throw Error(ErrorCode::insufficient_data,
                "lag " + std::to_string(lag) + " leaves fewer than 2 return observations from " +
                    std::to_string(periods) + " periods");
  }
  const std::size_t cols = periods - static_cast<std::size_t>(lag);
  ReturnMatrix r{panel.entities, Matrix<double>(panel.n_entities(), cols), lag};
  for (std::size_t i = 0; i < panel.n_entities(); ++i) {
    for (std::size_t t = 0; t < cols; ++t) {
      r.returns(i, t) = std::log(panel.values(i, t + lag)) - std::log(panel.values(i, t));
    }
  }
  return r;
}

}  // namespace corrtree
