#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corrtree {

enum class ErrorCode {
  parse_error,
  missing_data,
  empty_panel,
  insufficient_data,
  degenerate_series,
  too_few_entities,
  inconsistent_report,
  degenerate_bootstrap,
  range_error,
  io_error,
};

// Stable, machine-parsable spelling used on the diagnostic stream.
constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::missing_data: return "missing-data";
    case ErrorCode::empty_panel: return "empty-panel";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::degenerate_series: return "degenerate-series";
    case ErrorCode::too_few_entities: return "too-few-entities";
    case ErrorCode::inconsistent_report: return "inconsistent-report";
    case ErrorCode::degenerate_bootstrap: return "degenerate-bootstrap";
    case ErrorCode::range_error: return "range-error";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace corrtree
