#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qs1d/config.hpp"

namespace qs1d {

/// Deterministic tabular result of a sweep: identical config gives a
/// byte-identical CSV.  The last column is always the task's oracle defect.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  std::optional<std::string> error;  // module error, annotated with the index
  std::size_t error_index = 0;

  double defect_tol = 0.0;
  double max_defect = 0.0;
  bool defects_ok() const { return max_defect <= defect_tol; }

  /// '#'-prefixed metadata header, column-name row, then one CSV row per
  /// sweep point with 17 significant digits.
  std::string to_csv() const;
};

/// Executes the sweep; rows are computed independently (optionally on
/// `threads` workers) and assembled in sweep order.  A module error stops
/// the sweep: rows before the failing index are kept and the error is
/// recorded for the caller to flush.
ResultTable run(const RunConfig& config, int threads = 1);

inline constexpr const char* kToolVersion = "qs1d 1.0.0";

}  // namespace qs1d
