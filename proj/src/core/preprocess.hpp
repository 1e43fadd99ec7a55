#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/cohort.hpp"
#include "core/schema.hpp"

namespace ptb {

struct ColumnInfo {
  std::string name;
  std::size_t feature_id = 0;  // registry index of the source feature
  int level = -1;              // one-hot level ordinal (1-based), -1 for non-categorical
  MissingPolicy policy = MissingPolicy::Mode;
};

/// Dense numeric matrix with a missingness mask, produced by encode().
struct EncodedMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<double> values;    // row-major
  std::vector<std::uint8_t> missing;
  std::vector<ColumnInfo> columns;

  double& at(std::size_t r, std::size_t c) { return values[r * n_cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * n_cols + c]; }
  bool is_missing(std::size_t r, std::size_t c) const { return missing[r * n_cols + c] != 0; }
  void set_missing(std::size_t r, std::size_t c, bool m) { missing[r * n_cols + c] = m ? 1 : 0; }
  void resize(std::size_t rows, std::size_t cols) {
    n_rows = rows;
    n_cols = cols;
    values.assign(rows * cols, 0.0);
    missing.assign(rows * cols, 0);
  }
};

/// Numeric encoding: yes/no to 1/0, categorical to one-hot columns, unusual
/// tokens replaced or clamped. MISSING cells propagate into the mask; unknown
/// tokens raise an error naming the feature and token.
EncodedMatrix encode(const RawView& view, const FeatureRegistry& registry);

struct DropReport {
  std::vector<std::string> dropped;  // column names, in column order
};

/// Removes columns whose missing fraction (over the given rows) exceeds the
/// threshold, plus columns whose schema policy is `drop` and that have any
/// missing cell. Empty `rows` means all rows.
EncodedMatrix drop_sparse(const EncodedMatrix& m, double threshold, DropReport* report,
                          const std::vector<std::size_t>& rows = {});

struct ImputerState {
  enum class Rule { Mean, Mode, Fixed, Derived };
  struct Column {
    Rule rule = Rule::Mean;
    double value = 0.0;          // Mean / Fixed fill value
    int mode_level = 0;          // Mode: winning 1-based level ordinal
    std::size_t base_col = 0;    // Derived: column holding the base feature
    double mean_gain = 0.0;      // Derived: training-mean (self - base)
  };
  std::vector<Column> columns;
  std::vector<ColumnInfo> layout;  // column set the state was fitted on
};

/// Fits per-column imputation statistics on the given training rows only.
ImputerState fit_imputer(const EncodedMatrix& m, const std::vector<std::size_t>& train_rows,
                         const FeatureRegistry& registry);

/// Fills every missing cell; observed cells are unchanged. Errors on a column
/// set mismatch with the fitted state.
void impute(const ImputerState& state, EncodedMatrix& m);

struct NormalizerState {
  std::vector<double> min;
  std::vector<double> max;
  std::vector<std::uint8_t> constant;  // flagged constant columns
};

/// Per-column (min, max) over training rows. Requires a complete matrix.
NormalizerState fit_normalizer(const EncodedMatrix& m, const std::vector<std::size_t>& train_rows);

/// Maps train min -> 0 and max -> 1; out-of-range values clamp to [0,1];
/// constant columns map to 0.
void normalize(const NormalizerState& state, EncodedMatrix& m);

}  // namespace ptb
