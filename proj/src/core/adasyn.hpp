#pragma once

#include <cstdint>
#include <vector>

namespace ptb {

struct AdasynConfig {
  int k = 5;          // neighbor count
  double beta = 1.0;  // balance level in (0, 1]
  std::uint64_t seed = 0;
};

struct AdasynResult {
  std::vector<double> x;  // row-major, original rows first, synthetics after
  std::vector<int> y;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::size_t n_synthetic = 0;
};

/// Adaptive minority oversampling. Synthetic points are placed on segments
/// between a minority seed and one of its nearest minority neighbors, with more
/// synthetics near seeds whose neighborhoods are majority-dominated.
AdasynResult adasyn(const double* x, std::size_t n, std::size_t d, const int* y,
                    const AdasynConfig& cfg);

}  // namespace ptb
