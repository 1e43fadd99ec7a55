#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace ptb {

struct SplitPlan {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  int fold_count = 5;
  int repeat_count = 5;
};

/// Proportional train/test split: per class, round-half-up(fraction * class
/// size) rows go to test. run_index derives an independent seed stream.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<int>& labels, const SplitPlan& plan, int run_index);

/// Per-row fold assignment; per class, fold sizes differ by at most one.
std::vector<int> stratified_kfold(const std::vector<int>& labels, int fold_count,
                                  std::uint64_t seed);

/// Index of the maximal score; ties go to the earliest entry.
std::size_t pick_best_index(const std::vector<double>& mean_scores);

}  // namespace ptb
