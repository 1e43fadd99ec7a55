#include "core/eval.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace ptb {

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<int>& labels, const SplitPlan& plan, int run_index) {
  if (!(plan.test_fraction > 0.0 && plan.test_fraction < 1.0))
    fail_invalid("stratified_split: test_fraction must be in (0,1)");

  std::vector<std::size_t> train, test;
  for (int cls : {+1, -1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    if (members.empty()) fail_invalid("stratified_split: a class is empty");
    if (members.size() < static_cast<std::size_t>(plan.fold_count))
      fail_invalid("stratified_split: class smaller than fold count");

    Rng rng(mix_seed(plan.seed, 0x5B17, static_cast<std::uint64_t>(run_index),
                     cls == +1 ? 1 : 2));
    rng.shuffle(members);
    std::size_t n_test = static_cast<std::size_t>(
        std::floor(plan.test_fraction * static_cast<double>(members.size()) + 0.5));
    for (std::size_t i = 0; i < members.size(); ++i)
      (i < n_test ? test : train).push_back(members[i]);
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

std::vector<int> stratified_kfold(const std::vector<int>& labels, int fold_count,
                                  std::uint64_t seed) {
  if (fold_count < 2) fail_invalid("stratified_kfold: fold_count must be >= 2");
  std::vector<int> folds(labels.size(), -1);
  for (int cls : {+1, -1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) members.push_back(i);
    if (members.size() < static_cast<std::size_t>(fold_count))
      fail_invalid("stratified_kfold: class smaller than fold count");
    Rng rng(mix_seed(seed, 0xF01D, cls == +1 ? 1 : 2));
    rng.shuffle(members);
    for (std::size_t i = 0; i < members.size(); ++i)
      folds[members[i]] = static_cast<int>(i % static_cast<std::size_t>(fold_count));
  }
  return folds;
}

std::size_t pick_best_index(const std::vector<double>& mean_scores) {
  if (mean_scores.empty()) fail_invalid("pick_best_index: empty grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < mean_scores.size(); ++i)
    if (mean_scores[i] > mean_scores[best]) best = i;
  return best;
}

}  // namespace ptb
