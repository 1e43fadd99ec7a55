#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/metrics.hpp"

using namespace ptb;

namespace {

std::vector<int> make_labels(std::size_t pos, std::size_t neg) {
  std::vector<int> labels;
  labels.insert(labels.end(), pos, +1);
  labels.insert(labels.end(), neg, -1);
  return labels;
}

std::size_t count_class(const std::vector<int>& labels, const std::vector<std::size_t>& idx,
                        int cls) {
  std::size_t c = 0;
  for (std::size_t i : idx)
    if (labels[i] == cls) ++c;
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("eval");

TEST_CASE("a 20 percent split of 434/2568 holds out 87 and 514") {
  std::vector<int> labels = make_labels(434, 2568);
  SplitPlan plan;
  auto [train, test] = stratified_split(labels, plan, 0);
  CHECK(count_class(labels, test, +1) == 87);   // round(0.2 * 434)
  CHECK(count_class(labels, test, -1) == 514);  // round(0.2 * 2568)
  CHECK(count_class(labels, train, +1) == 347);
  CHECK(count_class(labels, train, -1) == 2054);
  CHECK(train.size() + test.size() == labels.size());
}

TEST_CASE("round-half-up governs tiny classes") {
  std::vector<int> labels = make_labels(10, 10);
  SplitPlan plan;
  plan.test_fraction = 0.25;
  auto [train, test] = stratified_split(labels, plan, 3);
  CHECK(count_class(labels, test, +1) == 3);  // 2.5 rounds up
  CHECK(count_class(labels, test, -1) == 3);
  CHECK(train.size() == 14);
}

TEST_CASE("splits are disjoint, exhaustive, sorted, and seed-deterministic") {
  std::vector<int> labels = make_labels(37, 91);
  SplitPlan plan;
  plan.seed = 7;
  auto [train1, test1] = stratified_split(labels, plan, 2);
  auto [train2, test2] = stratified_split(labels, plan, 2);
  CHECK(train1 == train2);
  CHECK(test1 == test2);
  CHECK(std::is_sorted(train1.begin(), train1.end()));
  CHECK(std::is_sorted(test1.begin(), test1.end()));

  std::set<std::size_t> all(train1.begin(), train1.end());
  all.insert(test1.begin(), test1.end());
  CHECK(all.size() == labels.size());

  // a different run index reshuffles
  auto [train3, test3] = stratified_split(labels, plan, 3);
  CHECK(test3 != test1);
}

TEST_CASE("fold sizes within each class differ by at most one") {
  std::vector<int> labels = make_labels(11, 23);
  auto folds = stratified_kfold(labels, 5, 42);
  REQUIRE(folds.size() == labels.size());

  for (int cls : {+1, -1}) {
    std::vector<int> per_fold(5, 0);
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) ++per_fold[folds[i]];
    auto [lo, hi] = std::minmax_element(per_fold.begin(), per_fold.end());
    CHECK(*hi - *lo <= 1);
  }
  // 11 positives over 5 folds: one fold of 3, four of 2
  std::vector<int> pos_fold(5, 0);
  for (std::size_t i = 0; i < 11; ++i) ++pos_fold[folds[i]];
  std::sort(pos_fold.begin(), pos_fold.end());
  CHECK(pos_fold == std::vector<int>{2, 2, 2, 2, 3});
}

TEST_CASE("fold assignment is a valid partition and deterministic") {
  std::vector<int> labels = make_labels(19, 31);
  auto a = stratified_kfold(labels, 4, 9);
  auto b = stratified_kfold(labels, 4, 9);
  CHECK(a == b);
  for (int f : a) {
    CHECK(f >= 0);
    CHECK(f < 4);
  }
  CHECK(stratified_kfold(labels, 4, 10) != a);
}

TEST_CASE("too few rows per class for the fold count is an error") {
  std::vector<int> labels = make_labels(3, 40);
  CHECK_THROWS_AS(stratified_kfold(labels, 5, 0), Error);
  SplitPlan plan;
  std::vector<int> empty;
  CHECK_THROWS_AS(stratified_split(empty, plan, 0), Error);
}

TEST_CASE("confusion-matrix metrics match hand arithmetic") {
  ConfusionMatrix cm;
  cm.tp = 47;
  cm.fn = 53;
  cm.tn = 57;
  cm.fp = 43;
  MetricSet m = metrics(cm);
  CHECK(m.sensitivity == doctest::Approx(0.47));
  CHECK(m.specificity == doctest::Approx(0.57));
  CHECK(m.g_mean == doctest::Approx(std::sqrt(0.47 * 0.57)));
  CHECK_FALSE(m.flagged);
}

TEST_CASE("perfect and degenerate classifiers") {
  ConfusionMatrix perfect{10, 0, 20, 0};
  MetricSet mp = metrics(perfect);
  CHECK(mp.sensitivity == 1.0);
  CHECK(mp.specificity == 1.0);
  CHECK(mp.g_mean == 1.0);

  ConfusionMatrix all_negative{0, 0, 20, 10};
  MetricSet mn = metrics(all_negative);
  CHECK(mn.sensitivity == 0.0);
  CHECK(mn.g_mean == 0.0);

  ConfusionMatrix no_positives{0, 3, 17, 0};
  CHECK(metrics(no_positives).flagged);
}

TEST_CASE("best index prefers the earliest tie") {
  CHECK(pick_best_index({0.1, 0.5, 0.5, 0.3}) == 1);
  CHECK(pick_best_index({0.9}) == 0);
  CHECK(pick_best_index({0.2, 0.2, 0.2}) == 0);
  CHECK_THROWS_AS(pick_best_index({}), Error);
}

TEST_SUITE_END();
