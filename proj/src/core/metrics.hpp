#pragma once

#include <cmath>
#include <cstddef>

namespace ptb {

struct ConfusionMatrix {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  long positives() const { return tp + fn; }
  long negatives() const { return tn + fp; }
};

struct MetricSet {
  double sensitivity = 0.0;
  double specificity = 0.0;
  double g_mean = 0.0;
  bool flagged = false;  // a rate was undefined (empty class) and reported as 0
};

inline MetricSet metrics(const ConfusionMatrix& cm) {
  MetricSet m;
  if (cm.positives() > 0) {
    m.sensitivity = static_cast<double>(cm.tp) / static_cast<double>(cm.positives());
  } else {
    m.flagged = true;
  }
  if (cm.negatives() > 0) {
    m.specificity = static_cast<double>(cm.tn) / static_cast<double>(cm.negatives());
  } else {
    m.flagged = true;
  }
  m.g_mean = std::sqrt(m.sensitivity * m.specificity);
  return m;
}

}  // namespace ptb
