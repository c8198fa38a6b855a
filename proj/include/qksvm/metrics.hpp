#pragma once

#include <cstdint>
#include <vector>

#include "qksvm/errors.hpp"

namespace qksvm {

struct ConfusionMatrix {
  long long tp = 0;
  long long fp = 0;
  long long tn = 0;
  long long fn = 0;

  long long total() const { return tp + fp + tn + fn; }
};

// Positive class is label 1.
inline ConfusionMatrix confusion(const std::vector<int>& y_true,
                                 const std::vector<int>& y_pred) {
  if (y_true.size() != y_pred.size()) throw ValidationError("label arrays differ in length");
  if (y_true.empty()) throw ValidationError("confusion matrix needs at least one sample");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool t = y_true[i] == 1;
    const bool p = y_pred[i] == 1;
    if (t && p) ++cm.tp;
    else if (!t && p) ++cm.fp;
    else if (!t && !p) ++cm.tn;
    else ++cm.fn;
  }
  return cm;
}

// The five evaluation metrics. A 0/0 ratio scores 0.0 and raises the
// matching degeneracy flag instead of propagating NaN into averages.
struct Scores {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double specificity = 0.0;
  double f1 = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool specificity_degenerate = false;
  bool f1_degenerate = false;

  bool any_degenerate() const {
    return precision_degenerate || recall_degenerate || specificity_degenerate || f1_degenerate;
  }
};

inline Scores score(const ConfusionMatrix& cm) {
  if (cm.total() < 1) throw ValidationError("confusion matrix is empty");
  if (cm.tp < 0 || cm.fp < 0 || cm.tn < 0 || cm.fn < 0) {
    throw ValidationError("confusion matrix counts must be nonnegative");
  }
  Scores s;
  const double tp = static_cast<double>(cm.tp);
  const double fp = static_cast<double>(cm.fp);
  const double tn = static_cast<double>(cm.tn);
  const double fn = static_cast<double>(cm.fn);

  s.accuracy = (tp + tn) / static_cast<double>(cm.total());

  if (cm.tp + cm.fp > 0) s.precision = tp / (tp + fp);
  else s.precision_degenerate = true;

  if (cm.tp + cm.fn > 0) s.recall = tp / (tp + fn);
  else s.recall_degenerate = true;

  if (cm.tn + cm.fp > 0) s.specificity = tn / (tn + fp);
  else s.specificity_degenerate = true;

  if (s.precision + s.recall > 0.0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  } else {
    s.f1_degenerate = true;
  }
  return s;
}

}  // namespace qksvm
