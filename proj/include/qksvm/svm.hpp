#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "qksvm/errors.hpp"
#include "qksvm/kernel.hpp"
#include "qksvm/rng.hpp"

namespace qksvm {

struct TrainingSet {
  KernelMatrix gram;
  std::vector<int> labels;  // -1 / +1

  void validate() const {
    if (gram.n != labels.size()) throw ValidationError("gram size does not match label count");
    if (labels.empty()) throw ValidationError("empty training set");
    bool pos = false, neg = false;
    for (int y : labels) {
      if (y == 1) pos = true;
      else if (y == -1) neg = true;
      else throw ValidationError("labels must be -1 or +1");
    }
    if (!pos || !neg) throw ValidationError("training requires both classes");
    if (!gram.is_symmetric()) throw ValidationError("gram matrix must be symmetric");
  }
};

struct SvmParams {
  double C = 1.0;
  double tol = 1e-3;
  int max_passes = 10;
  std::uint64_t seed = 0;
  double support_epsilon = 1e-8;
  long long max_sweeps = 10000;  // hard cap; hitting it flags non-convergence

  void validate() const {
    if (!(C > 0.0)) throw ValidationError("C must be > 0");
    if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
    if (max_passes < 1) throw ValidationError("max_passes must be >= 1");
  }
};

// Dual solution: box-constrained multipliers, bias, and the training labels
// needed to evaluate the decision function against kernel rows.
struct SvmModel {
  std::vector<double> alphas;
  double bias = 0.0;
  std::vector<int> labels;
  std::vector<std::size_t> support_indices;
  double C = 1.0;
  double support_epsilon = 1e-8;
  bool converged = true;
};

// Dual objective: sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
inline double dual_objective(const KernelMatrix& gram, const std::vector<int>& labels,
                             const std::vector<double>& alphas) {
  const std::size_t n = labels.size();
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lin += alphas[i];
    if (alphas[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      quad += alphas[i] * alphas[j] * labels[i] * labels[j] * gram.at(i, j);
    }
  }
  return lin - 0.5 * quad;
}

namespace detail {

struct SmoState {
  const KernelMatrix& K;
  const std::vector<int>& y;
  double C;
  double tol;
  std::vector<double> alpha;
  std::vector<double> err;  // err_i = f(x_i) - y_i
  double b = 0.0;

  bool take_step(std::size_t i, std::size_t j) {
    if (i == j) return false;
    const double ai = alpha[i], aj = alpha[j];
    const int yi = y[i], yj = y[j];
    const double s = yi * yj;

    double lo, hi;
    if (yi != yj) {
      lo = std::max(0.0, aj - ai);
      hi = std::min(C, C + aj - ai);
    } else {
      lo = std::max(0.0, ai + aj - C);
      hi = std::min(C, ai + aj);
    }
    if (lo >= hi) return false;

    const double eta = K.at(i, i) + K.at(j, j) - 2.0 * K.at(i, j);
    double aj_new;
    if (eta > 1e-15) {
      aj_new = aj + yj * (err[i] - err[j]) / eta;
      aj_new = std::clamp(aj_new, lo, hi);
    } else {
      // Flat (or numerically non-PSD) direction: the objective is linear in
      // alpha_j, so the optimum sits at a box endpoint.
      const double slope = yj * (err[i] - err[j]);
      if (slope > 0.0) aj_new = hi;
      else if (slope < 0.0) aj_new = lo;
      else return false;
    }
    if (std::abs(aj_new - aj) < tol * (aj_new + aj + tol)) return false;

    double ai_new = ai + s * (aj - aj_new);
    ai_new = std::clamp(ai_new, 0.0, C);

    const double di = (ai_new - ai) * yi;
    const double dj = (aj_new - aj) * yj;

    const double b1 = b - err[i] - di * K.at(i, i) - dj * K.at(i, j);
    const double b2 = b - err[j] - di * K.at(i, j) - dj * K.at(j, j);
    double b_new;
    if (ai_new > 0.0 && ai_new < C) b_new = b1;
    else if (aj_new > 0.0 && aj_new < C) b_new = b2;
    else b_new = 0.5 * (b1 + b2);

    const double db = b_new - b;
    for (std::size_t k = 0; k < err.size(); ++k) {
      err[k] += di * K.at(i, k) + dj * K.at(j, k) + db;
    }
    alpha[i] = ai_new;
    alpha[j] = aj_new;
    b = b_new;
    return true;
  }

  // Second-choice heuristic: the partner with the largest |E_i - E_j| gives
  // the biggest unconstrained step. Fall back to a randomized scan if that
  // step is blocked by the box.
  bool examine(std::size_t i, SplitMix64& rng) {
    const double r = err[i] * y[i];
    const bool violates = (r < -tol && alpha[i] < C) || (r > tol && alpha[i] > 0.0);
    if (!violates) return false;

    std::size_t best = i;
    double best_gap = -1.0;
    for (std::size_t j = 0; j < err.size(); ++j) {
      if (j == i) continue;
      const double gap = std::abs(err[i] - err[j]);
      if (gap > best_gap) {
        best_gap = gap;
        best = j;
      }
    }
    if (best != i && take_step(i, best)) return true;

    std::vector<std::size_t> order(err.size());
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);
    for (std::size_t j : order) {
      if (j == i || j == best) continue;
      if (take_step(i, j)) return true;
    }
    return false;
  }
};

}  // namespace detail

inline SvmModel train(const TrainingSet& ts, const SvmParams& params = {}) {
  ts.validate();
  params.validate();
  const std::size_t n = ts.labels.size();

  detail::SmoState smo{ts.gram, ts.labels, params.C, params.tol,
                       std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) smo.err[i] = -static_cast<double>(ts.labels[i]);

  SplitMix64 rng(params.seed, /*stream=*/0x534D4F);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  bool converged = false;
  int quiet_passes = 0;
  for (long long sweep = 0; sweep < params.max_sweeps; ++sweep) {
    shuffle(order, rng);
    std::size_t changed = 0;
    for (std::size_t i : order) {
      if (smo.examine(i, rng)) ++changed;
    }
    quiet_passes = (changed == 0) ? quiet_passes + 1 : 0;
    if (quiet_passes >= params.max_passes) {
      converged = true;
      break;
    }
  }

  SvmModel model;
  model.alphas = std::move(smo.alpha);
  model.labels = ts.labels;
  model.C = params.C;
  model.support_epsilon = params.support_epsilon;
  model.converged = converged;

  // Bias from the final multipliers: mean of y_i - g_i over margin vectors,
  // g_i recomputed exactly; without margin vectors, the midpoint of the
  // KKT-feasible interval.
  std::vector<double> g(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (model.alphas[j] != 0.0) acc += model.alphas[j] * ts.labels[j] * ts.gram.at(j, i);
    }
    g[i] = acc;
  }
  const double eps = params.support_epsilon;
  double margin_sum = 0.0;
  std::size_t margin_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (model.alphas[i] > eps && model.alphas[i] < params.C - eps) {
      margin_sum += ts.labels[i] - g[i];
      ++margin_count;
    }
  }
  if (margin_count > 0) {
    model.bias = margin_sum / static_cast<double>(margin_count);
  } else {
    double b_lo = -std::numeric_limits<double>::infinity();
    double b_up = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double v = ts.labels[i] - g[i];
      const bool at_zero = model.alphas[i] <= eps;
      const bool at_c = model.alphas[i] >= params.C - eps;
      if ((at_zero && ts.labels[i] > 0) || (at_c && ts.labels[i] < 0)) b_lo = std::max(b_lo, v);
      if ((at_zero && ts.labels[i] < 0) || (at_c && ts.labels[i] > 0)) b_up = std::min(b_up, v);
    }
    if (std::isinf(b_lo) && std::isinf(b_up)) model.bias = 0.0;
    else if (std::isinf(b_lo)) model.bias = b_up;
    else if (std::isinf(b_up)) model.bias = b_lo;
    else model.bias = 0.5 * (b_lo + b_up);
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (model.alphas[i] > eps) model.support_indices.push_back(i);
  }
  return model;
}

// f(x_t) = sum_i alpha_i y_i K(x_i, x_t) + b for each kernel row.
inline std::vector<double> decision_values(const SvmModel& model,
                                           const std::vector<std::vector<double>>& cross) {
  const std::size_t n = model.alphas.size();
  std::vector<double> values;
  values.reserve(cross.size());
  for (const auto& row : cross) {
    if (row.size() != n) throw ValidationError("kernel row length does not match model size");
    double f = model.bias;
    for (std::size_t i = 0; i < n; ++i) {
      if (model.alphas[i] != 0.0) f += model.alphas[i] * model.labels[i] * row[i];
    }
    values.push_back(f);
  }
  return values;
}

// Ties (exactly zero) resolve to +1.
inline std::vector<int> predict(const SvmModel& model,
                                const std::vector<std::vector<double>>& cross) {
  std::vector<int> out;
  const std::vector<double> values = decision_values(model, cross);
  out.reserve(values.size());
  for (double v : values) out.push_back(v >= 0.0 ? +1 : -1);
  return out;
}

}  // namespace qksvm
