#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "qksvm/errors.hpp"
#include "qksvm/featuremap.hpp"
#include "qksvm/rng.hpp"
#include "qksvm/statevector.hpp"

namespace qksvm {

enum class KernelKind { Linear, Poly, Rbf, Quantum };
enum class QuantumMode { Exact, Sampled };

inline constexpr long long kDefaultShots = 8192;

struct KernelSpec {
  KernelKind kind = KernelKind::Linear;

  // Poly
  int degree = 3;
  double coef = 1.0;
  // Rbf
  double gamma = 1.0;
  // Quantum
  FeatureMapSpec map{};
  QuantumMode mode = QuantumMode::Exact;
  long long shots = kDefaultShots;
  std::uint64_t seed = 0;

  static KernelSpec linear() { return {}; }
  static KernelSpec poly(int degree = 3, double coef = 1.0) {
    KernelSpec s;
    s.kind = KernelKind::Poly;
    s.degree = degree;
    s.coef = coef;
    return s;
  }
  static KernelSpec rbf(double gamma) {
    KernelSpec s;
    s.kind = KernelKind::Rbf;
    s.gamma = gamma;
    return s;
  }
  static KernelSpec quantum_exact(FeatureMapSpec map) {
    KernelSpec s;
    s.kind = KernelKind::Quantum;
    s.map = map;
    s.mode = QuantumMode::Exact;
    return s;
  }
  static KernelSpec quantum_sampled(FeatureMapSpec map, long long shots = kDefaultShots,
                                    std::uint64_t seed = 0) {
    KernelSpec s;
    s.kind = KernelKind::Quantum;
    s.map = map;
    s.mode = QuantumMode::Sampled;
    s.shots = shots;
    s.seed = seed;
    return s;
  }

  void validate() const {
    switch (kind) {
      case KernelKind::Linear: break;
      case KernelKind::Poly:
        if (degree < 1) throw ValidationError("polynomial degree must be >= 1");
        break;
      case KernelKind::Rbf:
        if (!(gamma > 0.0)) throw ValidationError("RBF gamma must be > 0");
        break;
      case KernelKind::Quantum:
        map.validate();
        if (shots < 1) throw ValidationError("shots must be >= 1");
        break;
    }
  }
};

// Symmetric Gram matrix; each unordered pair is computed once and mirrored.
struct KernelMatrix {
  std::size_t n = 0;
  std::vector<double> entries;  // row-major n*n

  KernelMatrix() = default;
  explicit KernelMatrix(std::size_t size) : n(size), entries(size * size, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return entries[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return entries[i * n + j]; }

  bool is_symmetric() const {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (entries[i * n + j] != entries[j * n + i]) return false;
      }
    }
    return true;
  }
};

namespace detail {

inline void check_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("kernel arguments differ in length");
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double ipow(double base, int exp) {
  double r = 1.0;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

inline std::uint64_t vector_hash(std::span<const double> x) {
  return hash_bytes(x.data(), x.size() * sizeof(double));
}

// Stream id for one kernel entry, derived from the two argument vectors so
// evaluation order and thread assignment cannot change the drawn shots.
inline std::uint64_t pair_stream(std::span<const double> x_i, std::span<const double> x_j) {
  return mix64(vector_hash(x_i) ^ mix64(vector_hash(x_j)));
}

// Run U(x_i) followed by U(x_j)^dagger from |0...0>; the all-zeros outcome
// probability of that circuit is the fidelity kernel entry.
inline StateVector compute_uncompute(std::span<const double> x_i, std::span<const double> x_j,
                                     const FeatureMapSpec& map) {
  Circuit c = build_feature_circuit(x_i, map);
  const Circuit undo = adjoint(build_feature_circuit(x_j, map));
  c.gates.insert(c.gates.end(), undo.gates.begin(), undo.gates.end());
  return run(c);
}

// Chunked index-parallelism. Entries must be independent; determinism comes
// from the per-entry seed streams, not from the schedule.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  const std::size_t workers = std::min<std::size_t>(threads, count == 0 ? 1 : count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  auto worker = [&fn, count, chunk](std::size_t w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    for (std::size_t i = lo; i < hi; ++i) fn(i);
  };
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker, w);
  worker(0);
  for (std::thread& t : pool) t.join();
}

}  // namespace detail

inline double eval_kernel(std::span<const double> x_i, std::span<const double> x_j,
                          const KernelSpec& spec) {
  spec.validate();
  detail::check_same_length(x_i, x_j);
  switch (spec.kind) {
    case KernelKind::Linear:
      return detail::dot(x_i, x_j);
    case KernelKind::Poly:
      return detail::ipow(detail::dot(x_i, x_j) + spec.coef, spec.degree);
    case KernelKind::Rbf: {
      double d2 = 0.0;
      for (std::size_t k = 0; k < x_i.size(); ++k) {
        const double d = x_i[k] - x_j[k];
        d2 += d * d;
      }
      return std::exp(-spec.gamma * d2);
    }
    case KernelKind::Quantum: {
      if (static_cast<int>(x_i.size()) != spec.map.num_features) {
        throw ValidationError("feature vector length does not match the map");
      }
      if (spec.mode == QuantumMode::Exact) {
        return fidelity(run(build_feature_circuit(x_i, spec.map)),
                        run(build_feature_circuit(x_j, spec.map)));
      }
      const StateVector s = detail::compute_uncompute(x_i, x_j, spec.map);
      return sample_all_zeros(s, spec.shots, spec.seed, detail::pair_stream(x_i, x_j));
    }
  }
  throw ValidationError("unknown kernel kind");
}

// "Scale" heuristic: gamma = 1 / (d * mean per-feature population variance).
inline double rbf_gamma_scale(const std::vector<std::vector<double>>& X) {
  if (X.empty() || X.front().empty()) throw ValidationError("gamma heuristic needs data");
  const std::size_t d = X.front().size();
  double var_sum = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    double mean = 0.0;
    for (const auto& row : X) mean += row[k];
    mean /= static_cast<double>(X.size());
    double var = 0.0;
    for (const auto& row : X) var += (row[k] - mean) * (row[k] - mean);
    var_sum += var / static_cast<double>(X.size());
  }
  const double mean_var = var_sum / static_cast<double>(d);
  if (mean_var <= 0.0) throw DegenerateScaleError("zero variance: gamma heuristic undefined");
  return 1.0 / (static_cast<double>(d) * mean_var);
}

inline KernelMatrix build_gram(const std::vector<std::vector<double>>& X,
                               const KernelSpec& spec, int threads = 1) {
  spec.validate();
  if (X.empty()) throw ValidationError("Gram matrix needs at least one sample");
  const std::size_t n = X.size();
  for (const auto& row : X) detail::check_same_length(X.front(), row);

  KernelMatrix K(n);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    }
  }

  if (spec.kind == KernelKind::Quantum && spec.mode == QuantumMode::Exact) {
    // One statevector per sample, then pairwise overlaps; same values as the
    // per-pair path at a fraction of the circuit runs. Diagonal is exact.
    std::vector<StateVector> states(n, zero_state(spec.map.num_features));
    detail::parallel_for(n, threads, [&](std::size_t i) {
      states[i] = run(build_feature_circuit(X[i], spec.map));
    });
    detail::parallel_for(pairs.size(), threads, [&](std::size_t p) {
      const auto [i, j] = pairs[p];
      K.at(i, j) = fidelity(states[i], states[j]);
    });
    for (std::size_t i = 0; i < n; ++i) K.at(i, i) = 1.0;
  } else {
    detail::parallel_for(pairs.size(), threads, [&](std::size_t p) {
      const auto [i, j] = pairs[p];
      K.at(i, j) = eval_kernel(X[i], X[j], spec);
    });
    // Sampled quantum mode estimates the diagonal like any other entry;
    // classical kernels evaluate it directly.
    detail::parallel_for(n, threads,
                         [&](std::size_t i) { K.at(i, i) = eval_kernel(X[i], X[i], spec); });
  }

  for (const auto& [i, j] : pairs) K.at(j, i) = K.at(i, j);
  return K;
}

inline std::vector<std::vector<double>> build_cross(
    const std::vector<std::vector<double>>& X_test,
    const std::vector<std::vector<double>>& X_train, const KernelSpec& spec, int threads = 1) {
  spec.validate();
  if (X_train.empty()) throw ValidationError("cross matrix needs training samples");
  for (const auto& row : X_test) detail::check_same_length(X_train.front(), row);

  const std::size_t m = X_test.size();
  const std::size_t n = X_train.size();
  std::vector<std::vector<double>> cross(m, std::vector<double>(n, 0.0));

  if (m == 0) return cross;

  if (spec.kind == KernelKind::Quantum && spec.mode == QuantumMode::Exact) {
    std::vector<StateVector> test_states(m, zero_state(spec.map.num_features));
    std::vector<StateVector> train_states(n, zero_state(spec.map.num_features));
    detail::parallel_for(m, threads, [&](std::size_t t) {
      test_states[t] = run(build_feature_circuit(X_test[t], spec.map));
    });
    detail::parallel_for(n, threads, [&](std::size_t i) {
      train_states[i] = run(build_feature_circuit(X_train[i], spec.map));
    });
    detail::parallel_for(m * n, threads, [&](std::size_t p) {
      cross[p / n][p % n] = fidelity(test_states[p / n], train_states[p % n]);
    });
  } else {
    detail::parallel_for(m * n, threads, [&](std::size_t p) {
      cross[p / n][p % n] = eval_kernel(X_test[p / n], X_train[p % n], spec);
    });
  }
  return cross;
}

// Row-major full matrix, 17 significant digits (round-trip exact).
inline void write_kernel_csv(const KernelMatrix& K, std::ostream& out) {
  char buf[40];
  for (std::size_t i = 0; i < K.n; ++i) {
    for (std::size_t j = 0; j < K.n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", K.at(i, j));
      out << buf;
      if (j + 1 < K.n) out << ',';
    }
    out << '\n';
  }
}

}  // namespace qksvm
