#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qksvm/errors.hpp"

namespace qksvm {

namespace detail {

// Cyclic Jacobi for a dense symmetric matrix. Deterministic sweep order,
// converges quadratically; plenty for the 15x15 covariance this serves.
struct JacobiResult {
  std::vector<double> eigenvalues;            // unsorted, matches columns of V
  std::vector<std::vector<double>> vectors;   // vectors[k] is eigenvector k
};

inline JacobiResult jacobi_eigen_symmetric(std::vector<std::vector<double>> a,
                                           double tol = 1e-12, int max_sweeps = 100) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;  // v[i][k]: component i of vector k

  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) norm += a[i][j] * a[i][j];
  }
  norm = std::sqrt(norm);
  const double threshold = tol * std::max(norm, 1.0);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    }
    if (std::sqrt(2.0 * off) < threshold) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  JacobiResult r;
  r.eigenvalues.resize(n);
  r.vectors.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    r.eigenvalues[k] = a[k][k];
    for (std::size_t i = 0; i < n; ++i) r.vectors[k][i] = v[i][k];
  }
  return r;
}

}  // namespace detail

struct PcaResult {
  std::vector<std::vector<double>> coordinates;  // one row per sample, out_dims wide
  std::vector<double> explained;                 // variance fraction per component
  std::vector<std::vector<double>> components;   // orthonormal eigenvectors, descending
};

// Project onto the top eigenvectors of the population covariance. Sign of
// each component is fixed so its largest-magnitude entry is positive, which
// keeps plots reproducible across runs and platforms.
inline PcaResult pca_project(const std::vector<std::vector<double>>& samples, int out_dims = 2) {
  if (out_dims < 1) throw ValidationError("out_dims must be >= 1");
  if (samples.size() < static_cast<std::size_t>(out_dims)) {
    throw ValidationError("need at least out_dims samples");
  }
  const std::size_t d = samples.front().size();
  if (static_cast<std::size_t>(out_dims) > d) {
    throw ValidationError("out_dims exceeds feature count");
  }
  for (const auto& row : samples) {
    if (row.size() != d) throw ValidationError("ragged sample matrix");
  }
  const std::size_t n = samples.size();

  std::vector<double> mean(d, 0.0);
  for (const auto& row : samples) {
    for (std::size_t k = 0; k < d; ++k) mean[k] += row[k];
  }
  for (double& m : mean) m /= static_cast<double>(n);

  std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
  for (const auto& row : samples) {
    for (std::size_t i = 0; i < d; ++i) {
      const double ci = row[i] - mean[i];
      for (std::size_t j = i; j < d; ++j) cov[i][j] += ci * (row[j] - mean[j]);
    }
  }
  double total_var = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i][j] /= static_cast<double>(n);  // population divisor
      cov[j][i] = cov[i][j];
    }
    total_var += cov[i][i];
  }
  if (total_var <= 0.0) throw DegenerateScaleError("all samples identical: PCA undefined");

  detail::JacobiResult eig = detail::jacobi_eigen_symmetric(cov);

  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return eig.eigenvalues[a] > eig.eigenvalues[b];
  });

  PcaResult out;
  for (int c = 0; c < out_dims; ++c) {
    std::vector<double> vec = eig.vectors[idx[c]];
    std::size_t arg = 0;
    for (std::size_t i = 1; i < d; ++i) {
      if (std::abs(vec[i]) > std::abs(vec[arg])) arg = i;
    }
    if (vec[arg] < 0.0) {
      for (double& x : vec) x = -x;
    }
    out.components.push_back(std::move(vec));
    out.explained.push_back(std::max(eig.eigenvalues[idx[c]], 0.0) / total_var);
  }

  out.coordinates.assign(n, std::vector<double>(out_dims, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    for (int c = 0; c < out_dims; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        acc += (samples[r][k] - mean[k]) * out.components[c][k];
      }
      out.coordinates[r][c] = acc;
    }
  }
  return out;
}

}  // namespace qksvm
