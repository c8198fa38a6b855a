#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "qksvm/errors.hpp"
#include "qksvm/statevector.hpp"

namespace qksvm {

enum class FeatureMapKind { Z, ZZ, Pauli };

inline std::string to_string(FeatureMapKind kind) {
  switch (kind) {
    case FeatureMapKind::Z: return "ZFeatureMap";
    case FeatureMapKind::ZZ: return "ZZFeatureMap";
    case FeatureMapKind::Pauli: return "PauliFeatureMap";
  }
  return "?";
}

// Data-encoding circuit family. One qubit per feature. Angles take the
// feature values directly (scaled by data_scale), one encoding layer per rep.
struct FeatureMapSpec {
  FeatureMapKind kind = FeatureMapKind::Z;
  int num_features = 1;
  int reps = 2;
  // Z/ZZ phase encodings are degenerate on |0...0> without the Hadamard
  // layer (diagonal phases only), so it is mandatory there. The Pauli map
  // carries its own basis changes and takes no H layer.
  bool initial_hadamard = true;
  double data_scale = 1.0;

  static FeatureMapSpec z(int num_features, int reps = 2, double data_scale = 1.0) {
    return {FeatureMapKind::Z, num_features, reps, true, data_scale};
  }
  static FeatureMapSpec zz(int num_features, int reps = 2, double data_scale = 1.0) {
    return {FeatureMapKind::ZZ, num_features, reps, true, data_scale};
  }
  static FeatureMapSpec pauli(int num_features, int reps = 2, double data_scale = 1.0) {
    return {FeatureMapKind::Pauli, num_features, reps, false, data_scale};
  }

  void validate() const {
    if (num_features < 1) throw ValidationError("feature map needs at least one feature");
    StateVector::check_qubit_count(num_features);
    if (reps < 1) throw ValidationError("reps must be >= 1");
    if ((kind == FeatureMapKind::Z || kind == FeatureMapKind::ZZ) && !initial_hadamard) {
      throw ValidationError("Z/ZZ maps require the initial Hadamard layer");
    }
    if (kind == FeatureMapKind::Pauli && initial_hadamard) {
      throw ValidationError("the Pauli map takes no initial Hadamard layer");
    }
    if (!std::isfinite(data_scale)) throw ValidationError("data_scale must be finite");
  }
};

// Encoding circuit for sample x. Layer content per rep:
//   Z:     [H all] then e^{i 2 x_k Z_k}            = RZ(-4 x_k) on k
//   ZZ:    [H all] then e^{i x_j Z_j}              = RZ(-2 x_j) on j,
//          then per pair j<k e^{i x_j x_k Z_j Z_k} = CNOT(j,k) RZ(-2 x_j x_k) CNOT(j,k)
//   Pauli: per qubit e^{-i x_j X_j} e^{-i x_j Y_j} e^{-i x_j Z_j}
//                                                  = RX(2x_j) RY(2x_j) RZ(2x_j),
//          then per pair j<k e^{-i x_j x_k Z_j X_k}
//                                                  = H(k) CNOT(j,k) RZ(2 x_j x_k) CNOT(j,k) H(k)
// Qubits ascend, pairs are lexicographic (j,k) with j<k.
inline Circuit build_feature_circuit(std::span<const double> x, const FeatureMapSpec& spec) {
  spec.validate();
  const int n = spec.num_features;
  if (static_cast<int>(x.size()) != n) {
    throw ValidationError("feature vector length does not match the map");
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw ValidationError("feature values must be finite");
  }

  std::vector<double> xs(x.begin(), x.end());
  for (double& v : xs) v *= spec.data_scale;

  Circuit c;
  c.num_qubits = n;
  for (int rep = 0; rep < spec.reps; ++rep) {
    switch (spec.kind) {
      case FeatureMapKind::Z:
        for (int k = 0; k < n; ++k) c.gates.push_back(Gate::h(k));
        for (int k = 0; k < n; ++k) c.gates.push_back(Gate::rz(k, -4.0 * xs[k]));
        break;
      case FeatureMapKind::ZZ:
        for (int j = 0; j < n; ++j) c.gates.push_back(Gate::h(j));
        for (int j = 0; j < n; ++j) c.gates.push_back(Gate::rz(j, -2.0 * xs[j]));
        for (int j = 0; j < n; ++j) {
          for (int k = j + 1; k < n; ++k) {
            c.gates.push_back(Gate::cnot(j, k));
            c.gates.push_back(Gate::rz(k, -2.0 * xs[j] * xs[k]));
            c.gates.push_back(Gate::cnot(j, k));
          }
        }
        break;
      case FeatureMapKind::Pauli:
        for (int j = 0; j < n; ++j) {
          c.gates.push_back(Gate::rx(j, 2.0 * xs[j]));
          c.gates.push_back(Gate::ry(j, 2.0 * xs[j]));
          c.gates.push_back(Gate::rz(j, 2.0 * xs[j]));
        }
        for (int j = 0; j < n; ++j) {
          for (int k = j + 1; k < n; ++k) {
            c.gates.push_back(Gate::h(k));
            c.gates.push_back(Gate::cnot(j, k));
            c.gates.push_back(Gate::rz(k, 2.0 * xs[j] * xs[k]));
            c.gates.push_back(Gate::cnot(j, k));
            c.gates.push_back(Gate::h(k));
          }
        }
        break;
    }
  }
  return c;
}

// Gates reversed, each replaced by its adjoint. run(C + adjoint(C)) is the
// identity on |0...0>, which is the uncompute half of overlap estimation.
inline Circuit adjoint(const Circuit& circuit) {
  Circuit adj;
  adj.num_qubits = circuit.num_qubits;
  adj.gates.reserve(circuit.gates.size());
  for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
    adj.gates.push_back(it->adjoint());
  }
  return adj;
}

// Exact gate count of build_feature_circuit for any input.
inline long long gate_count(const FeatureMapSpec& spec) {
  spec.validate();
  const long long n = spec.num_features;
  const long long pairs = n * (n - 1) / 2;
  const long long h = spec.initial_hadamard ? n : 0;
  long long per_rep = 0;
  switch (spec.kind) {
    case FeatureMapKind::Z: per_rep = h + n; break;
    case FeatureMapKind::ZZ: per_rep = h + n + 3 * pairs; break;
    case FeatureMapKind::Pauli: per_rep = 3 * n + 5 * pairs; break;
  }
  return spec.reps * per_rep;
}

}  // namespace qksvm
