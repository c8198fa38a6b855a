#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qksvm/errors.hpp"
#include "qksvm/rng.hpp"

namespace qksvm {

using cplx = std::complex<double>;

// 2^24 amplitudes (256 MiB) is the hard cap; the experiments need 15 qubits.
inline constexpr int kMaxQubits = 24;

// Dense statevector over 2^n basis states, little-endian: qubit 0 is the
// least significant bit of the basis index.
class StateVector {
 public:
  StateVector(int num_qubits, std::vector<cplx> amplitudes)
      : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    check_qubit_count(num_qubits);
    if (amps_.size() != (std::size_t{1} << num_qubits_)) {
      throw ValidationError("amplitude count must be 2^num_qubits");
    }
  }

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }

  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  const std::vector<cplx>& amplitudes() const { return amps_; }

  double norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return s;
  }

  static void check_qubit_count(int n) {
    if (n < 1 || n > kMaxQubits) {
      throw CapacityError("qubit count " + std::to_string(n) + " outside [1, " +
                          std::to_string(kMaxQubits) + "]");
    }
  }

 private:
  friend StateVector zero_state(int);
  friend void apply_gate_in_place(StateVector&, const struct Gate&);

  explicit StateVector(int num_qubits)
      : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits) {}

  int num_qubits_;
  std::vector<cplx> amps_;
};

// Primitive gate set: H, RX, RY, RZ, CNOT.
// Conventions: RZ(t) = diag(e^{-it/2}, e^{+it/2}), RX/RY = cos(t/2) I - i sin(t/2) X/Y.
struct Gate {
  enum class Kind { H, RX, RY, RZ, CNOT };

  Kind kind;
  int target;
  int control = -1;   // CNOT only
  double theta = 0.0; // rotations only

  static Gate h(int target) { return {Kind::H, target}; }
  static Gate rx(int target, double theta) { return {Kind::RX, target, -1, theta}; }
  static Gate ry(int target, double theta) { return {Kind::RY, target, -1, theta}; }
  static Gate rz(int target, double theta) { return {Kind::RZ, target, -1, theta}; }
  static Gate cnot(int control, int target) { return {Kind::CNOT, target, control}; }

  Gate adjoint() const {
    Gate g = *this;
    if (kind == Kind::RX || kind == Kind::RY || kind == Kind::RZ) g.theta = -theta;
    return g;  // H and CNOT are self-adjoint
  }

  void validate(int num_qubits) const {
    if (target < 0 || target >= num_qubits) {
      throw ValidationError("gate target qubit out of range");
    }
    if (kind == Kind::CNOT) {
      if (control < 0 || control >= num_qubits) {
        throw ValidationError("CNOT control qubit out of range");
      }
      if (control == target) {
        throw ValidationError("CNOT control and target must be distinct");
      }
    }
  }
};

struct Circuit {
  int num_qubits = 0;
  std::vector<Gate> gates;

  void validate() const {
    StateVector::check_qubit_count(num_qubits);
    for (const Gate& g : gates) g.validate(num_qubits);
  }
};

inline StateVector zero_state(int num_qubits) {
  StateVector::check_qubit_count(num_qubits);
  StateVector s(num_qubits);
  s.amps_[0] = cplx{1.0, 0.0};
  return s;
}

namespace detail {

// Generic 2x2 unitary [[m00,m01],[m10,m11]] on the target qubit.
inline void apply_1q(std::vector<cplx>& amps, int target, cplx m00, cplx m01, cplx m10,
                     cplx m11) {
  const std::size_t mask = std::size_t{1} << target;
  const std::size_t dim = amps.size();
  for (std::size_t base = 0; base < dim; base += mask << 1) {
    for (std::size_t off = 0; off < mask; ++off) {
      const std::size_t i0 = base + off;
      const std::size_t i1 = i0 + mask;
      const cplx a0 = amps[i0];
      const cplx a1 = amps[i1];
      amps[i0] = m00 * a0 + m01 * a1;
      amps[i1] = m10 * a0 + m11 * a1;
    }
  }
}

}  // namespace detail

inline void apply_gate_in_place(StateVector& state, const Gate& gate) {
  gate.validate(state.num_qubits());
  std::vector<cplx>& amps = state.amps_;
  switch (gate.kind) {
    case Gate::Kind::H: {
      const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
      const std::size_t mask = std::size_t{1} << gate.target;
      for (std::size_t base = 0; base < amps.size(); base += mask << 1) {
        for (std::size_t off = 0; off < mask; ++off) {
          const std::size_t i0 = base + off;
          const std::size_t i1 = i0 + mask;
          const cplx a0 = amps[i0];
          const cplx a1 = amps[i1];
          amps[i0] = (a0 + a1) * inv_sqrt2;
          amps[i1] = (a0 - a1) * inv_sqrt2;
        }
      }
      break;
    }
    case Gate::Kind::RZ: {
      // Diagonal: phase e^{-it/2} on |0>, e^{+it/2} on |1> of the target bit.
      const cplx p0 = std::polar(1.0, -gate.theta / 2.0);
      const cplx p1 = std::polar(1.0, +gate.theta / 2.0);
      const std::size_t mask = std::size_t{1} << gate.target;
      for (std::size_t i = 0; i < amps.size(); ++i) {
        amps[i] *= (i & mask) ? p1 : p0;
      }
      break;
    }
    case Gate::Kind::RX: {
      const double c = std::cos(gate.theta / 2.0);
      const double s = std::sin(gate.theta / 2.0);
      detail::apply_1q(amps, gate.target, cplx{c, 0}, cplx{0, -s}, cplx{0, -s}, cplx{c, 0});
      break;
    }
    case Gate::Kind::RY: {
      const double c = std::cos(gate.theta / 2.0);
      const double s = std::sin(gate.theta / 2.0);
      detail::apply_1q(amps, gate.target, cplx{c, 0}, cplx{-s, 0}, cplx{s, 0}, cplx{c, 0});
      break;
    }
    case Gate::Kind::CNOT: {
      const std::size_t cmask = std::size_t{1} << gate.control;
      const std::size_t tmask = std::size_t{1} << gate.target;
      for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) {
          std::swap(amps[i], amps[i | tmask]);
        }
      }
      break;
    }
  }
}

inline StateVector apply_gate(StateVector state, const Gate& gate) {
  apply_gate_in_place(state, gate);
  return state;
}

inline StateVector run(const Circuit& circuit) {
  circuit.validate();
  StateVector state = zero_state(circuit.num_qubits);
  for (const Gate& g : circuit.gates) apply_gate_in_place(state, g);
  return state;
}

inline cplx inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw ValidationError("inner product requires equal qubit counts");
  }
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

// |<a|b>|^2; symmetric, global-phase invariant.
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(a, b));
}

inline double prob_all_zeros(const StateVector& state) { return std::norm(state[0]); }

// Success fraction of `shots` Bernoulli(prob_all_zeros) draws from the
// counter-based stream keyed by (seed, stream). Identical inputs give
// identical results on every platform; distinct streams let callers sample
// many circuit pairs in parallel without coupling the draws.
inline double sample_all_zeros(const StateVector& state, long long shots,
                               std::uint64_t seed, std::uint64_t stream = 0) {
  if (shots < 1) throw ValidationError("shots must be >= 1");
  const double p = prob_all_zeros(state);
  SplitMix64 rng(seed, stream);
  long long hits = 0;
  for (long long k = 0; k < shots; ++k) {
    if (rng.next_double() < p) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(shots);
}

}  // namespace qksvm
