#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bellkit/angles.hpp"

namespace bellkit {

using Amplitude = std::complex<double>;

// Dense n-qubit pure state. Qubit 0 is the leftmost bit of an outcome
// string, i.e. the most significant bit of the amplitude index.
class Statevector {
 public:
  static constexpr int kMaxQubits = 20;

  Statevector(int n_qubits, std::vector<Amplitude> amplitudes)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxQubits)
      throw std::length_error("Statevector: qubit count out of range [1, 20]");
    if (amplitudes_.size() != (std::size_t{1} << n_qubits_))
      throw std::invalid_argument("Statevector: amplitude count != 2^n");
    if (std::fabs(norm_sq() - 1.0) > 1e-12)
      throw std::invalid_argument("Statevector: state is not normalized");
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return s;
  }

  // Applies a 2x2 unitary (row-major [u00 u01; u10 u11]) to one qubit.
  Statevector with_single_qubit_gate(int qubit, const std::array<Amplitude, 4>& u) const {
    if (qubit < 0 || qubit >= n_qubits_)
      throw std::out_of_range("Statevector: qubit index out of range");
    Statevector out = *this;
    apply_to(out.amplitudes_, qubit, u);
    return out;
  }

  // In-place variant used by hot paths.
  static void apply_to(std::vector<Amplitude>& amps, int qubit,
                       const std::array<Amplitude, 4>& u) {
    const int n = bit_width(amps.size());
    const std::size_t stride = std::size_t{1} << (n - 1 - qubit);
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
      for (std::size_t k = base; k < base + stride; ++k) {
        const Amplitude a0 = amps[k];
        const Amplitude a1 = amps[k + stride];
        amps[k] = u[0] * a0 + u[1] * a1;
        amps[k + stride] = u[2] * a0 + u[3] * a1;
      }
    }
  }

 private:
  static int bit_width(std::size_t dim) {
    int n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    return n;
  }

  int n_qubits_;
  std::vector<Amplitude> amplitudes_;
};

// (|00> + |11>)/sqrt(2), via H on qubit 0 then CNOT(0 -> 1) on |00>.
inline Statevector prepare_bell_state() {
  const double r = 1.0 / std::numbers::sqrt2;
  return Statevector(2, {r, 0.0, 0.0, r});
}

// (|0...0> + |1...1>)/sqrt(2) over n qubits; GHZ(2) is the Bell state.
inline Statevector prepare_ghz_state(int n) {
  if (n < 2 || n > Statevector::kMaxQubits)
    throw std::length_error("prepare_ghz_state: n must be in [2, 20]");
  std::vector<Amplitude> amps(std::size_t{1} << n, 0.0);
  const double r = 1.0 / std::numbers::sqrt2;
  amps.front() = r;
  amps.back() = r;
  return Statevector(n, std::move(amps));
}

}  // namespace bellkit
