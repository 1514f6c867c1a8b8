#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellkit/angles.hpp"
#include "bellkit/rng.hpp"
#include "bellkit/statevector.hpp"

namespace bellkit {

// A correlation value E in [-1, 1] with its sampling pedigree.
// shots == kExactShots marks an analytically exact value (std_error 0).
struct CorrelationEstimate {
  static constexpr long long kExactShots = -1;

  double value = 0.0;
  long long shots = kExactShots;
  double std_error = 0.0;

  bool is_exact() const { return shots == kExactShots; }

  static CorrelationEstimate exact(double v) { return {v, kExactShots, 0.0}; }

  static CorrelationEstimate sampled(double v, long long n) {
    if (n < 1) throw std::invalid_argument("CorrelationEstimate: shots must be >= 1");
    const double var = std::max(0.0, 1.0 - v * v);
    return {v, n, std::sqrt(var / static_cast<double>(n))};
  }
};

struct MeasurementCounts {
  std::vector<MeasurementSetting> settings;
  long long shots = 0;
  std::map<std::string, long long> counts;
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_arity(const Statevector& state, std::size_t n_settings) {
  if (n_settings != static_cast<std::size_t>(state.n_qubits()))
    throw std::invalid_argument("settings arity does not match qubit count");
}

inline std::string outcome_string(std::size_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q)
    if (index & (std::size_t{1} << (n_qubits - 1 - q))) s[q] = '1';
  return s;
}

}  // namespace detail

// Exact expectation of the product observable (x) over qubits of
// cos(t_i) Z + sin(t_i) X, t_i the observable angle of setting i.
inline CorrelationEstimate correlation_exact(const Statevector& state,
                                             std::span<const MeasurementSetting> settings) {
  detail::check_arity(state, settings.size());
  std::vector<Amplitude> phi = state.amplitudes();
  for (std::size_t q = 0; q < settings.size(); ++q) {
    const double t = settings[q].observable_angle();
    const std::array<Amplitude, 4> obs = {std::cos(t), std::sin(t),
                                          std::sin(t), -std::cos(t)};
    Statevector::apply_to(phi, static_cast<int>(q), obs);
  }
  double e = 0.0;
  const auto& psi = state.amplitudes();
  for (std::size_t k = 0; k < psi.size(); ++k)
    e += std::real(std::conj(psi[k]) * phi[k]);
  return CorrelationEstimate::exact(e);
}

// Rotates each qubit by RY(-t_i) so the chosen observable's eigenbasis maps
// onto the computational basis, then samples outcomes from Born-rule
// probabilities. Deterministic given (state, settings, shots, seed).
inline MeasurementCounts sample_counts(const Statevector& state,
                                       std::span<const MeasurementSetting> settings,
                                       long long shots, std::uint64_t seed) {
  detail::check_arity(state, settings.size());
  if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");

  std::vector<Amplitude> phi = state.amplitudes();
  for (std::size_t q = 0; q < settings.size(); ++q) {
    const double h = settings[q].observable_angle() / 2.0;
    const std::array<Amplitude, 4> ry = {std::cos(h), std::sin(h),
                                         -std::sin(h), std::cos(h)};
    Statevector::apply_to(phi, static_cast<int>(q), ry);
  }

  std::vector<double> cdf(phi.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    acc += std::norm(phi[k]);
    cdf[k] = acc;
  }
  cdf.back() = 1.0;  // absorb rounding

  Rng rng(derive_seed(seed, 0));
  std::map<std::size_t, long long> hits;
  for (long long s = 0; s < shots; ++s) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    ++hits[static_cast<std::size_t>(it - cdf.begin())];
  }

  MeasurementCounts out;
  out.settings.assign(settings.begin(), settings.end());
  out.shots = shots;
  out.seed = seed;
  for (const auto& [index, count] : hits)
    out.counts.emplace(detail::outcome_string(index, state.n_qubits()), count);
  return out;
}

// Parity estimator: each outcome contributes the product over qubits of
// (+1 for bit 0, -1 for bit 1).
inline CorrelationEstimate correlation_from_counts(const MeasurementCounts& counts) {
  if (counts.counts.empty() || counts.shots < 1)
    throw std::invalid_argument("correlation_from_counts: empty counts");
  long long balance = 0;
  for (const auto& [outcome, count] : counts.counts) {
    const auto ones = std::count(outcome.begin(), outcome.end(), '1');
    balance += (ones % 2 == 0) ? count : -count;
  }
  return CorrelationEstimate::sampled(
      static_cast<double>(balance) / static_cast<double>(counts.shots), counts.shots);
}

}  // namespace bellkit
