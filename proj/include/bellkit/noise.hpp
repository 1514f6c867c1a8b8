#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "bellkit/chsh.hpp"
#include "bellkit/correlation.hpp"
#include "bellkit/rng.hpp"

namespace bellkit {

// Global two-qubit depolarizing noise (scales every correlation by 1-p)
// plus independent symmetric readout flips (factor (1-2*eps)^2).
struct NoiseParams {
  double depolarizing_p = 0.0;
  double readout_epsilon = 0.0;

  void validate() const {
    if (depolarizing_p < 0.0 || depolarizing_p > 1.0)
      throw std::invalid_argument("NoiseParams: depolarizing_p must be in [0, 1]");
    if (readout_epsilon < 0.0 || readout_epsilon > 0.5)
      throw std::invalid_argument("NoiseParams: readout_epsilon must be in [0, 0.5]");
  }

  double attenuation() const {
    const double r = 1.0 - 2.0 * readout_epsilon;
    return (1.0 - depolarizing_p) * r * r;
  }
};

inline CorrelationEstimate attenuate_correlation(const CorrelationEstimate& e,
                                                 const NoiseParams& params) {
  params.validate();
  const double f = params.attenuation();
  CorrelationEstimate out = e;
  out.value *= f;
  out.std_error *= f;
  return out;
}

// Exact quantum terms attenuated analytically; with shots >= 1 the
// attenuated expectations additionally pick up shot noise from sampled
// +/-1 products.
inline ChshResult noisy_chsh(const ChshSettings& settings, const NoiseParams& params,
                             long long shots = CorrelationEstimate::kExactShots,
                             std::uint64_t seed = 0) {
  params.validate();
  const auto pairs = chsh_grid_pairs(settings);
  std::array<CorrelationEstimate, 4> terms;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto exact = pair_correlation(CorrelationSource::quantum_exact(),
                                        pairs[i].first, pairs[i].second);
    const auto attenuated = attenuate_correlation(exact, params);
    if (shots == CorrelationEstimate::kExactShots) {
      terms[i] = attenuated;
    } else {
      if (shots < 1) throw std::invalid_argument("noisy_chsh: shots must be >= 1 or exact");
      Rng rng(derive_seed(seed, i));
      const double p_plus = 0.5 * (1.0 + attenuated.value);
      long long balance = 0;
      for (long long s = 0; s < shots; ++s)
        balance += rng.uniform() < p_plus ? 1 : -1;
      terms[i] = CorrelationEstimate::sampled(
          static_cast<double>(balance) / static_cast<double>(shots), shots);
    }
  }
  return chsh_value(terms[0], terms[1], terms[2], terms[3]);
}

struct AttenuationFit {
  double factor = 1.0;
  double raw_ratio = 1.0;
  bool clamped = false;
};

// Effective attenuation explaining an observed S against its ideal value.
inline AttenuationFit fit_attenuation(double s_theoretical, double s_observed) {
  if (s_theoretical == 0.0)
    throw std::domain_error("fit_attenuation: theoretical S is zero");
  AttenuationFit fit;
  fit.raw_ratio = s_observed / s_theoretical;
  fit.factor = std::clamp(fit.raw_ratio, 0.0, 1.0);
  fit.clamped = fit.factor != fit.raw_ratio;
  return fit;
}

}  // namespace bellkit
