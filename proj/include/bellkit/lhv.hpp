#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bellkit/angles.hpp"
#include "bellkit/correlation.hpp"
#include "bellkit/rng.hpp"

namespace bellkit {

// Unit 3-vector carried by each particle pair.
struct HiddenVariable {
  std::array<double, 3> lambda{0.0, 0.0, 1.0};

  double norm() const {
    return std::sqrt(lambda[0] * lambda[0] + lambda[1] * lambda[1] +
                     lambda[2] * lambda[2]);
  }
};

using LambdaSampler = std::function<HiddenVariable(Rng&)>;
using OutcomeRule = std::function<int(const MeasurementSetting&, const HiddenVariable&)>;

// Hidden-variable density plus one deterministic +/-1 outcome rule per particle.
struct LhvModel {
  LambdaSampler density;
  std::vector<OutcomeRule> outcome_rules;
};

inline HiddenVariable uniform_sphere_lambda(Rng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * kPi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {{r * std::cos(phi), r * std::sin(phi), z}};
}

// Measurement direction in the X-Z plane for observable angle t.
inline std::array<double, 3> measurement_direction(double t) {
  return {std::sin(t), 0.0, std::cos(t)};
}

// sign(a_hat(theta) . lambda); exact zero ties break to +1.
inline int sign_rule_outcome(const MeasurementSetting& setting, const HiddenVariable& hv) {
  const auto a = measurement_direction(setting.observable_angle());
  const double dot = a[0] * hv.lambda[0] + a[1] * hv.lambda[1] + a[2] * hv.lambda[2];
  return dot < 0.0 ? -1 : +1;
}

// Uniform-sphere density with identical sign rules on every particle.
// For two particles this gives the closed form E(delta) = 1 - 2*delta/pi.
inline LhvModel make_sign_model(std::size_t particles = 2) {
  if (particles < 1) throw std::invalid_argument("make_sign_model: need >= 1 particle");
  LhvModel model;
  model.density = uniform_sphere_lambda;
  model.outcome_rules.assign(particles, OutcomeRule(sign_rule_outcome));
  return model;
}

inline std::vector<HiddenVariable> sample_lambda(const LhvModel& model,
                                                 std::uint64_t seed, long long count) {
  if (count < 1) throw std::invalid_argument("sample_lambda: count must be >= 1");
  Rng rng(derive_seed(seed, 0));
  std::vector<HiddenVariable> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) out.push_back(model.density(rng));
  return out;
}

inline int deterministic_outcome(const OutcomeRule& rule, const MeasurementSetting& setting,
                                 const HiddenVariable& hv) {
  const int s = rule(setting, hv);
  if (s != 1 && s != -1)
    throw std::logic_error("outcome rule returned a value other than +/-1");
  return s;
}

// Monte-Carlo estimate of the product correlation
// E = integral rho(lambda) prod_i A_i(a_i, lambda) d lambda.
inline CorrelationEstimate lhv_correlation_mc(const LhvModel& model,
                                              std::span<const MeasurementSetting> settings,
                                              long long samples, std::uint64_t seed) {
  if (settings.size() != model.outcome_rules.size())
    throw std::invalid_argument("lhv_correlation_mc: one rule per setting required");
  if (samples < 1) throw std::invalid_argument("lhv_correlation_mc: samples must be >= 1");
  Rng rng(derive_seed(seed, 0));
  long long balance = 0;
  for (long long i = 0; i < samples; ++i) {
    const HiddenVariable hv = model.density(rng);
    int prod = 1;
    for (std::size_t p = 0; p < settings.size(); ++p)
      prod *= model.outcome_rules[p](settings[p], hv);
    balance += prod;
  }
  return CorrelationEstimate::sampled(
      static_cast<double>(balance) / static_cast<double>(samples), samples);
}

// Closed form for the built-in sign model: E = 1 - 2*delta/pi with the
// separation of the observable angles folded into [0, pi].
inline CorrelationEstimate lhv_correlation_analytic(double theta_a, double theta_b) {
  const double delta = folded_separation(theta_a, theta_b);
  return CorrelationEstimate::exact(1.0 - 2.0 * delta / kPi);
}

inline CorrelationEstimate lhv_correlation_analytic(const MeasurementSetting& a,
                                                    const MeasurementSetting& b) {
  return lhv_correlation_analytic(a.observable_angle(), b.observable_angle());
}

// n-particle product correlation (n >= 2). With identical sign rules the
// product telescopes: even n aligned gives +1, odd n aligned averages to 0.
inline CorrelationEstimate lhv_product_correlation_n(const LhvModel& model,
                                                     std::span<const MeasurementSetting> settings,
                                                     long long samples, std::uint64_t seed) {
  if (settings.size() < 2)
    throw std::invalid_argument("lhv_product_correlation_n: need n >= 2 particles");
  return lhv_correlation_mc(model, settings, samples, seed);
}

}  // namespace bellkit
