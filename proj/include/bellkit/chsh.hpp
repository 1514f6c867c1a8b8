#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellkit/angles.hpp"
#include "bellkit/correlation.hpp"
#include "bellkit/lhv.hpp"
#include "bellkit/statevector.hpp"

namespace bellkit {

inline constexpr double kSupraQuantumTolerance = 1e-9;

struct ChshSettings {
  MeasurementSetting a, a_prime, b, b_prime;
};

// Term order: E(a,b), E(a,b'), E(a',b), E(a',b').
using SettingPair = std::pair<MeasurementSetting, MeasurementSetting>;
using ChshPairs = std::array<SettingPair, 4>;

inline ChshPairs chsh_grid_pairs(const ChshSettings& s) {
  return {SettingPair{s.a, s.b}, SettingPair{s.a, s.b_prime},
          SettingPair{s.a_prime, s.b}, SettingPair{s.a_prime, s.b_prime}};
}

enum class ChshClass { Classical, QuantumViolation, SupraQuantum };

inline std::string to_string(ChshClass c) {
  switch (c) {
    case ChshClass::Classical: return "Classical";
    case ChshClass::QuantumViolation: return "QuantumViolation";
    default: return "SupraQuantum";
  }
}

struct ChshResult {
  double s_value = 0.0;
  std::array<CorrelationEstimate, 4> terms{};
  double std_error = 0.0;
  ChshClass classification = ChshClass::Classical;
};

// S = E(a,b) - E(a,b') + E(a',b) + E(a',b'), errors combined in quadrature.
inline ChshResult chsh_value(const CorrelationEstimate& e_ab,
                             const CorrelationEstimate& e_abp,
                             const CorrelationEstimate& e_apb,
                             const CorrelationEstimate& e_apbp) {
  ChshResult r;
  r.terms = {e_ab, e_abp, e_apb, e_apbp};
  r.s_value = e_ab.value - e_abp.value + e_apb.value + e_apbp.value;
  r.std_error = std::sqrt(e_ab.std_error * e_ab.std_error +
                          e_abp.std_error * e_abp.std_error +
                          e_apb.std_error * e_apb.std_error +
                          e_apbp.std_error * e_apbp.std_error);
  const double s_abs = std::fabs(r.s_value);
  if (s_abs <= 2.0)
    r.classification = ChshClass::Classical;
  else if (s_abs <= kTsirelsonBound + kSupraQuantumTolerance)
    r.classification = ChshClass::QuantumViolation;
  else
    r.classification = ChshClass::SupraQuantum;
  return r;
}

// Where the four term correlations come from.
struct CorrelationSource {
  enum class Kind { QuantumExact, QuantumSampled, LhvAnalytic, LhvSampled };

  Kind kind = Kind::QuantumExact;
  long long shots = 0;  // shots (quantum) or samples (LHV)
  std::uint64_t seed = 0;

  static CorrelationSource quantum_exact() { return {Kind::QuantumExact, 0, 0}; }
  static CorrelationSource quantum_sampled(long long shots, std::uint64_t seed) {
    return {Kind::QuantumSampled, shots, seed};
  }
  static CorrelationSource lhv_analytic() { return {Kind::LhvAnalytic, 0, 0}; }
  static CorrelationSource lhv_sampled(long long samples, std::uint64_t seed) {
    return {Kind::LhvSampled, samples, seed};
  }
};

// One pair correlation from the chosen source; `stream` decorrelates the
// four CHSH terms drawn from a single seed.
inline CorrelationEstimate pair_correlation(const CorrelationSource& source,
                                            const MeasurementSetting& a,
                                            const MeasurementSetting& b,
                                            std::uint64_t stream = 0) {
  const std::array<MeasurementSetting, 2> settings = {a, b};
  switch (source.kind) {
    case CorrelationSource::Kind::QuantumExact:
      return correlation_exact(prepare_bell_state(), settings);
    case CorrelationSource::Kind::QuantumSampled:
      return correlation_from_counts(sample_counts(
          prepare_bell_state(), settings, source.shots, derive_seed(source.seed, stream)));
    case CorrelationSource::Kind::LhvAnalytic:
      return lhv_correlation_analytic(a, b);
    case CorrelationSource::Kind::LhvSampled: {
      static const LhvModel model = make_sign_model(2);
      return lhv_correlation_mc(model, settings, source.shots,
                                derive_seed(source.seed, stream));
    }
  }
  throw std::logic_error("unreachable");
}

inline ChshResult chsh_over_pairs(const CorrelationSource& source, const ChshPairs& pairs) {
  std::array<CorrelationEstimate, 4> e;
  for (std::size_t i = 0; i < 4; ++i)
    e[i] = pair_correlation(source, pairs[i].first, pairs[i].second, i);
  return chsh_value(e[0], e[1], e[2], e[3]);
}

inline ChshResult chsh_from_source(const CorrelationSource& source, const ChshSettings& s) {
  return chsh_over_pairs(source, chsh_grid_pairs(s));
}

// General Bell expression |sum_k C_k E_k| <= B_local.
struct BellExpression {
  struct Term {
    double coefficient = 1.0;
    std::vector<MeasurementSetting> settings;
  };
  std::vector<Term> terms;
  double classical_bound = 2.0;
};

inline BellExpression chsh_expression(const ChshSettings& s) {
  BellExpression expr;
  expr.classical_bound = 2.0;
  const auto pairs = chsh_grid_pairs(s);
  const std::array<double, 4> coeffs = {1.0, -1.0, 1.0, 1.0};
  for (std::size_t i = 0; i < 4; ++i)
    expr.terms.push_back({coeffs[i], {pairs[i].first, pairs[i].second}});
  return expr;
}

struct BellEvaluation {
  double value = 0.0;
  bool violated = false;
};

using CorrelationProvider =
    std::function<CorrelationEstimate(const std::vector<MeasurementSetting>&)>;

inline BellEvaluation evaluate_bell_expression(const BellExpression& expr,
                                               const CorrelationProvider& provider) {
  if (expr.terms.empty())
    throw std::invalid_argument("evaluate_bell_expression: no terms");
  if (!provider)
    throw std::invalid_argument("evaluate_bell_expression: missing correlation provider");
  double sum = 0.0;
  for (const auto& term : expr.terms)
    sum += term.coefficient * provider(term.settings).value;
  const double value = std::fabs(sum);
  return {value, value > expr.classical_bound};
}

struct RandomChshStats {
  double mean_abs = 0.0;
  double stddev_abs = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  double violating_fraction = 0.0;  // fraction of trials with |S| > 2 (beyond rounding)
  long long trials = 0;
};

// |S| statistics over uniformly random settings, each angle in [0, 2pi).
inline RandomChshStats average_random_chsh(const CorrelationSource& source,
                                           long long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("average_random_chsh: trials must be >= 1");
  Rng rng(derive_seed(seed, 0));
  RandomChshStats stats;
  stats.trials = trials;
  double sum = 0.0, sum_sq = 0.0;
  long long violating = 0;
  for (long long t = 0; t < trials; ++t) {
    ChshSettings s;
    s.a = observable_setting(rng.uniform(0.0, 2.0 * kPi));
    s.a_prime = observable_setting(rng.uniform(0.0, 2.0 * kPi));
    s.b = observable_setting(rng.uniform(0.0, 2.0 * kPi));
    s.b_prime = observable_setting(rng.uniform(0.0, 2.0 * kPi));
    CorrelationSource per_trial = source;
    per_trial.seed = derive_seed(source.seed, static_cast<std::uint64_t>(t) + 1);
    const double s_abs = std::fabs(chsh_from_source(per_trial, s).s_value);
    sum += s_abs;
    sum_sq += s_abs * s_abs;
    stats.min_abs = std::min(stats.min_abs, s_abs);
    stats.max_abs = std::max(stats.max_abs, s_abs);
    if (s_abs > 2.0 + kSupraQuantumTolerance) ++violating;
  }
  const double n = static_cast<double>(trials);
  stats.mean_abs = sum / n;
  stats.stddev_abs = std::sqrt(std::max(0.0, sum_sq / n - stats.mean_abs * stats.mean_abs));
  stats.violating_fraction = static_cast<double>(violating) / n;
  return stats;
}

}  // namespace bellkit
