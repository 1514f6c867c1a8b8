#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellkit/chsh.hpp"
#include "bellkit/convergence.hpp"
#include "bellkit/lhv.hpp"
#include "bellkit/rng.hpp"

namespace bellkit {

enum class SourceKind { EntangledQuantum, LhvAdversary };

inline std::string to_string(SourceKind k) {
  return k == SourceKind::EntangledQuantum ? "EntangledQuantum" : "LhvAdversary";
}

// How the four CHSH setting pairs are laid out for a session.
struct SettingsPolicy {
  enum class Kind { FixedChsh, AlignedPair, VicinityOffset };

  Kind kind = Kind::FixedChsh;
  ChshSettings fixed{};
  double theta = 0.0;   // AlignedPair
  double theta0 = 0.0;  // VicinityOffset
  double delta = 0.0;

  static SettingsPolicy fixed_chsh(const ChshSettings& s) {
    SettingsPolicy p;
    p.kind = Kind::FixedChsh;
    p.fixed = s;
    return p;
  }

  // a = b = theta, a' = b' = theta + pi/2: both descriptions give S = 2.
  static SettingsPolicy aligned_pair(double theta) {
    SettingsPolicy p;
    p.kind = Kind::AlignedPair;
    p.theta = theta;
    return p;
  }

  // Bob's settings misaligned by delta around a convergence point theta0.
  static SettingsPolicy vicinity_offset(double theta0, double delta) {
    SettingsPolicy p;
    p.kind = Kind::VicinityOffset;
    p.theta0 = theta0;
    p.delta = delta;
    return p;
  }

  ChshSettings settings() const {
    switch (kind) {
      case Kind::FixedChsh:
        return fixed;
      case Kind::AlignedPair:
        return {observable_setting(theta), observable_setting(theta + kPi / 2.0),
                observable_setting(theta), observable_setting(theta + kPi / 2.0)};
      case Kind::VicinityOffset:
        return {observable_setting(theta0), observable_setting(theta0 + kPi / 2.0),
                observable_setting(theta0 + delta),
                observable_setting(theta0 + kPi / 2.0 + delta)};
    }
    throw std::logic_error("unreachable");
  }
};

// a = 0, a' = pi/2, b = pi/4, b' = 3pi/4: the maximal-violation grid.
inline ChshSettings canonical_chsh_settings() {
  return {observable_setting(0.0), observable_setting(kPi / 2.0),
          observable_setting(kPi / 4.0), observable_setting(3.0 * kPi / 4.0)};
}

struct SessionConfig {
  SourceKind source = SourceKind::EntangledQuantum;
  LhvModel adversary = make_sign_model(2);  // used when source is LhvAdversary
  SettingsPolicy policy = SettingsPolicy::fixed_chsh(canonical_chsh_settings());
  long long rounds = 10000;
  std::uint64_t seed = 0;
  double detection_threshold = 2.0;
  double sigma_margin = 3.0;  // k in "S > threshold + k*sigma"
};

enum class Verdict { SecureQuantum, SuspectClassical };

inline std::string to_string(Verdict v) {
  return v == Verdict::SecureQuantum ? "SecureQuantum" : "SuspectClassical";
}

struct SessionResult {
  ChshResult s_estimate;
  Verdict verdict = Verdict::SuspectClassical;
  double detection_threshold = 2.0;
  double sigma_margin = 3.0;
  std::array<long long, 4> rounds_per_pair{};
  // S is cumulative over the whole session, not per-block.
  std::string statistic = "cumulative-over-session";
};

// One CHSH-test session: per round a uniformly chosen setting pair, an
// outcome product drawn from the configured source, then the cumulative S
// estimate and a threshold verdict.
inline SessionResult run_session(const SessionConfig& config) {
  if (config.rounds < 1) throw std::invalid_argument("run_session: rounds must be >= 1");
  if (config.detection_threshold <= 0.0)
    throw std::invalid_argument("run_session: detection threshold must be > 0");
  const auto pairs = chsh_grid_pairs(config.policy.settings());

  std::array<double, 4> exact_e{};
  if (config.source == SourceKind::EntangledQuantum) {
    for (std::size_t i = 0; i < 4; ++i)
      exact_e[i] = pair_correlation(CorrelationSource::quantum_exact(), pairs[i].first,
                                    pairs[i].second).value;
  } else if (config.adversary.outcome_rules.size() != 2) {
    throw std::invalid_argument("run_session: adversary model needs exactly 2 rules");
  }

  Rng rng(derive_seed(config.seed, 0));
  std::array<long long, 4> n{};
  std::array<long long, 4> balance{};
  for (long long round = 0; round < config.rounds; ++round) {
    const auto i = std::min<std::size_t>(3, static_cast<std::size_t>(rng.uniform() * 4.0));
    int product;
    if (config.source == SourceKind::EntangledQuantum) {
      product = rng.uniform() < 0.5 * (1.0 + exact_e[i]) ? 1 : -1;
    } else {
      const HiddenVariable hv = config.adversary.density(rng);
      product = config.adversary.outcome_rules[0](pairs[i].first, hv) *
                config.adversary.outcome_rules[1](pairs[i].second, hv);
    }
    ++n[i];
    balance[i] += product;
  }

  for (const long long count : n)
    if (count == 0)
      throw std::runtime_error("run_session: a setting pair received zero rounds");

  std::array<CorrelationEstimate, 4> terms;
  for (std::size_t i = 0; i < 4; ++i)
    terms[i] = CorrelationEstimate::sampled(
        static_cast<double>(balance[i]) / static_cast<double>(n[i]), n[i]);

  SessionResult result;
  result.s_estimate = chsh_value(terms[0], terms[1], terms[2], terms[3]);
  result.detection_threshold = config.detection_threshold;
  result.sigma_margin = config.sigma_margin;
  result.rounds_per_pair = n;
  const double bar = config.detection_threshold +
                     config.sigma_margin * result.s_estimate.std_error;
  result.verdict = result.s_estimate.s_value > bar ? Verdict::SecureQuantum
                                                   : Verdict::SuspectClassical;
  return result;
}

struct DetectionStats {
  double probability = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 1.0;
  long long successes = 0;
  long long trials = 0;
};

namespace detail {

inline DetectionStats wilson_interval(long long successes, long long trials) {
  DetectionStats d;
  d.successes = successes;
  d.trials = trials;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z = 1.959963984540054;  // 95%
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  d.probability = p;
  d.wilson_lo = std::max(0.0, center - half);
  d.wilson_hi = std::min(1.0, center + half);
  return d;
}

}  // namespace detail

// Fraction of sessions with the correct verdict: SuspectClassical for an
// LHV adversary (detection), SecureQuantum for the honest quantum source
// (true negative).
inline DetectionStats detection_probability(const SessionConfig& config, long long trials) {
  if (trials < 1) throw std::invalid_argument("detection_probability: trials must be >= 1");
  long long successes = 0;
  for (long long t = 0; t < trials; ++t) {
    SessionConfig trial = config;
    trial.seed = derive_seed(config.seed, static_cast<std::uint64_t>(t) + 1);
    const Verdict v = run_session(trial).verdict;
    const bool ok = config.source == SourceKind::LhvAdversary
                        ? v == Verdict::SuspectClassical
                        : v == Verdict::SecureQuantum;
    if (ok) ++successes;
  }
  return detail::wilson_interval(successes, trials);
}

struct SweepRow {
  double delta = 0.0;
  double s_quantum = 0.0;
  double s_lhv = 0.0;
  double sigma_q = 0.0;
  double sigma_lhv = 0.0;
  double z = 0.0;  // |S_q - S_lhv| / sqrt(sigma_q^2 + sigma_lhv^2); exact gap when exact
};

// Sweeps the misalignment offset across the HUP vicinity [-dt, +dt] around
// theta0 and compares both sources' S. rounds == 0 uses exact correlations
// (the z column then holds the exact |S_q - S_lhv| gap).
inline std::vector<SweepRow> vicinity_attack_sweep(double theta0, const VicinityParams& params,
                                                   int steps, long long rounds,
                                                   std::uint64_t seed) {
  if (steps < 2) throw std::invalid_argument("vicinity_attack_sweep: steps must be >= 2");
  if (params.delta_j <= 0.0)
    throw std::invalid_argument("vicinity_attack_sweep: delta_j must be > 0");
  const double dt = params.delta_theta();
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    const double delta = -dt + 2.0 * dt * static_cast<double>(k) / (steps - 1);
    const auto policy = SettingsPolicy::vicinity_offset(theta0, delta);
    SweepRow row;
    row.delta = delta;
    if (rounds == 0) {
      const auto sq = chsh_from_source(CorrelationSource::quantum_exact(), policy.settings());
      const auto sl = chsh_from_source(CorrelationSource::lhv_analytic(), policy.settings());
      row.s_quantum = sq.s_value;
      row.s_lhv = sl.s_value;
      row.z = std::fabs(sq.s_value - sl.s_value);
    } else {
      SessionConfig cfg;
      cfg.policy = policy;
      cfg.rounds = rounds;
      cfg.source = SourceKind::EntangledQuantum;
      cfg.seed = derive_seed(seed, 2 * static_cast<std::uint64_t>(k));
      const auto q = run_session(cfg);
      cfg.source = SourceKind::LhvAdversary;
      cfg.seed = derive_seed(seed, 2 * static_cast<std::uint64_t>(k) + 1);
      const auto l = run_session(cfg);
      row.s_quantum = q.s_estimate.s_value;
      row.s_lhv = l.s_estimate.s_value;
      row.sigma_q = q.s_estimate.std_error;
      row.sigma_lhv = l.s_estimate.std_error;
      const double denom = std::sqrt(row.sigma_q * row.sigma_q + row.sigma_lhv * row.sigma_lhv);
      row.z = denom > 0.0 ? std::fabs(row.s_quantum - row.s_lhv) / denom
                          : std::fabs(row.s_quantum - row.s_lhv);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bellkit
