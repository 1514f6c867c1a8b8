#include <doctest.h>

#include <cmath>

#include "bellkit/attack.hpp"
#include "bellkit/chsh.hpp"

using namespace bellkit;

TEST_CASE("chsh_value combination and classification") {
  const auto e = [](double v) { return CorrelationEstimate::exact(v); };

  const auto max_violation = chsh_value(e(0.7071), e(-0.7071), e(0.7071), e(0.7071));
  CHECK(max_violation.s_value == doctest::Approx(2.8284).epsilon(1e-9));
  CHECK(max_violation.classification == ChshClass::QuantumViolation);

  const auto classical = chsh_value(e(1.0), e(1.0), e(1.0), e(1.0));
  CHECK(classical.s_value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(classical.classification == ChshClass::Classical);

  const auto zero = chsh_value(e(0.0), e(0.0), e(0.0), e(0.0));
  CHECK(zero.s_value == 0.0);
  CHECK(zero.classification == ChshClass::Classical);

  const auto supra = chsh_value(e(1.0), e(-1.0), e(1.0), e(1.0));
  CHECK(supra.s_value == doctest::Approx(4.0));
  CHECK(supra.classification == ChshClass::SupraQuantum);
}

TEST_CASE("chsh std_error combines in quadrature") {
  const auto s = CorrelationEstimate::sampled(0.5, 10000);
  const auto r = chsh_value(s, s, s, s);
  CHECK(r.std_error == doctest::Approx(2.0 * s.std_error).epsilon(1e-12));
}

TEST_CASE("quantum exact source reaches the Tsirelson maximum") {
  const auto r = chsh_from_source(CorrelationSource::quantum_exact(), canonical_chsh_settings());
  CHECK(r.s_value == doctest::Approx(kTsirelsonBound).epsilon(1e-12));
  CHECK(r.classification == ChshClass::QuantumViolation);
}

TEST_CASE("lhv analytic source tops out at the classical bound") {
  const auto r = chsh_from_source(CorrelationSource::lhv_analytic(), canonical_chsh_settings());
  CHECK(r.s_value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.classification == ChshClass::Classical);
}

TEST_CASE("aligned half-angle grid gives S = 2") {
  // Table-style aligned set: identical rotation inputs pair by pair.
  const ChshSettings s = {half_angle_setting(kPi / 8.0), half_angle_setting(3.0 * kPi / 8.0),
                          half_angle_setting(kPi / 8.0), half_angle_setting(3.0 * kPi / 8.0)};
  const auto grid = chsh_grid_pairs(s);
  // raw aligned pair list as printed: (a,a), (a',a'), (a,a), (a',a')
  const ChshPairs pairs = {SettingPair{s.a, s.b}, {s.a_prime, s.b_prime},
                           {s.a, s.b}, {s.a_prime, s.b_prime}};
  const auto r = chsh_over_pairs(CorrelationSource::quantum_exact(), pairs);
  CHECK(r.s_value == doctest::Approx(2.0).epsilon(1e-12));
  (void)grid;
}

TEST_CASE("bell expression evaluation") {
  const auto provider = [](const std::vector<MeasurementSetting>& settings) {
    return correlation_exact(prepare_bell_state(), settings);
  };

  const auto chsh = chsh_expression(canonical_chsh_settings());
  const auto eval = evaluate_bell_expression(chsh, provider);
  CHECK(eval.value == doctest::Approx(2.8284).epsilon(1e-4));
  CHECK(eval.violated);

  const auto zero_provider = [](const std::vector<MeasurementSetting>&) {
    return CorrelationEstimate::exact(0.0);
  };
  const auto zero_eval = evaluate_bell_expression(chsh, zero_provider);
  CHECK(zero_eval.value == 0.0);
  CHECK_FALSE(zero_eval.violated);

  CHECK_THROWS_AS(evaluate_bell_expression(BellExpression{}, provider), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_bell_expression(chsh, CorrelationProvider{}), std::invalid_argument);
}

TEST_CASE("lhv expression never violates the classical bound") {
  const auto lhv_provider = [](const std::vector<MeasurementSetting>& settings) {
    REQUIRE(settings.size() == 2);
    return lhv_correlation_analytic(settings[0], settings[1]);
  };
  Rng rng(404);
  for (int i = 0; i < 1000; ++i) {
    ChshSettings s = {observable_setting(rng.uniform(0.0, 2.0 * kPi)),
                      observable_setting(rng.uniform(0.0, 2.0 * kPi)),
                      observable_setting(rng.uniform(0.0, 2.0 * kPi)),
                      observable_setting(rng.uniform(0.0, 2.0 * kPi))};
    const auto eval = evaluate_bell_expression(chsh_expression(s), lhv_provider);
    CHECK(eval.value <= 2.0 + 1e-9);
  }
}

TEST_CASE("random-settings statistics respect the bounds") {
  const auto lhv = average_random_chsh(CorrelationSource::lhv_analytic(), 10000, 1);
  CHECK(lhv.max_abs <= 2.0 + 1e-9);
  CHECK(lhv.violating_fraction == 0.0);

  const auto qm = average_random_chsh(CorrelationSource::quantum_exact(), 10000, 1);
  CHECK(qm.max_abs <= kTsirelsonBound + 1e-9);
  CHECK(qm.violating_fraction > 0.0);
  // reported empirical mean sits well below the paper-claimed 2*sqrt(2)
  CHECK(qm.mean_abs < kTsirelsonBound);
  CHECK(qm.mean_abs > 0.0);
}

TEST_CASE("sampled S tracks exact S") {
  const auto settings = canonical_chsh_settings();
  const double exact = chsh_from_source(CorrelationSource::quantum_exact(), settings).s_value;
  int hits = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const auto r =
        chsh_from_source(CorrelationSource::quantum_sampled(100000, 900 + t), settings);
    if (std::fabs(r.s_value - exact) <= 4.0 * r.std_error) ++hits;
  }
  CHECK(hits >= trials * 99 / 100);
}

TEST_CASE("lhv sampled source tracks the analytic S") {
  const auto settings = canonical_chsh_settings();
  const auto r = chsh_from_source(CorrelationSource::lhv_sampled(200000, 3), settings);
  CHECK(std::fabs(r.s_value - 2.0) <= 4.0 * r.std_error);
}

TEST_CASE("chsh_value is linear in each term") {
  Rng rng(55);
  for (int i = 0; i < 20; ++i) {
    const double x = rng.uniform(-1.0, 1.0), y = rng.uniform(-1.0, 1.0);
    const auto ex = CorrelationEstimate::exact(x);
    const auto ey = CorrelationEstimate::exact(y);
    const auto zero = CorrelationEstimate::exact(0.0);
    const auto sum = CorrelationEstimate::exact(x + y);
    // superposition in the first slot; others held at zero
    const double lhs = chsh_value(sum, zero, zero, zero).s_value;
    const double rhs =
        chsh_value(ex, zero, zero, zero).s_value + chsh_value(ey, zero, zero, zero).s_value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}
