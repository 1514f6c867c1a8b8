#include <doctest.h>

#include <cmath>

#include "bellkit/convergence.hpp"

using namespace bellkit;

namespace {

const Curve qm = [](double t) { return std::cos(t); };
const Curve hvt = [](double t) { return 1.0 - 2.0 * t / kPi; };

}  // namespace

TEST_CASE("configuration classification") {
  const std::vector<MeasurementSetting> aligned = {observable_setting(0.3),
                                                   observable_setting(0.3),
                                                   observable_setting(0.3)};
  CHECK(classify_configuration(aligned, 1e-6).kind == ConfigurationKind::Aligned);

  const std::vector<MeasurementSetting> orth = {observable_setting(0.0),
                                                observable_setting(kPi / 2.0)};
  CHECK(classify_configuration(orth, 1e-6).kind == ConfigurationKind::Orthogonal);

  const std::vector<MeasurementSetting> random = {observable_setting(0.1),
                                                  observable_setting(1.0),
                                                  observable_setting(2.3)};
  CHECK(classify_configuration(random, 1e-3).kind == ConfigurationKind::Random);

  CHECK_THROWS_AS(classify_configuration(std::vector<MeasurementSetting>{observable_setting(0.0)},
                                         1e-6),
                  std::invalid_argument);
  CHECK_THROWS_AS(classify_configuration(orth, 0.0), std::invalid_argument);
}

TEST_CASE("convergence points of the built-in curves") {
  const auto points = find_convergence_points(qm, hvt, 0.0, kPi, 0.01, 1e-10);
  REQUIRE(points.size() == 3);
  CHECK(points[0].theta0 == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(points[1].theta0 == doctest::Approx(kPi / 2.0).epsilon(1e-6));
  CHECK(points[2].theta0 == doctest::Approx(kPi).epsilon(1e-6));
  for (const auto& p : points) {
    // post-hoc residual re-evaluation
    CHECK(std::fabs(qm(p.theta0) - hvt(p.theta0)) <= 1e-6);
    CHECK(p.residual <= 1e-6);
  }
}

TEST_CASE("identical curves flag every grid point") {
  const auto points = find_convergence_points(qm, qm, 0.0, 1.0, 0.1, 1e-10);
  CHECK(points.size() == 11);
}

TEST_CASE("cos against -cos intersects only at pi/2") {
  const Curve neg = [](double t) { return -std::cos(t); };
  const auto points = find_convergence_points(qm, neg, 0.0, kPi, 0.01, 1e-10);
  REQUIRE(points.size() == 1);
  CHECK(points[0].theta0 == doctest::Approx(kPi / 2.0).epsilon(1e-6));
}

TEST_CASE("find_convergence_points argument validation") {
  CHECK_THROWS_AS(find_convergence_points(qm, hvt, 1.0, 1.0, 0.01, 1e-10),
                  std::invalid_argument);
  CHECK_THROWS_AS(find_convergence_points(qm, hvt, 0.0, 1.0, 0.0, 1e-10),
                  std::invalid_argument);
}

TEST_CASE("hup vicinity geometry") {
  const ConvergencePoint center{kPi / 2.0, 0.0, 0.0, 0.0};
  const auto r1 = hup_vicinity(center, VicinityParams{1.0}, qm, hvt);
  CHECK(r1.lo == doctest::Approx(kPi / 2.0 - 0.5).epsilon(1e-12));
  CHECK(r1.hi == doctest::Approx(kPi / 2.0 + 0.5).epsilon(1e-12));

  const ConvergencePoint origin{0.0, 1.0, 1.0, 0.0};
  const auto r10 = hup_vicinity(origin, VicinityParams{10.0}, qm, hvt);
  CHECK(r10.lo == doctest::Approx(-0.05).epsilon(1e-12));
  CHECK(r10.hi == doctest::Approx(0.05).epsilon(1e-12));

  // widths are exactly 1/delta_j and shrink monotonically
  double prev_width = 1e9;
  for (double dj : {0.5, 1.0, 2.0, 10.0}) {
    const auto r = hup_vicinity(center, VicinityParams{dj}, qm, hvt);
    const double width = r.hi - r.lo;
    CHECK(width == doctest::Approx(1.0 / dj).epsilon(1e-12));
    CHECK(width < prev_width);
    prev_width = width;
  }

  CHECK_THROWS_AS(hup_vicinity(center, VicinityParams{0.0}, qm, hvt), std::invalid_argument);
}

TEST_CASE("hup vicinity max gap over the built-in curves") {
  // frozen from a dense brute-force grid over [pi/2 - 0.5, pi/2 + 0.5]
  const ConvergencePoint center{kPi / 2.0, 0.0, 0.0, 0.0};
  const auto r = hup_vicinity(center, VicinityParams{1.0}, qm, hvt);
  CHECK(r.max_gap == doctest::Approx(0.1611157).epsilon(1e-4));
}

TEST_CASE("overlap regions at moderate tolerance") {
  const auto regions = overlap_regions(qm, hvt, 0.0, kPi, 1e-3, 0.05);
  REQUIRE(regions.size() == 3);
  const double roots[3] = {0.0, kPi / 2.0, kPi};
  for (int i = 0; i < 3; ++i) {
    CHECK(regions[i].lo <= roots[i] + 1e-9);
    CHECK(regions[i].hi >= roots[i] - 1e-9);
    CHECK(regions[i].max_gap <= 0.05);
  }
  // sorted and disjoint
  for (std::size_t i = 1; i < regions.size(); ++i)
    CHECK(regions[i - 1].hi < regions[i].lo);
}

TEST_CASE("overlap regions with dominating tolerance cover the range") {
  const auto regions = overlap_regions(qm, hvt, 0.0, kPi, 1e-3, 1.0);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].lo == doctest::Approx(0.0));
  CHECK(regions[0].hi == doctest::Approx(kPi));
}

TEST_CASE("overlap regions degenerate at tiny tolerance") {
  const auto regions = overlap_regions(qm, hvt, 0.0, kPi, 1e-3, 1e-12);
  REQUIRE(regions.size() == 3);
  const double roots[3] = {0.0, kPi / 2.0, kPi};
  for (int i = 0; i < 3; ++i) {
    CHECK(regions[i].hi - regions[i].lo <= 1e-3);
    CHECK(std::fabs(0.5 * (regions[i].lo + regions[i].hi) - roots[i]) <= 1e-3);
  }
  CHECK_THROWS_AS(overlap_regions(qm, hvt, 0.0, kPi, 1e-3, 0.0), std::invalid_argument);
}

TEST_CASE("overlap regions cover every convergence point") {
  for (double eps : {1e-9, 1e-4, 0.02}) {
    const auto points = find_convergence_points(qm, hvt, 0.0, kPi, 0.01, 1e-12);
    const auto regions = overlap_regions(qm, hvt, 0.0, kPi, 1e-3, eps);
    for (const auto& p : points) {
      bool covered = false;
      for (const auto& r : regions)
        if (p.theta0 >= r.lo - 1e-9 && p.theta0 <= r.hi + 1e-9) covered = true;
      CHECK(covered);
    }
  }
}
