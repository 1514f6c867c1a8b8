#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellkit/angles.hpp"

namespace bellkit {

enum class ConfigurationKind { Aligned, Orthogonal, Random };

inline std::string to_string(ConfigurationKind k) {
  switch (k) {
    case ConfigurationKind::Aligned: return "Aligned";
    case ConfigurationKind::Orthogonal: return "Orthogonal";
    default: return "Random";
  }
}

struct ConfigurationClass {
  ConfigurationKind kind = ConfigurationKind::Random;
  double tolerance = 0.0;
};

// Aligned: all pairwise separations <= tol. Orthogonal: all pairwise
// separations within tol of pi/2. Anything else is Random.
inline ConfigurationClass classify_configuration(std::span<const MeasurementSetting> settings,
                                                 double tolerance) {
  if (settings.size() < 2)
    throw std::invalid_argument("classify_configuration: need >= 2 settings");
  if (tolerance <= 0.0)
    throw std::invalid_argument("classify_configuration: tolerance must be > 0");
  bool aligned = true, orthogonal = true;
  for (std::size_t i = 0; i < settings.size(); ++i)
    for (std::size_t j = i + 1; j < settings.size(); ++j) {
      const double sep = folded_separation(settings[i].observable_angle(),
                                           settings[j].observable_angle());
      if (sep > tolerance) aligned = false;
      if (std::fabs(sep - kPi / 2.0) > tolerance) orthogonal = false;
    }
  ConfigurationKind kind = ConfigurationKind::Random;
  if (aligned)
    kind = ConfigurationKind::Aligned;
  else if (orthogonal)
    kind = ConfigurationKind::Orthogonal;
  return {kind, tolerance};
}

// Delta_theta = hbar / (2 * Delta_J) with hbar = 1.
struct VicinityParams {
  double delta_j = 1.0;

  double delta_theta() const { return 1.0 / (2.0 * delta_j); }
};

struct ConvergencePoint {
  double theta0 = 0.0;
  double qm_value = 0.0;
  double hvt_value = 0.0;
  double residual = 0.0;
};

struct ConvergenceRegion {
  enum class Origin { HupVicinity, ToleranceScan };

  double lo = 0.0;
  double hi = 0.0;
  double max_gap = 0.0;  // sup of |qm - hvt| over [lo, hi]
  Origin origin = Origin::ToleranceScan;
  double origin_param = 0.0;  // delta_j or epsilon
};

using Curve = std::function<double(double)>;

namespace detail {

inline std::vector<double> make_grid(double lo, double hi, double step) {
  std::vector<double> grid;
  const long long n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  grid.reserve(static_cast<std::size_t>(n) + 2);
  for (long long k = 0; k <= n; ++k) grid.push_back(lo + static_cast<double>(k) * step);
  if (grid.back() < hi - 1e-12 * std::max(1.0, std::fabs(hi))) grid.push_back(hi);
  return grid;
}

// Bisection on f = qm - hvt; curves may be piecewise-linear with kinks, so
// no derivative-based refinement.
inline double bisect_root(const Curve& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (std::fabs(fmid) <= tol || (hi - lo) < 1e-15 * std::max(1.0, std::fabs(mid)))
      return mid;
    if ((flo < 0.0) == (fmid < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Grid-brackets sign changes of qm - hvt and refines them by bisection;
// grid points already within tol (tangencies) are kept as-is. Results are
// sorted and deduplicated at half the grid step.
inline std::vector<ConvergencePoint> find_convergence_points(const Curve& qm, const Curve& hvt,
                                                             double lo, double hi,
                                                             double grid_step, double tol) {
  if (!(hi > lo)) throw std::invalid_argument("find_convergence_points: empty range");
  if (grid_step <= 0.0) throw std::invalid_argument("find_convergence_points: step must be > 0");
  const Curve f = [&](double t) { return qm(t) - hvt(t); };

  const auto grid = detail::make_grid(lo, hi, grid_step);
  std::vector<double> roots;
  double prev_t = grid.front();
  double prev_f = f(prev_t);
  if (std::fabs(prev_f) <= tol) roots.push_back(prev_t);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double t = grid[k];
    const double ft = f(t);
    if (std::fabs(ft) <= tol) {
      roots.push_back(t);
    } else if (std::fabs(prev_f) > tol && (prev_f < 0.0) != (ft < 0.0)) {
      roots.push_back(detail::bisect_root(f, prev_t, t, tol));
    }
    prev_t = t;
    prev_f = ft;
  }

  std::sort(roots.begin(), roots.end());
  std::vector<ConvergencePoint> points;
  for (const double t : roots) {
    if (!points.empty() && t - points.back().theta0 < 0.5 * grid_step) continue;
    const double q = qm(t), h = hvt(t);
    points.push_back({t, q, h, std::fabs(q - h)});
  }
  return points;
}

// HUP vicinity [theta0 - dt, theta0 + dt], dt = 1/(2*Delta_J); max_gap by
// dense evaluation at <= 1e-3 rad.
inline ConvergenceRegion hup_vicinity(const ConvergencePoint& point, const VicinityParams& params,
                                      const Curve& qm, const Curve& hvt,
                                      double scan_step = 1e-3) {
  if (params.delta_j <= 0.0) throw std::invalid_argument("hup_vicinity: delta_j must be > 0");
  const double dt = params.delta_theta();
  ConvergenceRegion region;
  region.lo = point.theta0 - dt;
  region.hi = point.theta0 + dt;
  region.origin = ConvergenceRegion::Origin::HupVicinity;
  region.origin_param = params.delta_j;
  const double step = std::min(scan_step, std::max(1e-9, (region.hi - region.lo) / 100.0));
  for (const double t : detail::make_grid(region.lo, region.hi, step))
    region.max_gap = std::max(region.max_gap, std::fabs(qm(t) - hvt(t)));
  return region;
}

// Maximal intervals where |qm - hvt| <= eps on a dense grid. Convergence
// points are injected into the grid so every root is covered even when eps
// is far below the grid resolution (regions then degenerate to points).
inline std::vector<ConvergenceRegion> overlap_regions(const Curve& qm, const Curve& hvt,
                                                      double lo, double hi, double step,
                                                      double eps) {
  if (eps <= 0.0) throw std::invalid_argument("overlap_regions: eps must be > 0");
  auto grid = detail::make_grid(lo, hi, step);
  for (const auto& p : find_convergence_points(qm, hvt, lo, hi, step, std::min(eps, 1e-12)))
    grid.push_back(p.theta0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<ConvergenceRegion> regions;
  bool open = false;
  ConvergenceRegion current;
  for (const double t : grid) {
    const double gap = std::fabs(qm(t) - hvt(t));
    if (gap <= eps) {
      if (!open) {
        current = {t, t, gap, ConvergenceRegion::Origin::ToleranceScan, eps};
        open = true;
      } else {
        current.hi = t;
        current.max_gap = std::max(current.max_gap, gap);
      }
    } else if (open) {
      regions.push_back(current);
      open = false;
    }
  }
  if (open) regions.push_back(current);
  return regions;
}

}  // namespace bellkit
