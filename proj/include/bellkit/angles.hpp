#pragma once

#include <cmath>
#include <numbers>

namespace bellkit {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTsirelsonBound = 2.0 * std::numbers::sqrt2;

// ObservableAngle: the stored angle is the direction of the measured
// observable cos(t)Z + sin(t)X in the X-Z plane.
// HalfAngle: polarizer-style rotation parameter; the observable direction
// is twice the stored angle.
enum class AngleConvention { ObservableAngle, HalfAngle };

struct MeasurementSetting {
  double angle = 0.0;
  AngleConvention convention = AngleConvention::ObservableAngle;

  double observable_angle() const {
    return convention == AngleConvention::HalfAngle ? 2.0 * angle : angle;
  }
};

inline MeasurementSetting observable_setting(double angle) {
  return {angle, AngleConvention::ObservableAngle};
}

inline MeasurementSetting half_angle_setting(double angle) {
  return {angle, AngleConvention::HalfAngle};
}

// Angular separation folded into [0, pi].
inline double folded_separation(double a, double b) {
  double d = std::fmod(std::fabs(a - b), 2.0 * kPi);
  if (d > kPi) d = 2.0 * kPi - d;
  return d;
}

}  // namespace bellkit
