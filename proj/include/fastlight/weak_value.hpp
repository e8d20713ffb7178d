#pragma once

#include <cmath>
#include <numbers>

#include "fastlight/pulse.hpp"

namespace fastlight {

/// |sin theta + cos theta| at or below this is treated as the dark port.
inline constexpr double kSingularCutoff = 1e-12;

/// Weak value of |H><H| for post-selection onto cos(theta)|H> + sin(theta)|V>
/// from the balanced output state. No singularity check; see weak_value().
template <typename Scalar>
Scalar weak_value_unchecked(Scalar theta) {
  using std::cos;
  using std::sin;
  return cos(theta) / (sin(theta) + cos(theta));
}

/// A_w = cos(theta) / (sin(theta) + cos(theta)). Throws SingularPostSelection
/// at theta = -45 degrees.
double weak_value(double theta);

/// Total transmission 2 T~ sin^2(theta + pi/4) / (1 + T~) of the idealised
/// post-selected pulse, evaluated as T~ (1 + sin 2 theta) / (1 + T~).
template <typename Scalar>
Scalar total_transmission_unchecked(Scalar t_tilde, Scalar theta) {
  using std::sin;
  return t_tilde * (Scalar(1) + sin(Scalar(2) * theta)) / (Scalar(1) + t_tilde);
}

double total_transmission(double t_tilde, double theta);

/// Line-centre transmission T~ = T / (2 sin^2(theta + pi/4) - T) giving total
/// transmission T at angle theta. Throws InfeasibleTransmission when
/// sin^2(theta + pi/4) < T (no T~ <= 1 exists).
double invert_transmission(double total, double theta);

/// sin^2(theta + pi/4), exact at 0 and +-45 degrees.
inline double projection_weight(double theta) { return 0.5 * (1.0 + std::sin(2.0 * theta)); }

/// Analyzer angle theta in (-pi/2, pi/2], measured from H towards V.
struct PostSelection {
  double theta = 0.0;
  double weak_value = 1.0;

  static PostSelection at(double theta);
};

struct PostSelectedPulse {
  Envelope envelope;        ///< cos(theta) h + sin(theta) v, unnormalised
  double throughput = 0.0;  ///< energy(envelope) / energy before the medium
};

PostSelectedPulse post_select(const PolarizedPulse& pulse, double theta);

inline double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }
inline double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

}  // namespace fastlight
