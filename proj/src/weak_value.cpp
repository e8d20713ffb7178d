#include "fastlight/weak_value.hpp"

#include <string>

#include "fastlight/errors.hpp"

namespace fastlight {
namespace {

void require_t_tilde(double t_tilde) {
  if (!(t_tilde > 0.0 && t_tilde <= 1.0)) {
    throw InvalidArgument("line-centre transmission must be in (0, 1], got " +
                          std::to_string(t_tilde));
  }
}

}  // namespace

double weak_value(double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("weak_value: theta must be finite");
  if (std::abs(std::sin(theta) + std::cos(theta)) <= kSingularCutoff) {
    throw SingularPostSelection(
        "post-selection at theta = -45 deg is the dark port; the weak value diverges");
  }
  return weak_value_unchecked(theta);
}

double total_transmission(double t_tilde, double theta) {
  require_t_tilde(t_tilde);
  if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
  return total_transmission_unchecked(t_tilde, theta);
}

double invert_transmission(double total, double theta) {
  if (!(total > 0.0 && total <= 1.0)) {
    throw InvalidArgument("total transmission must be in (0, 1]");
  }
  const double projection = projection_weight(theta);
  if (projection < total) {
    throw InfeasibleTransmission("total transmission " + std::to_string(total) +
                                 " unreachable at theta = " + std::to_string(degrees(theta)) +
                                 " deg (sin^2(theta + 45 deg) = " +
                                 std::to_string(projection) + ")");
  }
  return total / (2.0 * projection - total);
}

PostSelection PostSelection::at(double theta) {
  if (!(theta > -std::numbers::pi / 2 && theta <= std::numbers::pi / 2)) {
    throw InvalidArgument("analyzer angle must lie in (-90, 90] deg");
  }
  return {theta, fastlight::weak_value(theta)};
}

PostSelectedPulse post_select(const PolarizedPulse& pulse, double theta) {
  if (!(pulse.h.grid == pulse.v.grid) || pulse.h.samples.size() != pulse.v.samples.size()) {
    throw InvalidArgument("post_select: components must share a grid");
  }
  PostSelectedPulse out;
  out.envelope = pulse.h;
  out.envelope.samples = std::cos(theta) * pulse.h.samples + std::sin(theta) * pulse.v.samples;
  out.throughput = pulse.input_energy > 0.0 ? out.envelope.energy() / pulse.input_energy : 0.0;
  return out;
}

}  // namespace fastlight
