#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fastlight/atomic_response.hpp"
#include "fastlight/errors.hpp"
#include "fastlight/pulse.hpp"

namespace fastlight {

enum class ArrivalMethod { centroid, gaussian_fit };

/// Estimated arrival of an intensity profile.
struct ArrivalEstimate {
  double center = 0.0;
  double width = 0.0;      ///< intensity standard deviation (s)
  double amplitude = 0.0;  ///< peak intensity of the Gaussian model
  double baseline = 0.0;
  /// RMS of (model - data) over center +- 3 width, relative to peak intensity.
  double residual_rms = 0.0;
  ArrivalMethod method = ArrivalMethod::centroid;

  /// Residual above 1e-3: the trace is no longer a clean Gaussian.
  bool distorted() const { return residual_rms > 1e-3; }
};

/// Thrown when the Gaussian fit does not converge; carries the moment estimate.
class FitFailure : public NumericalError {
 public:
  FitFailure(const std::string& what, ArrivalEstimate fallback)
      : NumericalError(what), fallback_(fallback) {}
  const ArrivalEstimate& fallback() const noexcept { return fallback_; }

 private:
  ArrivalEstimate fallback_;
};

/// First and second intensity moments by trapezoidal quadrature.
ArrivalEstimate centroid(const Envelope& envelope);

struct FitOptions {
  bool fit_baseline = false;  ///< 4th constant-offset parameter, for imported traces
  int max_iterations = 100;
  double step_tolerance = 1e-9;  ///< in units of the fitted width
};

/// Levenberg-Marquardt fit of a exp(-(t - mu)^2 / (2 w^2)) [+ b] to the
/// intensity, started from the centroid moments.
ArrivalEstimate fit_gaussian(const Envelope& envelope, const FitOptions& options = {});

/// measured_advance / t0 (positive: advance amplified).
double amplification_factor(double measured_advance, const ReducedLine& line);

/// Longest advance the atomic line alone can give at transmission T:
/// -ln(T) / (2 gamma').
double t_atom(double transmission, double gamma_prime);

/// A_w(theta) ln(2 sin^2(theta + pi/4) / T - 1), the advance in units of
/// 1 / (2 gamma') after post-selection at theta with total transmission T.
/// Returns -infinity outside the feasible advance branch
/// {sin^2(theta + pi/4) >= T, sin theta + cos theta > 0}.
double wva_objective(double theta, double transmission);

/// Closed interval of feasible analyzer angles for total transmission T.
struct AngleInterval {
  double lo = 0.0;
  double hi = 0.0;
};
AngleInterval feasible_angles(double transmission);

struct WvaOptimum {
  double t = 0.0;      ///< seconds
  double theta = 0.0;  ///< argmax (rad)
};

/// Maximises wva_objective over theta: 2000-point scan of the feasible
/// interval, then golden-section refinement to |d theta| < 1e-9.
WvaOptimum t_wva(double transmission, double gamma_prime);

/// Maximum of a unimodal function on [lo, hi] by golden-section search.
double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance, int max_iterations = 200);

/// Transmission below which post-selection beats the bare line:
/// root of t_wva(T) - t_atom(T), bisected on [1e-3, 0.5] to |dT| < 1e-5.
double crossover(double gamma_prime);

struct ScalingPoint {
  double transmission = 0.0;
  double t_atom = 0.0;  ///< s
  double t_wva = 0.0;   ///< s
  double theta_opt = 0.0;
};

std::vector<ScalingPoint> scaling_curve(std::span<const double> transmissions,
                                        double gamma_prime);

}  // namespace fastlight
