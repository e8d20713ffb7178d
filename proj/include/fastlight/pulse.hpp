#pragma once

#include <complex>
#include <cstddef>
#include <functional>

#include <Eigen/Core>

#include "fastlight/atomic_response.hpp"

namespace fastlight {

/// Uniform sampling t_k = t_start + k dt, k < n_samples (a power of two >= 256).
struct TimeGrid {
  std::size_t n_samples = 4096;
  double dt = 0.0;
  double t_start = 0.0;

  /// Grid of `n` samples covering [-span/2, span/2).
  static TimeGrid centered(std::size_t n, double span);

  double span() const { return static_cast<double>(n_samples) * dt; }
  Eigen::ArrayXd times() const;
  /// Signed FFT bin angular frequencies (rad/s), Eigen::FFT ordering.
  Eigen::ArrayXd angular_frequencies() const;
  void validate() const;

  bool operator==(const TimeGrid&) const = default;
};

/// Complex slowly varying amplitude f(t) of a field f(t) exp(-i carrier t).
struct Envelope {
  TimeGrid grid;
  Eigen::ArrayXcd samples;
  double carrier = 0.0;

  Eigen::ArrayXd intensity() const { return samples.abs2(); }
  /// Trapezoidal integral of |f|^2.
  double energy() const;
  /// |f| at both ends below 1e-6 max |f|.
  bool boundary_clean() const;
};

Envelope operator*(std::complex<double> a, const Envelope& e);

/// H and V components sharing grid and carrier. `input_energy` is the energy of
/// the pulse before the medium, carried along so post-selection can report
/// throughput.
struct PolarizedPulse {
  Envelope h;
  Envelope v;
  double input_energy = 0.0;
};

PolarizedPulse operator*(std::complex<double> a, const PolarizedPulse& p);

/// amplitude * exp(-(t - center)^2 / (4 sigma^2)); the intensity has standard
/// deviation sigma.
Envelope make_gaussian(const TimeGrid& grid, double sigma, double center,
                       double amplitude = 1.0, double carrier = 0.0);

/// Pre-weighted polarization state (|H> + sqrt(T~) e^{i phi} |V>) / sqrt(1 + T~).
/// `relative_phase` pre-compensates an unequal optical path; zero by default.
PolarizedPulse prepare_input(const Envelope& pulse, double transmission_tilde,
                             double relative_phase = 0.0);

/// Refractive index as a function of the two-photon offset delta'.
using IndexProfile = std::function<std::complex<double>(double delta_prime)>;

/// Multiplies the H spectrum by exp(i (omega/c) (n(omega) - 1) L), with the
/// optical frequency omega = carrier - nu and delta' = operating_detuning + nu
/// for each baseband bin nu. V keeps only the (removed) vacuum phase.
PolarizedPulse propagate_spectral(const PolarizedPulse& pulse, const IndexProfile& index,
                                  double length, double c = kSpeedOfLight,
                                  double operating_detuning = 0.0);

/// Spectral propagation through the Lorentzian Raman line of `spec`, using the
/// medium's carrier and length.
PolarizedPulse propagate_spectral(const PolarizedPulse& pulse, const MediumSpec& spec,
                                  double operating_detuning = 0.0);

/// Idealised output state: H attenuated by exp(-2 gamma' t0) in power and
/// shifted earlier by t0 (exact spectral linear phase); V unchanged.
PolarizedPulse propagate_ideal(const PolarizedPulse& pulse, const ReducedLine& line);

/// Exact circular shift by `delay` seconds (positive = later) via linear phase.
Envelope shift(const Envelope& e, double delay);

/// RMS angular width of |F(nu)|^2 about its mean (rad/s).
double spectral_bandwidth(const Envelope& e);

/// Bandwidth relative to gamma'; above 10 the line reshapes the pulse.
inline bool is_narrowband(const Envelope& e, double gamma_prime) {
  return spectral_bandwidth(e) <= 10.0 * gamma_prime;
}

}  // namespace fastlight
