#pragma once

#include <complex>
#include <cstddef>
#include <type_traits>

#include <Eigen/Core>

namespace fastlight {

inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kHbar = 1.054571817e-34;             // J s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m

/// Physical parameters of the coupling-induced Raman line in a Lambda system.
/// Rates are angular (rad/s), lengths in metres.
struct MediumSpec {
  double beta = 0.0;          ///< N mu^2 / (hbar eps0)
  double gamma = 0.0;         ///< ground-state decoherence rate
  double Gamma = 0.0;         ///< excited-state decoherence rate
  double omega_c_rabi = 0.0;  ///< |Omega_c|
  double Delta = 0.0;         ///< one-photon detuning
  double length = 0.0;        ///< propagation length
  double omega0 = 0.0;        ///< optical carrier frequency
  double c = kSpeedOfLight;

  /// Throws InvalidArgument naming the first violated field.
  void validate() const;

  bool operator==(const MediumSpec&) const = default;
};

/// Two-parameter description of the line at its centre: the differential
/// group advance t0 and effective linewidth gamma' = gamma + gamma0.
struct ReducedLine {
  double t0 = 0.0;           ///< magnitude of the differential group delay (s)
  double gamma_prime = 0.0;  ///< rad/s
  bool advance = true;       ///< true when n_g < 1 at line centre (fast light)

  void validate() const;

  bool operator==(const ReducedLine&) const = default;
};

/// Bare Lorentzian  chi(d) = strength * (d + i width) / (d^2 + width^2).
struct LineShape {
  double strength = 0.0;  ///< beta |Omega_c|^2 / (4 Delta^2)
  double width = 0.0;     ///< gamma'
};

/// Full response at one detuning.
struct ComplexResponse {
  double delta_prime = 0.0;
  std::complex<double> chi;
  std::complex<double> n;
  double alpha = 0.0;  ///< (omega/c) Im n, 1/m
  double n_g = 1.0;
};

enum class LorentzianValidity { valid, marginal, invalid };

/// |Delta| >= 100 Gamma: valid; 10 <= |Delta|/Gamma < 100: marginal.
LorentzianValidity lorentzian_validity(const MediumSpec& spec);

/// Light shift delta0 = |Omega_c|^2 Delta / (4 Delta^2 + Gamma^2).
double light_shift(const MediumSpec& spec);
/// Power broadening gamma0 = |Omega_c|^2 Gamma / (8 Delta^2 + 2 Gamma^2).
double power_broadening(const MediumSpec& spec);
double effective_linewidth(const MediumSpec& spec);

/// beta = N mu^2 / (hbar eps0) from number density (1/m^3) and dipole moment (C m).
double coupling_strength(double number_density, double dipole_moment);

/// Lorentzian shape of the Raman line; enforces the |Delta| >= 10 Gamma guard.
LineShape line_shape(const MediumSpec& spec);

/// Shape of a reduced line observed at carrier `omega0` through `length`,
/// chosen so that group_advance of an equivalent medium reproduces `line.t0`.
LineShape line_shape(const ReducedLine& line, double omega0, double length,
                     double c = kSpeedOfLight);

template <typename Scalar>
  requires(!std::is_base_of_v<Eigen::EigenBase<Scalar>, Scalar>)
std::complex<Scalar> lorentzian(const LineShape& shape, Scalar delta_prime) {
  const Scalar w = Scalar(shape.width);
  return Scalar(shape.strength) * std::complex<Scalar>(delta_prime, w) /
         (delta_prime * delta_prime + w * w);
}

/// Vectorised over a detuning array.
template <typename Derived>
Eigen::ArrayXcd lorentzian(const LineShape& shape,
                           const Eigen::ArrayBase<Derived>& delta_prime) {
  return delta_prime.derived().unaryExpr(
      [&](double d) { return lorentzian(shape, d); });
}

/// Exact Lambda-system susceptibility at two-photon detuning `delta`.
std::complex<double> chi_full(double delta, const MediumSpec& spec);

/// delta -> infinity limit of chi_full: the one-photon background
/// beta / (Delta - i Gamma / 2) on which the Raman line sits.
std::complex<double> chi_background(const MediumSpec& spec);

/// Far-detuned Lorentzian susceptibility at offset `delta_prime` from the
/// light-shifted two-photon resonance.
std::complex<double> chi_lorentzian(double delta_prime, const MediumSpec& spec);

/// n = 1 + chi / 2; requires |chi| < 0.5.
std::complex<double> refractive_index(std::complex<double> chi);

/// Real group index n_g = Re n + omega d Re n / d omega, by central finite
/// difference. The optical frequency decreases as delta' increases
/// (omega = omega0 - delta'), so an absorption line yields n_g < 1 at its centre.
double group_index(double delta_prime, const LineShape& shape, double omega0);
double group_index(double delta_prime, const MediumSpec& spec);

ComplexResponse response(double delta_prime, const MediumSpec& spec);

/// Line-centre advance t0 = beta (L/c) (|Omega_c|^2 / 8 Delta^2) (omega / gamma'^2).
ReducedLine group_advance(const MediumSpec& spec);

/// Copy of `spec` with beta rescaled so that group_advance(...).t0 == t0.
MediumSpec with_advance(const MediumSpec& spec, double t0);

/// Line-centre field absorption coefficient alpha = (omega/c) Im n (1/m).
double absorption(const MediumSpec& spec);
/// Power transmission exp(-2 alpha L) through the medium at line centre.
double transmission(const MediumSpec& spec);
/// exp(-2 gamma' t0).
double transmission(const ReducedLine& line);

/// Symmetric detuning grid, in units of rad/s, about the line centre.
struct DetuningGrid {
  double half_span = 0.0;
  std::size_t n_points = 0;

  Eigen::ArrayXd points() const;
  double step() const;
};

struct KramersKronigReport {
  double residual = 0.0;  ///< max |Re chi - H[Im chi]| / max |Re chi|, central half
  bool consistent = false;  ///< residual < 0.02
};

/// Discrete Hilbert transform (1/pi) P int v(y) / (x - y) dy of samples on a
/// uniform grid with spacing `step`. Uses the alternating-point quadrature
/// evaluated as a linear (non-circular) FFT convolution.
Eigen::ArrayXd hilbert_transform(const Eigen::ArrayXd& samples, double step,
                                 double taper_fraction = 0.05);

/// KK residual of arbitrary susceptibility samples on a uniform grid.
KramersKronigReport kk_residual(const Eigen::ArrayXcd& chi, double step);

/// Samples chi_lorentzian over `grid` and checks it against its own Hilbert
/// transform. The grid must span >= 40 gamma' either side with >= 2^12 points.
KramersKronigReport kk_check(const MediumSpec& spec, const DetuningGrid& grid);
KramersKronigReport kk_check(const LineShape& shape, const DetuningGrid& grid);

}  // namespace fastlight
