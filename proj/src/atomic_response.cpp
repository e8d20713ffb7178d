#include "fastlight/atomic_response.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "fastlight/errors.hpp"

namespace fastlight {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidArgument(message);
}

double index_excess(const LineShape& shape, double delta_prime) {
  return 0.5 * lorentzian(shape, delta_prime).real();
}

}  // namespace

void MediumSpec::validate() const {
  require(std::isfinite(beta) && beta >= 0.0, "medium.beta must be finite and >= 0");
  require(std::isfinite(gamma) && gamma > 0.0, "medium.gamma must be > 0");
  require(std::isfinite(Gamma) && Gamma > 0.0, "medium.Gamma must be > 0");
  require(std::isfinite(omega_c_rabi) && omega_c_rabi >= 0.0,
          "medium.omega_c_rabi must be >= 0");
  require(std::isfinite(Delta), "medium.Delta must be finite");
  require(std::isfinite(length) && length >= 0.0, "medium.length must be >= 0");
  require(std::isfinite(omega0) && omega0 > 0.0, "medium.omega0 must be > 0");
  require(std::isfinite(c) && c > 0.0, "medium.c must be > 0");
}

void ReducedLine::validate() const {
  require(std::isfinite(t0) && t0 >= 0.0, "line.t0 must be >= 0");
  require(std::isfinite(gamma_prime) && gamma_prime > 0.0,
          "line.gamma_prime must be > 0");
}

LorentzianValidity lorentzian_validity(const MediumSpec& spec) {
  const double ratio = std::abs(spec.Delta) / spec.Gamma;
  if (ratio < 10.0) return LorentzianValidity::invalid;
  if (ratio < 100.0) return LorentzianValidity::marginal;
  return LorentzianValidity::valid;
}

double light_shift(const MediumSpec& spec) {
  const double rabi2 = spec.omega_c_rabi * spec.omega_c_rabi;
  return rabi2 * spec.Delta /
         (4.0 * spec.Delta * spec.Delta + spec.Gamma * spec.Gamma);
}

double power_broadening(const MediumSpec& spec) {
  const double rabi2 = spec.omega_c_rabi * spec.omega_c_rabi;
  return rabi2 * spec.Gamma /
         (8.0 * spec.Delta * spec.Delta + 2.0 * spec.Gamma * spec.Gamma);
}

double effective_linewidth(const MediumSpec& spec) {
  return spec.gamma + power_broadening(spec);
}

double coupling_strength(double number_density, double dipole_moment) {
  require(number_density >= 0.0, "number density must be >= 0");
  return number_density * dipole_moment * dipole_moment /
         (kHbar * kVacuumPermittivity);
}

LineShape line_shape(const MediumSpec& spec) {
  spec.validate();
  if (lorentzian_validity(spec) == LorentzianValidity::invalid) {
    const double ratio = std::abs(spec.Delta) / spec.Gamma;
    throw ApproximationDomainError(
        "Lorentzian limit requires |Delta| >= 10 Gamma, got |Delta|/Gamma = " +
            std::to_string(ratio),
        ratio);
  }
  const double rabi2 = spec.omega_c_rabi * spec.omega_c_rabi;
  return {spec.beta * rabi2 / (4.0 * spec.Delta * spec.Delta),
          effective_linewidth(spec)};
}

LineShape line_shape(const ReducedLine& line, double omega0, double length, double c) {
  line.validate();
  require(omega0 > 0.0, "omega0 must be > 0");
  require(length > 0.0, "length must be > 0");
  const double g = line.gamma_prime;
  return {2.0 * line.t0 * c * g * g / (omega0 * length), g};
}

std::complex<double> chi_full(double delta, const MediumSpec& spec) {
  spec.validate();
  require(std::isfinite(delta), "delta must be finite");
  using namespace std::complex_literals;
  const std::complex<double> two_photon = delta - 1i * spec.gamma;
  const std::complex<double> one_photon = spec.Delta - 0.5i * spec.Gamma;
  const std::complex<double> den =
      two_photon * one_photon - 0.25 * spec.omega_c_rabi * spec.omega_c_rabi;
  if (spec.beta == 0.0) return 0.0;
  if (std::abs(den) < 1e-30 * std::abs(two_photon)) {
    throw NumericalError("chi_full: degenerate parameters, denominator vanishes");
  }
  return spec.beta * two_photon / den;
}

std::complex<double> chi_background(const MediumSpec& spec) {
  spec.validate();
  using namespace std::complex_literals;
  return spec.beta / (spec.Delta - 0.5i * spec.Gamma);
}

std::complex<double> chi_lorentzian(double delta_prime, const MediumSpec& spec) {
  return lorentzian(line_shape(spec), delta_prime);
}

std::complex<double> refractive_index(std::complex<double> chi) {
  if (!(std::abs(chi) < 0.5)) {
    throw InvalidArgument("refractive_index: |chi| = " + std::to_string(std::abs(chi)) +
                          " outside the weak-susceptibility regime (< 0.5)");
  }
  return 1.0 + 0.5 * chi;
}

double group_index(double delta_prime, const LineShape& shape, double omega0) {
  const double h = std::max(1e-4 * shape.width, std::abs(delta_prime) * 1e-6);
  const double up = delta_prime + h;
  const double down = delta_prime - h;
  if (!(h > 0.0) || up == delta_prime || down == delta_prime) {
    throw NumericalError("group_index: finite-difference step underflow");
  }
  // Re n - 1 is differenced directly; subtracting from 1 first would cancel
  // most of the significant digits.
  const double slope =
      (index_excess(shape, up) - index_excess(shape, down)) / (2.0 * h);
  const double omega = omega0 - delta_prime;
  return 1.0 + index_excess(shape, delta_prime) - omega * slope;
}

double group_index(double delta_prime, const MediumSpec& spec) {
  return group_index(delta_prime, line_shape(spec), spec.omega0);
}

ComplexResponse response(double delta_prime, const MediumSpec& spec) {
  ComplexResponse r;
  r.delta_prime = delta_prime;
  r.chi = chi_lorentzian(delta_prime, spec);
  r.n = refractive_index(r.chi);
  r.alpha = (spec.omega0 - delta_prime) / spec.c * r.n.imag();
  r.n_g = group_index(delta_prime, spec);
  return r;
}

ReducedLine group_advance(const MediumSpec& spec) {
  const LineShape shape = line_shape(spec);
  const double g = shape.width;
  ReducedLine line;
  line.gamma_prime = g;
  line.t0 = spec.beta * (spec.length / spec.c) *
            (spec.omega_c_rabi * spec.omega_c_rabi / (8.0 * spec.Delta * spec.Delta)) *
            (spec.omega0 / (g * g));
  line.advance = group_index(0.0, shape, spec.omega0) <= 1.0;
  return line;
}

MediumSpec with_advance(const MediumSpec& spec, double t0) {
  require(t0 >= 0.0, "target t0 must be >= 0");
  const ReducedLine current = group_advance(spec);
  if (!(current.t0 > 0.0)) {
    throw InvalidArgument("with_advance: medium has no advance to rescale");
  }
  MediumSpec out = spec;
  out.beta *= t0 / current.t0;
  return out;
}

double absorption(const MediumSpec& spec) {
  const LineShape shape = line_shape(spec);
  return spec.omega0 / spec.c * shape.strength / (2.0 * shape.width);
}

double transmission(const MediumSpec& spec) {
  return std::exp(-2.0 * absorption(spec) * spec.length);
}

double transmission(const ReducedLine& line) {
  line.validate();
  return std::exp(-2.0 * line.gamma_prime * line.t0);
}

Eigen::ArrayXd DetuningGrid::points() const {
  return Eigen::ArrayXd::LinSpaced(static_cast<Eigen::Index>(n_points), -half_span,
                                   half_span);
}

double DetuningGrid::step() const {
  return 2.0 * half_span / static_cast<double>(n_points - 1);
}

Eigen::ArrayXd hilbert_transform(const Eigen::ArrayXd& samples, double step,
                                 double taper_fraction) {
  const auto n = static_cast<std::size_t>(samples.size());
  if (n < 4) throw GridError("hilbert_transform: need at least 4 samples");
  if (!(step > 0.0)) throw GridError("hilbert_transform: step must be > 0");

  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;

  std::vector<std::complex<double>> data(m, 0.0);
  const auto taper = static_cast<std::size_t>(taper_fraction * static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    double w = 1.0;
    const std::size_t edge = std::min(j, n - 1 - j);
    if (edge < taper) {
      w = 0.5 * (1.0 - std::cos(M_PI * static_cast<double>(edge) /
                                static_cast<double>(taper)));
    }
    data[j] = w * samples[static_cast<Eigen::Index>(j)];
  }

  // Alternating-point kernel: only odd offsets contribute, weight 2 / (pi m).
  std::vector<std::complex<double>> kernel(m, 0.0);
  for (std::size_t k = 1; k < n; k += 2) {
    const double value = 2.0 / (M_PI * static_cast<double>(k));
    kernel[k] = value;
    kernel[m - k] = -value;
  }

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> data_hat;
  std::vector<std::complex<double>> kernel_hat;
  fft.fwd(data_hat, data);
  fft.fwd(kernel_hat, kernel);
  for (std::size_t k = 0; k < m; ++k) data_hat[k] *= kernel_hat[k];
  std::vector<std::complex<double>> out;
  fft.inv(out, data_hat);

  Eigen::ArrayXd result(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) result[static_cast<Eigen::Index>(j)] = out[j].real();
  return result;
}

KramersKronigReport kk_residual(const Eigen::ArrayXcd& chi, double step) {
  const Eigen::ArrayXd re = chi.real();
  const Eigen::ArrayXd transformed = hilbert_transform(chi.imag(), step);
  const Eigen::Index n = chi.size();
  const Eigen::Index lo = n / 4;
  const Eigen::Index len = n / 2;
  const double mismatch = (re.segment(lo, len) - transformed.segment(lo, len)).abs().maxCoeff();
  const double scale = re.abs().maxCoeff();

  KramersKronigReport report;
  if (scale > 0.0) {
    report.residual = mismatch / scale;
  } else {
    report.residual = mismatch > 0.0 ? INFINITY : 0.0;
  }
  report.consistent = report.residual < 0.02;
  return report;
}

KramersKronigReport kk_check(const LineShape& shape, const DetuningGrid& grid) {
  if (grid.n_points < 4096) {
    throw GridError("kk_check: grid needs >= 4096 points, got " +
                    std::to_string(grid.n_points));
  }
  if (grid.half_span < 40.0 * shape.width * (1.0 - 1e-12)) {
    throw GridError("kk_check: grid must span >= 40 gamma' either side of line centre");
  }
  return kk_residual(lorentzian(shape, grid.points()), grid.step());
}

KramersKronigReport kk_check(const MediumSpec& spec, const DetuningGrid& grid) {
  return kk_check(line_shape(spec), grid);
}

}  // namespace fastlight
