#include "fastlight/pulse.hpp"

#include <bit>
#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

#include "fastlight/errors.hpp"

namespace fastlight {
namespace {

Eigen::ArrayXcd forward_fft(const Eigen::ArrayXcd& x) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd out;
  const Eigen::VectorXcd in = x.matrix();
  fft.fwd(out, in);
  return out.array();
}

Eigen::ArrayXcd inverse_fft(const Eigen::ArrayXcd& x) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd out;
  const Eigen::VectorXcd in = x.matrix();
  fft.inv(out, in);
  return out.array();
}

void require_same_frame(const PolarizedPulse& p) {
  if (!(p.h.grid == p.v.grid) || p.h.carrier != p.v.carrier ||
      p.h.samples.size() != p.v.samples.size()) {
    throw InvalidArgument("polarized pulse components must share grid and carrier");
  }
}

void require_clean(const Envelope& e, const char* where) {
  if (!e.boundary_clean()) {
    throw GridError(std::string(where) +
                    ": pulse reaches the grid boundary (wraparound); enlarge the grid");
  }
}

}  // namespace

TimeGrid TimeGrid::centered(std::size_t n, double span) {
  TimeGrid g{n, span / static_cast<double>(n), -0.5 * span};
  g.validate();
  return g;
}

void TimeGrid::validate() const {
  if (n_samples < 256 || !std::has_single_bit(n_samples)) {
    throw GridError("time grid needs a power-of-two sample count >= 256, got " +
                    std::to_string(n_samples));
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw GridError("time grid dt must be > 0");
  if (!std::isfinite(t_start)) throw GridError("time grid t_start must be finite");
}

Eigen::ArrayXd TimeGrid::times() const {
  const auto n = static_cast<Eigen::Index>(n_samples);
  return t_start + dt * Eigen::ArrayXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
}

Eigen::ArrayXd TimeGrid::angular_frequencies() const {
  const auto n = static_cast<Eigen::Index>(n_samples);
  Eigen::ArrayXd nu(n);
  const double scale = 2.0 * M_PI / (static_cast<double>(n) * dt);
  for (Eigen::Index k = 0; k < n; ++k) {
    nu[k] = scale * static_cast<double>(k < n / 2 ? k : k - n);
  }
  return nu;
}

double Envelope::energy() const {
  const Eigen::ArrayXd i = intensity();
  const Eigen::Index n = i.size();
  if (n == 0) return 0.0;
  return grid.dt * (i.sum() - 0.5 * (i[0] + i[n - 1]));
}

bool Envelope::boundary_clean() const {
  const Eigen::ArrayXd mag = samples.abs();
  const Eigen::Index n = mag.size();
  if (n == 0) return true;
  const double limit = 1e-6 * mag.maxCoeff();
  return mag[0] <= limit && mag[n - 1] <= limit;
}

Envelope operator*(std::complex<double> a, const Envelope& e) {
  Envelope out = e;
  out.samples = a * e.samples;
  return out;
}

PolarizedPulse operator*(std::complex<double> a, const PolarizedPulse& p) {
  return {a * p.h, a * p.v, std::norm(a) * p.input_energy};
}

Envelope make_gaussian(const TimeGrid& grid, double sigma, double center,
                       double amplitude, double carrier) {
  grid.validate();
  if (!(sigma > 0.0)) throw InvalidArgument("make_gaussian: sigma must be > 0");
  const double span = grid.span();
  if (16.0 * sigma > span) {
    throw GridError("make_gaussian: grid span " + std::to_string(span) +
                    " s is shorter than 16 sigma");
  }
  if (center < grid.t_start + 0.25 * span || center > grid.t_start + 0.75 * span) {
    throw GridError("make_gaussian: center must lie in the middle half of the grid");
  }
  Envelope e;
  e.grid = grid;
  e.carrier = carrier;
  const Eigen::ArrayXd u = (grid.times() - center) / (2.0 * sigma);
  e.samples = (amplitude * (-u.square()).exp()).cast<std::complex<double>>();
  require_clean(e, "make_gaussian");
  return e;
}

PolarizedPulse prepare_input(const Envelope& pulse, double transmission_tilde,
                             double relative_phase) {
  if (!(transmission_tilde > 0.0 && transmission_tilde <= 1.0)) {
    throw InvalidArgument("prepare_input: line-centre transmission must be in (0, 1]");
  }
  const double norm = 1.0 / std::sqrt(1.0 + transmission_tilde);
  PolarizedPulse out;
  out.h = norm * pulse;
  out.v = std::polar(std::sqrt(transmission_tilde) * norm, relative_phase) * pulse;
  out.input_energy = pulse.energy();
  return out;
}

PolarizedPulse propagate_spectral(const PolarizedPulse& pulse, const IndexProfile& index,
                                  double length, double c, double operating_detuning) {
  require_same_frame(pulse);
  pulse.h.grid.validate();
  if (!(length >= 0.0)) throw InvalidArgument("propagate_spectral: length must be >= 0");

  const Eigen::ArrayXd nu = pulse.h.grid.angular_frequencies();
  const double carrier = pulse.h.carrier;
  Eigen::ArrayXcd transfer(nu.size());
  bool identity = true;
  for (Eigen::Index k = 0; k < nu.size(); ++k) {
    const double omega = carrier - nu[k];
    const std::complex<double> n = index(operating_detuning + nu[k]);
    transfer[k] = std::exp(std::complex<double>(0.0, omega / c * length) * (n - 1.0));
    identity = identity && transfer[k] == std::complex<double>(1.0, 0.0);
  }

  PolarizedPulse out = pulse;
  if (identity) return out;
  out.h.samples = inverse_fft(forward_fft(pulse.h.samples) * transfer);
  require_clean(out.h, "propagate_spectral");
  return out;
}

PolarizedPulse propagate_spectral(const PolarizedPulse& pulse, const MediumSpec& spec,
                                  double operating_detuning) {
  const LineShape shape = line_shape(spec);
  PolarizedPulse framed = pulse;
  framed.h.carrier = spec.omega0;
  framed.v.carrier = spec.omega0;
  const IndexProfile index = [shape](double delta_prime) {
    return refractive_index(lorentzian(shape, delta_prime));
  };
  return propagate_spectral(framed, index, spec.length, spec.c, operating_detuning);
}

Envelope shift(const Envelope& e, double delay) {
  if (delay == 0.0) return e;
  const Eigen::ArrayXd nu = e.grid.angular_frequencies();
  const Eigen::ArrayXcd phase =
      (std::complex<double>(0.0, -delay) * nu.cast<std::complex<double>>()).exp();
  Envelope out = e;
  out.samples = inverse_fft(forward_fft(e.samples) * phase);
  return out;
}

PolarizedPulse propagate_ideal(const PolarizedPulse& pulse, const ReducedLine& line) {
  require_same_frame(pulse);
  line.validate();
  if (line.t0 > 0.25 * pulse.h.grid.span()) {
    throw GridError("propagate_ideal: advance exceeds a quarter of the grid span");
  }
  PolarizedPulse out = pulse;
  const double amplitude = std::sqrt(transmission(line));
  out.h = amplitude * shift(pulse.h, -line.t0);
  require_clean(out.h, "propagate_ideal");
  return out;
}

double spectral_bandwidth(const Envelope& e) {
  const Eigen::ArrayXd power = forward_fft(e.samples).abs2();
  const double total = power.sum();
  if (!(total > 0.0)) return 0.0;
  const Eigen::ArrayXd nu = e.grid.angular_frequencies();
  const double mean = (power * nu).sum() / total;
  return std::sqrt((power * (nu - mean).square()).sum() / total);
}

}  // namespace fastlight
