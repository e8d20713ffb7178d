#include "fastlight/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "fastlight/weak_value.hpp"

namespace fastlight {
namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;

void require_transmission(double transmission) {
  if (!(transmission > 0.0 && transmission <= 1.0)) {
    throw InvalidArgument("transmission must be in (0, 1], got " +
                          std::to_string(transmission));
  }
}

void require_gamma_prime(double gamma_prime) {
  if (!(gamma_prime > 0.0 && std::isfinite(gamma_prime))) {
    throw InvalidArgument("gamma' must be > 0");
  }
}

Eigen::ArrayXd trapezoid_weights(const TimeGrid& grid) {
  Eigen::ArrayXd w = Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(grid.n_samples), grid.dt);
  w[0] *= 0.5;
  w[w.size() - 1] *= 0.5;
  return w;
}

double relative_residual(const Eigen::ArrayXd& t, const Eigen::ArrayXd& data,
                         const ArrivalEstimate& est, double peak) {
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index k = 0; k < t.size(); ++k) {
    const double u = (t[k] - est.center) / est.width;
    if (std::abs(u) > 3.0) continue;
    const double model = est.amplitude * std::exp(-0.5 * u * u) + est.baseline;
    sum += (model - data[k]) * (model - data[k]);
    ++count;
  }
  if (count == 0 || !(peak > 0.0)) return 0.0;
  return std::sqrt(sum / count) / peak;
}

}  // namespace

ArrivalEstimate centroid(const Envelope& envelope) {
  const Eigen::ArrayXd intensity = envelope.intensity();
  const Eigen::ArrayXd t = envelope.grid.times();
  const Eigen::ArrayXd w = trapezoid_weights(envelope.grid) * intensity;
  const double energy = w.sum();
  if (!(energy > 0.0)) throw InvalidArgument("centroid: pulse has zero energy");

  ArrivalEstimate est;
  est.method = ArrivalMethod::centroid;
  est.center = (w * t).sum() / energy;
  est.width = std::sqrt((w * (t - est.center).square()).sum() / energy);
  est.amplitude = energy / (std::sqrt(2.0 * std::numbers::pi) * est.width);
  est.residual_rms = relative_residual(t, intensity, est, intensity.maxCoeff());
  return est;
}

ArrivalEstimate fit_gaussian(const Envelope& envelope, const FitOptions& options) {
  const ArrivalEstimate start = centroid(envelope);
  const double dt = envelope.grid.dt;
  if (2.0 * std::sqrt(2.0 * std::log(2.0)) * start.width < 10.0 * dt) {
    throw InvalidArgument("fit_gaussian: intensity peak narrower than 10 samples");
  }

  const Eigen::ArrayXd data = envelope.intensity();
  const double peak = data.maxCoeff();
  // Work in units where the initial guess is (1, 0, 1): tau = (t - c0) / w0.
  const Eigen::ArrayXd tau = (envelope.grid.times() - start.center) / start.width;
  const Eigen::ArrayXd y = data / peak;
  const Eigen::Index n = y.size();
  const Eigen::Index np = options.fit_baseline ? 4 : 3;

  Eigen::VectorXd p(np);
  p.head<3>() << start.amplitude / peak, 0.0, 1.0;
  if (options.fit_baseline) p[3] = 0.0;

  const auto residuals = [&](const Eigen::VectorXd& q, Eigen::MatrixXd* jac) {
    Eigen::VectorXd r(n);
    if (jac) jac->resize(n, np);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double u = (tau[k] - q[1]) / q[2];
      const double e = std::exp(-0.5 * u * u);
      r[k] = q[0] * e + (options.fit_baseline ? q[3] : 0.0) - y[k];
      if (jac) {
        (*jac)(k, 0) = e;
        (*jac)(k, 1) = q[0] * e * u / q[2];
        (*jac)(k, 2) = q[0] * e * u * u / q[2];
        if (options.fit_baseline) (*jac)(k, 3) = 1.0;
      }
    }
    return r;
  };

  Eigen::MatrixXd jac;
  Eigen::VectorXd r = residuals(p, &jac);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  bool converged = false;

  for (int iter = 0; iter < options.max_iterations && !converged; ++iter) {
    const Eigen::MatrixXd normal = jac.transpose() * jac;
    const Eigen::VectorXd gradient = jac.transpose() * r;
    Eigen::MatrixXd damped = normal;
    damped.diagonal() += lambda * normal.diagonal();
    const Eigen::VectorXd step = damped.ldlt().solve(-gradient);

    const Eigen::VectorXd trial = p + step;
    const bool small = std::abs(step[1]) < options.step_tolerance * std::abs(p[2]) &&
                       std::abs(step[2]) < options.step_tolerance * std::abs(p[2]) &&
                       std::abs(step[0]) < options.step_tolerance * std::abs(p[0]);
    const Eigen::VectorXd trial_r = residuals(trial, nullptr);
    const double trial_cost = trial_r.squaredNorm();
    if (std::isfinite(trial_cost) && trial_cost <= cost) {
      p = trial;
      r = residuals(p, &jac);
      cost = r.squaredNorm();
      lambda = std::max(lambda * 0.1, 1e-12);
    } else {
      lambda *= 10.0;
    }
    converged = small;
  }

  ArrivalEstimate est;
  est.method = ArrivalMethod::gaussian_fit;
  est.center = start.center + p[1] * start.width;
  est.width = std::abs(p[2]) * start.width;
  est.amplitude = p[0] * peak;
  est.baseline = options.fit_baseline ? p[3] * peak : 0.0;
  if (!converged || !std::isfinite(est.center) || !(est.width > 0.0)) {
    throw FitFailure("fit_gaussian: no convergence within " +
                         std::to_string(options.max_iterations) + " iterations",
                     start);
  }
  est.residual_rms = relative_residual(envelope.grid.times(), data, est, peak);
  return est;
}

double amplification_factor(double measured_advance, const ReducedLine& line) {
  if (!(line.t0 > 0.0)) throw InvalidArgument("amplification_factor: t0 must be > 0");
  return measured_advance / line.t0;
}

double t_atom(double transmission, double gamma_prime) {
  require_transmission(transmission);
  require_gamma_prime(gamma_prime);
  return -std::log(transmission) / (2.0 * gamma_prime);
}

double wva_objective(double theta, double transmission) {
  require_transmission(transmission);
  constexpr double kExcluded = -std::numeric_limits<double>::infinity();
  if (!(std::sin(theta) + std::cos(theta) > 0.0)) return kExcluded;
  const double projection = projection_weight(theta);
  if (projection < transmission) return kExcluded;
  return weak_value_unchecked(theta) * std::log(2.0 * projection / transmission - 1.0);
}

AngleInterval feasible_angles(double transmission) {
  require_transmission(transmission);
  const double edge = std::asin(std::sqrt(transmission));
  AngleInterval range{edge - kQuarterPi, std::min(std::numbers::pi / 2, 3 * kQuarterPi - edge)};
  if (range.hi < range.lo) range.hi = range.lo;
  return range;
}

double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                               double tolerance, int max_iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iterations; ++i) {
    if (hi - lo < tolerance) return 0.5 * (lo + hi);
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  throw NumericalError("golden_section_maximize: no convergence");
}

WvaOptimum t_wva(double transmission, double gamma_prime) {
  require_transmission(transmission);
  require_gamma_prime(gamma_prime);
  const AngleInterval range = feasible_angles(transmission);
  const auto objective = [transmission](double theta) {
    return wva_objective(theta, transmission);
  };

  constexpr int kScan = 2000;
  const double step = (range.hi - range.lo) / (kScan - 1);
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    const double value = objective(range.lo + i * step);
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  if (!std::isfinite(best_value)) {
    throw NumericalError("t_wva: objective not finite on the feasible interval");
  }

  double theta = range.lo + best * step;
  if (step > 0.0) {
    const double lo = range.lo + std::max(best - 1, 0) * step;
    const double hi = range.lo + std::min(best + 1, kScan - 1) * step;
    const double refined = golden_section_maximize(objective, lo, hi, 1e-9);
    if (objective(refined) >= best_value) theta = refined;
  }
  return {std::max(objective(theta), 0.0) / (2.0 * gamma_prime), theta};
}

double crossover(double gamma_prime) {
  require_gamma_prime(gamma_prime);
  const auto gap = [gamma_prime](double t) {
    return t_wva(t, gamma_prime).t - t_atom(t, gamma_prime);
  };
  double lo = 1e-3;
  double hi = 0.5;
  double g_lo = gap(lo);
  double g_hi = gap(hi);
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    lo = 1e-6;
    hi = 0.999;
    g_lo = gap(lo);
    g_hi = gap(hi);
    if ((g_lo > 0.0) == (g_hi > 0.0)) {
      throw NumericalError("crossover: t_wva - t_atom has no sign change");
    }
  }
  while (hi - lo >= 1e-5) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = gap(mid);
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<ScalingPoint> scaling_curve(std::span<const double> transmissions,
                                        double gamma_prime) {
  std::vector<ScalingPoint> curve;
  curve.reserve(transmissions.size());
  for (const double t : transmissions) {
    const WvaOptimum opt = t_wva(t, gamma_prime);
    curve.push_back({t, t_atom(t, gamma_prime), opt.t, opt.theta});
  }
  return curve;
}

}  // namespace fastlight
