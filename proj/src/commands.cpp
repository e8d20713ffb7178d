#include "fastlight/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

#include "fastlight/analysis.hpp"
#include "fastlight/weak_value.hpp"

namespace fastlight {
namespace fs = std::filesystem;

namespace {

struct Scenario {
  ReducedLine line;
  LineShape shape;
  double carrier = 0.0;
  std::optional<MediumSpec> medium;
};

Scenario resolve(const RunConfig& config, std::vector<std::string>& warnings) {
  Scenario s;
  if (config.mode == Mode::physical) {
    if (!config.medium) throw ConfigError("medium: required in physical mode");
    const MediumSpec spec = config.medium->spec();
    if (lorentzian_validity(spec) == LorentzianValidity::marginal) {
      warnings.push_back("|Delta| < 100 Gamma: the Lorentzian line model is marginal");
    }
    s.medium = spec;
    s.line = group_advance(spec);
    s.shape = line_shape(spec);
    s.carrier = spec.omega0;
  } else {
    if (!config.line) throw ConfigError("line: required in reduced mode");
    s.line = config.line->line();
    s.carrier = config.line->carrier_rad_per_s;
    s.shape = line_shape(s.line, s.carrier, config.line->length_m);
  }
  return s;
}

void check_theta(double theta_deg, const std::string& field) {
  if (!(theta_deg > -90.0 && theta_deg <= 90.0)) {
    throw ConfigError(field + ": analyzer angle must lie in (-90, 90] deg");
  }
  if (std::abs(theta_deg + 45.0) <= 0.01) {
    throw ConfigError(field + ": -45 deg is the dark port where the weak value diverges; "
                      "choose an angle at least 0.01 deg away (e.g. -44 or -46)");
  }
}

std::vector<double> angles(const RunConfig& config, std::span<const double> override_deg) {
  std::vector<double> list(override_deg.begin(), override_deg.end());
  const std::string field = list.empty() ? "theta_deg" : "--theta";
  if (list.empty()) list = config.theta_deg;
  if (list.empty()) throw ConfigError("theta_deg: at least one analyzer angle is required");
  for (std::size_t i = 0; i < list.size(); ++i) {
    check_theta(list[i], field + "[" + std::to_string(i) + "]");
  }
  return list;
}

PolarizedPulse simulate(const RunConfig& config, const Scenario& scenario,
                        std::vector<std::string>& warnings) {
  const double sigma = config.pulse_sigma_us * 1e-6;
  const TimeGrid grid = TimeGrid::centered(config.n_samples, config.span_sigma * sigma);
  const Envelope pulse = make_gaussian(grid, sigma, 0.0, 1.0, scenario.carrier);
  const PolarizedPulse input =
      prepare_input(pulse, transmission(scenario.line), config.relative_phase_rad);
  if (scenario.medium) {
    if (!is_narrowband(pulse, scenario.line.gamma_prime)) {
      warnings.push_back("pulse bandwidth exceeds 10 gamma': the line reshapes the pulse");
    }
    return propagate_spectral(input, *scenario.medium);
  }
  return propagate_ideal(input, scenario.line);
}

ArrivalEstimate arrival(const Envelope& e, std::vector<std::string>& warnings,
                        const std::string& label) {
  try {
    return fit_gaussian(e);
  } catch (const FitFailure& failure) {
    warnings.push_back(label + ": Gaussian fit failed, using centroid");
    return failure.fallback();
  }
}

std::ofstream open_csv(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::string angle_tag(double theta_deg) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.3f", theta_deg);
  return buf;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15e", x);
  return buf;
}

void write_envelope_csv(const Envelope& e, const fs::path& path) {
  auto out = open_csv(path);
  out << "t_seconds,re,im,intensity\n";
  const Eigen::ArrayXd t = e.grid.times();
  for (Eigen::Index k = 0; k < t.size(); ++k) {
    const auto z = e.samples[k];
    out << format_number(t[k]) << ',' << format_number(z.real()) << ','
        << format_number(z.imag()) << ',' << format_number(std::norm(z)) << '\n';
  }
}

CommandResult cmd_spectrum(const RunConfig& config, const fs::path& out) {
  CommandResult result;
  const Scenario s = resolve(config, result.warnings);
  const double g = s.shape.width;

  const fs::path table = out / "spectrum.csv";
  {
    auto csv = open_csv(table);
    csv << "delta_prime_rad_per_s,delta_prime_over_gamma_prime,im_chi,re_n_minus_1,n_g\n";
    constexpr int kPoints = 801;
    for (int i = 0; i < kPoints; ++i) {
      const double x = -20.0 + 40.0 * i / (kPoints - 1);
      const double d = x * g;
      const auto chi = lorentzian(s.shape, d);
      const auto n = refractive_index(chi);
      csv << format_number(d) << ',' << format_number(x) << ',' << format_number(chi.imag())
          << ',' << format_number(n.real() - 1.0) << ','
          << format_number(group_index(d, s.shape, s.carrier)) << '\n';
    }
  }

  const KramersKronigReport kk = kk_check(s.shape, DetuningGrid{40.0 * g, 1u << 14});
  const fs::path summary = out / "spectrum_summary.csv";
  {
    auto csv = open_csv(summary);
    csv << "quantity,value\n";
    csv << "gamma_prime_rad_per_s," << format_number(g) << '\n';
    csv << "t0_s," << format_number(s.line.t0) << '\n';
    csv << "line_center_transmission," << format_number(transmission(s.line)) << '\n';
    csv << "n_g_line_center," << format_number(group_index(0.0, s.shape, s.carrier)) << '\n';
    csv << "kk_residual," << format_number(kk.residual) << '\n';
    csv << "kk_consistent," << (kk.consistent ? 1 : 0) << '\n';
  }
  if (!kk.consistent) result.warnings.push_back("Kramers-Kronig residual above 0.02");
  result.files = {table, summary};
  result.summary = "kk_residual=" + format_number(kk.residual);
  return result;
}

CommandResult cmd_propagate(const RunConfig& config, std::span<const double> theta_deg,
                            const fs::path& out) {
  CommandResult result;
  const std::vector<double> list = angles(config, theta_deg);
  const Scenario s = resolve(config, result.warnings);
  const PolarizedPulse field = simulate(config, s, result.warnings);

  struct Trace {
    std::string name;
    double theta_deg;
    Envelope envelope;
    double throughput;
  };
  std::vector<Trace> traces;
  traces.push_back({"H", 0.0, field.h, field.h.energy() / field.input_energy});
  traces.push_back({"V", 90.0, field.v, field.v.energy() / field.input_energy});
  for (const double t : list) {
    PostSelectedPulse ps = post_select(field, radians(t));
    traces.push_back({"theta_" + angle_tag(t), t, std::move(ps.envelope), ps.throughput});
  }

  const double v_center = arrival(field.v, result.warnings, "V").center;
  const fs::path centers = out / "centers.csv";
  auto csv = open_csv(centers);
  csv << "trace,theta_deg,center_s,advance_s,amplification,weak_value,throughput,residual_rms\n";
  for (const Trace& tr : traces) {
    const fs::path dump = out / ("envelope_" + tr.name + ".csv");
    write_envelope_csv(tr.envelope, dump);
    result.files.push_back(dump);

    const ArrivalEstimate est = arrival(tr.envelope, result.warnings, tr.name);
    const double advance = v_center - est.center;
    const double amp = s.line.t0 > 0.0 ? advance / s.line.t0 : 0.0;
    csv << tr.name << ',' << format_number(tr.theta_deg) << ',' << format_number(est.center)
        << ',' << format_number(advance) << ',' << format_number(amp) << ','
        << format_number(weak_value(radians(tr.theta_deg))) << ','
        << format_number(tr.throughput) << ',' << format_number(est.residual_rms) << '\n';
    if (est.distorted()) result.warnings.push_back(tr.name + ": trace is distorted");
  }
  result.files.push_back(centers);
  result.summary = "wrote " + std::to_string(traces.size()) + " traces";
  return result;
}

CommandResult cmd_sweep_theta(const RunConfig& config, std::span<const double> theta_deg,
                              const fs::path& out) {
  CommandResult result;
  const std::vector<double> list = angles(config, theta_deg);
  const Scenario s = resolve(config, result.warnings);
  if (!(s.line.t0 > 0.0)) throw NumericalError("sweep-theta: the medium gives no advance");
  const PolarizedPulse field = simulate(config, s, result.warnings);
  const double v_center = arrival(field.v, result.warnings, "V").center;

  const fs::path table = out / "sweep_theta.csv";
  auto csv = open_csv(table);
  csv << "theta_deg,weak_value_theory,amplification_fitted,relative_deviation\n";
  double worst = 0.0;
  for (const double t : list) {
    const double theory = weak_value(radians(t));
    const PostSelectedPulse ps = post_select(field, radians(t));
    const ArrivalEstimate est = arrival(ps.envelope, result.warnings, "theta " + angle_tag(t));
    const double fitted = amplification_factor(v_center - est.center, s.line);
    const double deviation = theory != 0.0 ? (fitted - theory) / theory : fitted;
    worst = std::max(worst, std::abs(deviation));
    csv << format_number(t) << ',' << format_number(theory) << ',' << format_number(fitted)
        << ',' << format_number(deviation) << '\n';
  }
  result.files.push_back(table);
  result.summary = "max |relative deviation| = " + format_number(worst);
  return result;
}

CommandResult cmd_loss_scaling(const RunConfig& config, const fs::path& out) {
  CommandResult result;
  if (config.transmissions.empty()) {
    throw ConfigError("transmissions: at least one value is required");
  }
  const Scenario s = resolve(config, result.warnings);
  const double g = s.line.gamma_prime;
  const std::vector<ScalingPoint> curve = scaling_curve(config.transmissions, g);

  const fs::path table = out / "loss_scaling.csv";
  {
    auto csv = open_csv(table);
    csv << "T,t_atom_norm,t_wva_norm,theta_opt_deg,t_atom_s,t_wva_s\n";
    for (const ScalingPoint& p : curve) {
      csv << format_number(p.transmission) << ',' << format_number(2.0 * g * p.t_atom) << ','
          << format_number(2.0 * g * p.t_wva) << ',' << format_number(degrees(p.theta_opt))
          << ',' << format_number(p.t_atom) << ',' << format_number(p.t_wva) << '\n';
    }
  }
  const double t_star = crossover(g);
  const fs::path summary = out / "loss_scaling_summary.csv";
  {
    auto csv = open_csv(summary);
    csv << "quantity,value\n";
    csv << "gamma_prime_rad_per_s," << format_number(g) << '\n';
    csv << "crossover_T," << format_number(t_star) << '\n';
  }
  result.files = {table, summary};
  result.summary = "crossover_T=" + format_number(t_star);
  return result;
}

CommandResult cmd_crossover(const RunConfig& config, const fs::path& out) {
  CommandResult result;
  const Scenario s = resolve(config, result.warnings);
  const double g = s.line.gamma_prime;
  const double t_star = crossover(g);
  const fs::path table = out / "crossover.csv";
  auto csv = open_csv(table);
  csv << "quantity,value\n";
  csv << "gamma_prime_rad_per_s," << format_number(g) << '\n';
  csv << "crossover_T," << format_number(t_star) << '\n';
  csv << "t_atom_at_crossover_s," << format_number(t_atom(t_star, g)) << '\n';
  result.files.push_back(table);
  result.summary = "crossover_T=" + format_number(t_star);
  return result;
}

}  // namespace fastlight
