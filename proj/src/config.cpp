#include "fastlight/config.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>
#include <string>

namespace fastlight {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

const json& require_object(const json& doc, const std::string& path) {
  if (!doc.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  return doc;
}

double number(const json& obj, const std::string& path, const char* key) {
  const std::string field = path + "." + key;
  if (!obj.contains(key)) fail(field, "missing");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
  return obj.contains(key) ? number(obj, path, key) : fallback;
}

/// A rate given either as "<base>_per_us" (rad/us) or "<base>_mhz" (cycles/us).
double rate_per_us(const json& obj, const std::string& path, const std::string& base) {
  const std::string per_us = base + "_per_us";
  const std::string mhz = base + "_mhz";
  const bool has_per_us = obj.contains(per_us);
  const bool has_mhz = obj.contains(mhz);
  if (has_per_us && has_mhz) fail(path + "." + base, "give either _per_us or _mhz, not both");
  if (has_per_us) return number(obj, path, per_us.c_str());
  if (has_mhz) return 2.0 * std::numbers::pi * number(obj, path, mhz.c_str());
  fail(path + "." + per_us, "missing");
}

std::vector<double> number_list(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_array()) fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(std::string(key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

MediumConfig parse_medium(const json& obj) {
  require_object(obj, "medium");
  reject_unknown(obj, "medium",
                 {"beta_rad_per_s", "gamma_per_us", "gamma_mhz", "Gamma_per_us", "Gamma_mhz",
                  "rabi_coupling_per_us", "rabi_coupling_mhz", "Delta_per_us", "Delta_mhz",
                  "length_m", "carrier_rad_per_s"});
  MediumConfig m;
  m.beta_rad_per_s = number(obj, "medium", "beta_rad_per_s");
  m.gamma_per_us = rate_per_us(obj, "medium", "gamma");
  m.Gamma_per_us = rate_per_us(obj, "medium", "Gamma");
  m.rabi_coupling_per_us = rate_per_us(obj, "medium", "rabi_coupling");
  m.Delta_per_us = rate_per_us(obj, "medium", "Delta");
  m.length_m = number(obj, "medium", "length_m");
  m.carrier_rad_per_s = number_or(obj, "medium", "carrier_rad_per_s", default_carrier());

  if (m.beta_rad_per_s < 0) fail("medium.beta_rad_per_s", "must be >= 0");
  if (!(m.gamma_per_us > 0)) fail("medium.gamma_per_us", "must be > 0");
  if (!(m.Gamma_per_us > 0)) fail("medium.Gamma_per_us", "must be > 0");
  if (m.rabi_coupling_per_us < 0) fail("medium.rabi_coupling_per_us", "must be >= 0");
  if (m.length_m < 0) fail("medium.length_m", "must be >= 0");
  if (!(m.carrier_rad_per_s > 0)) fail("medium.carrier_rad_per_s", "must be > 0");
  if (lorentzian_validity(m.spec()) == LorentzianValidity::invalid) {
    fail("medium.Delta_per_us", "|Delta| must be >= 10 Gamma for the Raman-line model");
  }
  return m;
}

LineConfig parse_line(const json& obj) {
  require_object(obj, "line");
  reject_unknown(obj, "line",
                 {"t0_us", "gamma_prime_per_us", "gamma_prime_mhz", "line_center_transmission",
                  "carrier_rad_per_s", "length_m"});
  LineConfig l;
  l.t0_us = number(obj, "line", "t0_us");
  if (l.t0_us < 0) fail("line.t0_us", "must be >= 0");
  if (obj.contains("line_center_transmission")) {
    if (obj.contains("gamma_prime_per_us") || obj.contains("gamma_prime_mhz")) {
      fail("line.line_center_transmission", "give either a transmission or gamma_prime, not both");
    }
    const double t = number(obj, "line", "line_center_transmission");
    if (!(t > 0 && t < 1)) fail("line.line_center_transmission", "must be in (0, 1)");
    if (!(l.t0_us > 0)) fail("line.t0_us", "must be > 0 when fixing the transmission");
    l.gamma_prime_per_us = -std::log(t) / (2.0 * l.t0_us);
  } else {
    l.gamma_prime_per_us = rate_per_us(obj, "line", "gamma_prime");
  }
  if (!(l.gamma_prime_per_us > 0)) fail("line.gamma_prime_per_us", "must be > 0");
  l.carrier_rad_per_s = number_or(obj, "line", "carrier_rad_per_s", default_carrier());
  l.length_m = number_or(obj, "line", "length_m", 0.08);
  if (!(l.carrier_rad_per_s > 0)) fail("line.carrier_rad_per_s", "must be > 0");
  if (!(l.length_m > 0)) fail("line.length_m", "must be > 0");
  return l;
}

}  // namespace

MediumSpec MediumConfig::spec() const {
  MediumSpec s;
  s.beta = beta_rad_per_s;
  s.gamma = gamma_per_us * 1e6;
  s.Gamma = Gamma_per_us * 1e6;
  s.omega_c_rabi = rabi_coupling_per_us * 1e6;
  s.Delta = Delta_per_us * 1e6;
  s.length = length_m;
  s.omega0 = carrier_rad_per_s;
  return s;
}

ReducedLine LineConfig::line() const {
  return {t0_us * 1e-6, gamma_prime_per_us * 1e6, true};
}

double default_carrier() { return 2.0 * std::numbers::pi * kSpeedOfLight / 795e-9; }

RunConfig default_config() {
  RunConfig c;
  c.mode = Mode::reduced;
  LineConfig l;
  l.t0_us = 0.28;
  l.gamma_prime_per_us = -std::log(0.5) / (2.0 * l.t0_us);
  l.carrier_rad_per_s = default_carrier();
  l.length_m = 0.08;
  c.line = l;
  c.theta_deg = {0.0, -40.0, -50.0};
  c.transmissions = {0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9};
  return c;
}

RunConfig parse_config(const json& doc) {
  require_object(doc, "");
  reject_unknown(doc, "", {"mode", "medium", "line", "pulse", "theta_deg", "transmissions",
                           "output_dir"});
  RunConfig c = default_config();

  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) fail("mode", "expected \"physical\" or \"reduced\"");
    const auto mode = doc.at("mode").get<std::string>();
    if (mode == "physical") {
      c.mode = Mode::physical;
    } else if (mode == "reduced") {
      c.mode = Mode::reduced;
    } else {
      fail("mode", "expected \"physical\" or \"reduced\", got \"" + mode + "\"");
    }
  }

  if (c.mode == Mode::physical) {
    if (doc.contains("line")) fail("line", "not allowed in physical mode");
    if (!doc.contains("medium")) fail("medium", "required in physical mode");
    c.medium = parse_medium(doc.at("medium"));
    c.line.reset();
  } else {
    if (doc.contains("medium")) fail("medium", "not allowed in reduced mode");
    if (doc.contains("line")) c.line = parse_line(doc.at("line"));
  }

  if (doc.contains("pulse")) {
    const json& p = require_object(doc.at("pulse"), "pulse");
    reject_unknown(p, "pulse", {"sigma_us", "n_samples", "span_sigma", "relative_phase_rad"});
    c.pulse_sigma_us = number_or(p, "pulse", "sigma_us", c.pulse_sigma_us);
    c.span_sigma = number_or(p, "pulse", "span_sigma", c.span_sigma);
    c.relative_phase_rad = number_or(p, "pulse", "relative_phase_rad", c.relative_phase_rad);
    if (p.contains("n_samples")) {
      if (!p.at("n_samples").is_number_unsigned()) fail("pulse.n_samples", "expected a positive integer");
      c.n_samples = p.at("n_samples").get<std::size_t>();
    }
  }
  if (!(c.pulse_sigma_us > 0)) fail("pulse.sigma_us", "must be > 0");
  if (c.span_sigma < 16) fail("pulse.span_sigma", "must be >= 16");
  if (c.n_samples < 256 || !std::has_single_bit(c.n_samples)) {
    fail("pulse.n_samples", "must be a power of two >= 256");
  }

  if (doc.contains("theta_deg")) c.theta_deg = number_list(doc, "theta_deg");
  for (std::size_t i = 0; i < c.theta_deg.size(); ++i) {
    const double t = c.theta_deg[i];
    if (!(t > -90.0 && t <= 90.0)) {
      fail("theta_deg[" + std::to_string(i) + "]", "must lie in (-90, 90]");
    }
  }
  if (doc.contains("transmissions")) c.transmissions = number_list(doc, "transmissions");
  for (std::size_t i = 0; i < c.transmissions.size(); ++i) {
    const double t = c.transmissions[i];
    if (!(t > 0.0 && t <= 1.0)) {
      fail("transmissions[" + std::to_string(i) + "]", "must lie in (0, 1]");
    }
  }

  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) fail("output_dir", "expected a string");
    c.output_dir = doc.at("output_dir").get<std::string>();
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json doc;
  doc["mode"] = c.mode == Mode::physical ? "physical" : "reduced";
  if (c.medium) {
    const MediumConfig& m = *c.medium;
    doc["medium"] = {{"beta_rad_per_s", m.beta_rad_per_s},
                     {"gamma_per_us", m.gamma_per_us},
                     {"Gamma_per_us", m.Gamma_per_us},
                     {"rabi_coupling_per_us", m.rabi_coupling_per_us},
                     {"Delta_per_us", m.Delta_per_us},
                     {"length_m", m.length_m},
                     {"carrier_rad_per_s", m.carrier_rad_per_s}};
  }
  if (c.line) {
    const LineConfig& l = *c.line;
    doc["line"] = {{"t0_us", l.t0_us},
                   {"gamma_prime_per_us", l.gamma_prime_per_us},
                   {"carrier_rad_per_s", l.carrier_rad_per_s},
                   {"length_m", l.length_m}};
  }
  doc["pulse"] = {{"sigma_us", c.pulse_sigma_us},
                  {"n_samples", c.n_samples},
                  {"span_sigma", c.span_sigma},
                  {"relative_phase_rad", c.relative_phase_rad}};
  doc["theta_deg"] = c.theta_deg;
  doc["transmissions"] = c.transmissions;
  doc["output_dir"] = c.output_dir;
  return doc;
}

}  // namespace fastlight
