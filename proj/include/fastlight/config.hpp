#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fastlight/atomic_response.hpp"
#include "fastlight/errors.hpp"

namespace fastlight {

/// Malformed or out-of-range configuration; the message starts with the
/// offending field path (e.g. "medium.gamma_per_us: must be > 0").
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Mode { physical, reduced };

// Config blocks keep the document's own units (microseconds, rad/us) so that
// parse -> serialize -> parse is exact; conversion to SI happens in spec()/line().

struct MediumConfig {
  double beta_rad_per_s = 0.0;
  double gamma_per_us = 0.0;
  double Gamma_per_us = 0.0;
  double rabi_coupling_per_us = 0.0;
  double Delta_per_us = 0.0;
  double length_m = 0.0;
  double carrier_rad_per_s = 0.0;

  MediumSpec spec() const;
  bool operator==(const MediumConfig&) const = default;
};

struct LineConfig {
  double t0_us = 0.28;
  double gamma_prime_per_us = 0.0;
  double carrier_rad_per_s = 0.0;
  double length_m = 0.08;

  ReducedLine line() const;
  bool operator==(const LineConfig&) const = default;
};

struct RunConfig {
  Mode mode = Mode::reduced;
  std::optional<MediumConfig> medium;
  std::optional<LineConfig> line;
  double pulse_sigma_us = 28.0;
  std::size_t n_samples = 4096;
  double span_sigma = 32.0;
  double relative_phase_rad = 0.0;
  std::vector<double> theta_deg;
  std::vector<double> transmissions;
  std::string output_dir = "out";

  bool operator==(const RunConfig&) const = default;
};

/// Rb D1 carrier, 795 nm.
double default_carrier();

/// Reduced quick-start: t0 = 0.28 us, line-centre transmission 0.5.
RunConfig default_config();

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace fastlight
