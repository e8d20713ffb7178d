#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fastlight/config.hpp"
#include "fastlight/pulse.hpp"

namespace fastlight {

struct CommandResult {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
  std::string summary;  ///< one-line human summary for stdout
};

/// Absorption, dispersion and group index over +-20 gamma': spectrum.csv and spectrum_summary.csv
/// (including the Kramers-Kronig residual).
CommandResult cmd_spectrum(const RunConfig& config, const std::filesystem::path& out);

/// Envelope dumps for V, H and each post-selected trace plus centers.csv.
/// Uses `theta_deg` when non-empty, else config.theta_deg.
CommandResult cmd_propagate(const RunConfig& config, std::span<const double> theta_deg,
                            const std::filesystem::path& out);

/// sweep_theta.csv: theory weak value against fitted amplification.
CommandResult cmd_sweep_theta(const RunConfig& config, std::span<const double> theta_deg,
                              const std::filesystem::path& out);

/// loss_scaling.csv (one ScalingPoint per transmission) and loss_scaling_summary.csv.
CommandResult cmd_loss_scaling(const RunConfig& config, const std::filesystem::path& out);

/// crossover.csv with the crossover transmission.
CommandResult cmd_crossover(const RunConfig& config, const std::filesystem::path& out);

/// Envelope dump: header "t_seconds,re,im,intensity" (field in arbitrary units).
void write_envelope_csv(const Envelope& e, const std::filesystem::path& path);

/// Scientific notation with 16 significant digits.
std::string format_number(double x);

}  // namespace fastlight
