// fastlight: weak-value amplified fast-light studies.
//
//   fastlight spectrum|propagate|sweep-theta|loss-scaling|crossover
//             [--config <path>] [--theta <deg>]... [--out <dir>]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fastlight/commands.hpp"
#include "fastlight/config.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-value amplification of the fast-light effect"};
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::vector<double> theta;

  app.add_option("command", command, "spectrum | propagate | sweep-theta | loss-scaling | crossover")
      ->required()
      ->check(CLI::IsMember({"spectrum", "propagate", "sweep-theta", "loss-scaling", "crossover"}));
  app.add_option("--config", config_path, "JSON run configuration (default: reduced quick-start)");
  app.add_option("--theta", theta, "analyzer angle in degrees (repeatable)");
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    fastlight::RunConfig config =
        config_path.empty() ? fastlight::default_config() : fastlight::load_config(config_path);
    if (!out_dir.empty()) config.output_dir = out_dir;
    const std::filesystem::path out = config.output_dir;

    fastlight::CommandResult result;
    if (command == "spectrum") {
      result = fastlight::cmd_spectrum(config, out);
    } else if (command == "propagate") {
      result = fastlight::cmd_propagate(config, theta, out);
    } else if (command == "sweep-theta") {
      result = fastlight::cmd_sweep_theta(config, theta, out);
    } else if (command == "loss-scaling") {
      result = fastlight::cmd_loss_scaling(config, out);
    } else {
      result = fastlight::cmd_crossover(config, out);
    }

    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    std::cout << result.summary << '\n';
    return 0;
  } catch (const fastlight::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fastlight::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}
