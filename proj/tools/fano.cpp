// Batch front-end: evaluates the simulation library on a run configuration
// and writes deterministic CSV artifacts.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fano/io.hpp"
#include "fano/presets.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitNumericError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"V-type three-level system driven by an incoherent field: "
               "dynamics, Kirkwood-Dirac energy statistics, work and "
               "efficiency"};
  app.require_subcommand(1);

  const std::vector<std::string> commands{
      "evolve", "kdq", "work", "sweep-phases", "sweep-populations",
      "efficiency", "find-balance"};

  std::string preset_name;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--preset", preset_name, "named parameter bundle");
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--set", overrides, "override, key=value (repeatable)");
    sub->add_option("--out", out_path, "output CSV path (default: stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    fano::RunConfig cfg =
        preset_name.empty() ? fano::RunConfig{} : fano::preset(preset_name);
    if (!config_path.empty()) fano::load_config_file(cfg, config_path);
    for (const auto& assignment : overrides)
      fano::apply_override(cfg, assignment);
    cfg.validate();

    const std::string command = app.get_subcommands().front()->get_name();
    if (out_path.empty()) {
      fano::run_command(command, cfg, std::cout);
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot open output path: " << out_path << '\n';
        return kExitConfigError;
      }
      fano::run_command(command, cfg, out);
      if (!out) {
        std::cerr << "error: write failed: " << out_path << '\n';
        return kExitConfigError;
      }
    }
  } catch (const fano::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const fano::InvalidStateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumericError;
  }
  return kExitOk;
}
