#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fano/energetics.hpp"
#include "fano/liouville.hpp"
#include "fano/model.hpp"

namespace fano {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One batch run: physical parameters, initial state, time grid and the sweep
// controls. Defaults match the certification setting.
struct RunConfig {
  SystemParams params{3.0091e6, 3.0091e6, 0.1 * 3.0091e6, 0.785e9, 3.0, -1.0};
  InitialState init{std::sqrt(0.3), std::sqrt(0.3), std::sqrt(0.4),
                    0.0, std::numbers::pi, 0.0};
  TimeGrid grid{};
  int phase_resolution = 64;
  FixedPhase fixed_phase = FixedPhase::a;
  int population_points = 61;
  std::vector<double> phi_b_list{0.0, std::numbers::pi / 4,
                                 std::numbers::pi / 2,
                                 3 * std::numbers::pi / 4, std::numbers::pi};

  void validate() const {
    params.validate();
    init.validate();
    grid.validate();
    if (phase_resolution < 1 || population_points < 2)
      throw ConfigError("invalid sweep resolution");
  }
};

inline RunConfig preset(const std::string& name) {
  RunConfig cfg;  // certification parameters, p = -1
  if (name == "certification-p-1") {
    cfg.params.p = -1.0;
  } else if (name == "certification-p-0.75") {
    cfg.params.p = -0.75;
  } else if (name == "certification-p-0.5") {
    cfg.params.p = -0.5;
  } else if (name == "certification-p-0.25") {
    cfg.params.p = -0.25;
  } else if (name == "optimal-extraction") {
    cfg.params.p = -1.0;
    cfg.init.phi_a = 0.0;
    cfg.init.phi_b = std::numbers::pi;
    cfg.init.phi_c = 0.0;
  } else if (name == "weak-pumping-balance") {
    cfg.params.nbar = 0.5;
    cfg.params.p = -0.5;
    cfg.init.alpha_a = std::sqrt(0.2);
    cfg.init.alpha_b = std::sqrt(0.2);
    cfg.init.alpha_c = std::sqrt(0.6);
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  return cfg;
}

}  // namespace fano
