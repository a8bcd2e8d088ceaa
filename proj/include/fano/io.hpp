#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fano/energetics.hpp"
#include "fano/kdq.hpp"
#include "fano/presets.hpp"

// Config parsing (flat `key = value` files plus overrides) and the CSV
// emitters behind the batch subcommands. Formatting is locale-independent,
// 12 significant digits, UNIX newlines.
namespace fano {

inline std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for key '" + key + "': " + value);
  }
}

inline int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for key '" + key + "': " + value);
  }
}

}  // namespace detail

// Applies one `key=value` assignment. Unknown keys are rejected.
inline void apply_setting(RunConfig& cfg, const std::string& key,
                          const std::string& value) {
  using detail::parse_double;
  using detail::parse_int;
  if (key == "gamma_a") cfg.params.gamma_a = parse_double(key, value);
  else if (key == "gamma_b") cfg.params.gamma_b = parse_double(key, value);
  else if (key == "delta") cfg.params.delta = parse_double(key, value);
  else if (key == "d_center") cfg.params.d_center = parse_double(key, value);
  else if (key == "nbar") cfg.params.nbar = parse_double(key, value);
  else if (key == "p") cfg.params.p = parse_double(key, value);
  else if (key == "alpha_a") cfg.init.alpha_a = parse_double(key, value);
  else if (key == "alpha_b") cfg.init.alpha_b = parse_double(key, value);
  else if (key == "alpha_c") cfg.init.alpha_c = parse_double(key, value);
  else if (key == "phi_a") cfg.init.phi_a = parse_double(key, value);
  else if (key == "phi_b") cfg.init.phi_b = parse_double(key, value);
  else if (key == "phi_c") cfg.init.phi_c = parse_double(key, value);
  else if (key == "t_max") cfg.grid.u_max = parse_double(key, value);
  else if (key == "samples") cfg.grid.samples = parse_int(key, value);
  else if (key == "phase_resolution")
    cfg.phase_resolution = parse_int(key, value);
  else if (key == "population_points")
    cfg.population_points = parse_int(key, value);
  else if (key == "fixed_phase") {
    if (value == "a") cfg.fixed_phase = FixedPhase::a;
    else if (value == "b") cfg.fixed_phase = FixedPhase::b;
    else if (value == "c") cfg.fixed_phase = FixedPhase::c;
    else throw ConfigError("fixed_phase must be a, b or c");
  } else if (key == "phi_b_list") {
    std::vector<double> list;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      list.push_back(parse_double(key, detail::trim(item)));
    }
    if (list.empty()) throw ConfigError("phi_b_list is empty");
    cfg.phi_b_list = std::move(list);
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

inline void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must have the form key=value: " + assignment);
  apply_setting(cfg, detail::trim(assignment.substr(0, eq)),
                detail::trim(assignment.substr(eq + 1)));
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    try {
      apply_override(cfg, line);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

namespace detail {

inline void write_row(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    out << format_number(values[i]);
  }
  out << '\n';
}

inline const char* kLevelNames[3] = {"a", "b", "c"};

}  // namespace detail

inline void write_evolve_csv(const RunConfig& cfg, std::ostream& out) {
  out << "t_dimless,rho_aa,rho_bb,rho_cc,re_rho_ab,im_rho_ab,"
         "re_rho_ac,im_rho_ac,re_rho_bc,im_rho_bc\n";
  const Generators gen = build_generators(cfg.params);
  const Propagator step =
      make_propagator(gen, cfg.grid.step_seconds(cfg.params));
  XZVectors v = to_xz(pure_state(cfg.init));
  for (int k = 0; k < cfg.grid.samples; ++k) {
    if (k > 0) {
      v.x = step.exp_a * v.x;
      v.z = step.exp_c * v.z;
    }
    detail::write_row(out, {cfg.grid.dimless(k), v.x[0], v.x[1], v.x[2],
                            v.x[3], v.x[4], v.z[0], v.z[1], v.z[2], v.z[3]});
  }
}

inline void write_kdq_csv(const RunConfig& cfg, std::ostream& out) {
  out << "t_dimless";
  for (const char* tag : {"q", "q_diag", "q_coh"}) {
    for (int l = 0; l < 3; ++l)
      for (int j = 0; j < 3; ++j)
        out << ",re_" << tag << '_' << detail::kLevelNames[l]
            << detail::kLevelNames[j] << ",im_" << tag << '_'
            << detail::kLevelNames[l] << detail::kLevelNames[j];
  }
  out << ",aleph\n";
  const auto dists = kdq_trajectory(cfg.params, pure_state(cfg.init), cfg.grid);
  for (int k = 0; k < cfg.grid.samples; ++k) {
    std::vector<double> row{cfg.grid.dimless(k)};
    for (const Matrix3c* table :
         {&dists[k].q, &dists[k].q_diag, &dists[k].q_coh}) {
      for (int l = 0; l < 3; ++l) {
        for (int j = 0; j < 3; ++j) {
          row.push_back((*table)(l, j).real());
          row.push_back((*table)(l, j).imag());
        }
      }
    }
    row.push_back(nonpositivity(dists[k]));
    detail::write_row(out, row);
  }
}

inline void write_work_csv(const RunConfig& cfg, std::ostream& out) {
  out << "t_dimless,w_total,w_diag,w_coh,eta\n";
  const WorkTrajectory work =
      work_trajectory(cfg.params, pure_state(cfg.init), cfg.grid);
  const EfficiencyReport rep = efficiency_from_work(cfg.params, work);
  for (std::size_t k = 0; k < work.times_dimless.size(); ++k) {
    detail::write_row(out, {work.times_dimless[k], work.w_total[k],
                            work.w_diag[k], work.w_coh[k], rep.eta[k]});
  }
}

inline void write_sweep_csv(const SweepGrid& sweep, std::ostream& out) {
  out << sweep.axis1_name << ',' << sweep.axis2_name << ",value\n";
  for (std::size_t i = 0; i < sweep.axis1.size(); ++i) {
    for (std::size_t j = 0; j < sweep.axis2.size(); ++j) {
      detail::write_row(out, {sweep.axis1[i], sweep.axis2[j],
                              sweep.values(static_cast<int>(i),
                                           static_cast<int>(j))});
    }
  }
}

inline void write_phase_sweep_csv(const RunConfig& cfg, std::ostream& out) {
  const double rho_aa = cfg.init.alpha_a * cfg.init.alpha_a;
  const double rho_bb = cfg.init.alpha_b * cfg.init.alpha_b;
  const double rho_cc = cfg.init.alpha_c * cfg.init.alpha_c;
  write_sweep_csv(phase_sweep(cfg.params, rho_aa, rho_bb, rho_cc,
                              cfg.fixed_phase, cfg.phase_resolution, cfg.grid),
                  out);
}

inline void write_population_sweep_csv(const RunConfig& cfg,
                                       std::ostream& out) {
  const double rho_cc = cfg.init.alpha_c * cfg.init.alpha_c;
  write_sweep_csv(population_sweep(cfg.params, rho_cc, cfg.phi_b_list,
                                   cfg.population_points, cfg.grid),
                  out);
}

inline void write_efficiency_csv(const RunConfig& cfg, std::ostream& out) {
  out << "p,eta_max,t_tilde_dimless\n";
  const EfficiencyReport rep =
      efficiency(cfg.params, pure_state(cfg.init), cfg.grid);
  detail::write_row(out, {cfg.params.p, rep.eta_max, rep.t_tilde_dimless});
}

inline void write_balance_csv(const RunConfig& cfg, std::ostream& out) {
  out << "nbar,rho_cc_balance,residual\n";
  const BalanceResult res = find_diag_balance(cfg.params, cfg.grid);
  detail::write_row(out, {cfg.params.nbar, res.rho_cc, res.residual});
}

// Dispatch by subcommand name; throws ConfigError for unknown commands.
inline void run_command(const std::string& command, const RunConfig& cfg,
                        std::ostream& out) {
  cfg.validate();
  if (command == "evolve") write_evolve_csv(cfg, out);
  else if (command == "kdq") write_kdq_csv(cfg, out);
  else if (command == "work") write_work_csv(cfg, out);
  else if (command == "sweep-phases") write_phase_sweep_csv(cfg, out);
  else if (command == "sweep-populations") write_population_sweep_csv(cfg, out);
  else if (command == "efficiency") write_efficiency_csv(cfg, out);
  else if (command == "find-balance") write_balance_csv(cfg, out);
  else throw ConfigError("unknown subcommand: " + command);
}

}  // namespace fano
