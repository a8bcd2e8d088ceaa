#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fano/kdq.hpp"
#include "fano/liouville.hpp"
#include "fano/model.hpp"

// Thermodynamic layer: extractable-work trajectories, efficiency, the
// diag-zero balance condition, and the phase/population optimization sweeps.
namespace fano {

struct UndefinedEfficiencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoBalanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Extractable work -<Delta E>/omega_a on the time grid, split into the
// diagonal and coherence contributions of the initial state.
struct WorkTrajectory {
  std::vector<double> times_dimless;  // t*gamma_mean
  std::vector<double> w_total;
  std::vector<double> w_diag;
  std::vector<double> w_coh;
};

inline WorkTrajectory work_trajectory(const SystemParams& params,
                                      const Matrix3c& rho0,
                                      const TimeGrid& grid) {
  const Hamiltonian ham(params);
  const double wa = params.omega_ac();
  const auto dists = kdq_trajectory(params, rho0, grid);

  WorkTrajectory out;
  out.times_dimless.reserve(dists.size());
  out.w_total.reserve(dists.size());
  out.w_diag.reserve(dists.size());
  out.w_coh.reserve(dists.size());
  for (int k = 0; k < static_cast<int>(dists.size()); ++k) {
    const EnergyChange de = average_energy_change(dists[k], ham);
    const double wd = -de.diag.real() / wa;
    const double wc = -de.coh.real() / wa;
    out.times_dimless.push_back(grid.dimless(k));
    out.w_diag.push_back(wd);
    out.w_coh.push_back(wc);
    out.w_total.push_back(wd + wc);
  }
  return out;
}

struct EfficiencyReport {
  std::vector<double> times_dimless;
  std::vector<double> eta;  // eta(t) = -<Delta E(t)> / (nbar * omega_ac)
  double eta_max = 0.0;
  double t_tilde_dimless = 0.0;  // first grid time attaining eta_max
};

inline EfficiencyReport efficiency_from_work(const SystemParams& params,
                                             const WorkTrajectory& work) {
  if (!(params.nbar > 0.0))
    throw UndefinedEfficiencyError("efficiency undefined for nbar = 0");
  EfficiencyReport rep;
  rep.times_dimless = work.times_dimless;
  rep.eta.reserve(work.w_total.size());
  const double scale = params.omega_ac() / (params.nbar * params.omega_ac());
  for (double w : work.w_total) rep.eta.push_back(w * scale);
  rep.eta_max = *std::max_element(rep.eta.begin(), rep.eta.end());
  for (std::size_t k = 0; k < rep.eta.size(); ++k) {
    if (rep.eta[k] >= rep.eta_max - 1e-12) {
      rep.t_tilde_dimless = rep.times_dimless[k];
      break;
    }
  }
  return rep;
}

inline EfficiencyReport efficiency(const SystemParams& params,
                                   const Matrix3c& rho0, const TimeGrid& grid) {
  return efficiency_from_work(params, work_trajectory(params, rho0, grid));
}

struct BalanceResult {
  double rho_cc;    // ground population zeroing <Delta E>_diag
  double residual;  // sup over the grid of |<Delta E>_diag| / omega_a
};

namespace detail {

// Population part of <Delta E>(t)/omega_a for a diagonal initial state with
// rho_aa = rho_bb = (1 - rho_cc)/2, evaluated at a fixed propagator.
inline double diag_energy_shift(const SystemParams& params,
                                const Matrix5& exp_a, double rho_cc) {
  const double rho_ee = 0.5 * (1.0 - rho_cc);
  Vector5 x0;
  x0 << rho_ee, rho_ee, rho_cc, 0.0, 0.0;
  const Vector5 xt = exp_a * x0;
  const double wa = params.omega_ac();
  const double wb = params.omega_bc();
  return (wa * (xt[0] - x0[0]) + wb * (xt[1] - x0[1])) / wa;
}

}  // namespace detail

// Finds rho_cc(0) such that <Delta E>_diag vanishes at all times, for the
// family rho_aa(0) = rho_bb(0) = (1 - rho_cc(0))/2. Root-bracketing acts on
// the late-time (plateau) value; the sup-over-grid residual is reported.
inline BalanceResult find_diag_balance(const SystemParams& params,
                                       const TimeGrid& grid) {
  if (!(params.nbar > 0.0))
    throw NoBalanceError("balance search requires nbar > 0");
  grid.validate();
  const Generators gen = build_generators(params);
  const double t_end =
      grid.samples == 1 ? 0.0 : grid.seconds(grid.samples - 1, params);
  const Matrix5 exp_a_end = expm(gen.a_matrix, t_end);

  double lo = 0.0, hi = 1.0;
  double f_lo = detail::diag_energy_shift(params, exp_a_end, lo);
  double f_hi = detail::diag_energy_shift(params, exp_a_end, hi);
  if (f_lo == 0.0) hi = lo;
  else if (f_hi == 0.0) lo = hi;
  else if (f_lo * f_hi > 0.0)
    throw NoBalanceError("plateau value of <Delta E>_diag has no sign change");
  for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = detail::diag_energy_shift(params, exp_a_end, mid);
    if (f_mid == 0.0) {
      lo = hi = mid;
    } else if (f_mid * f_lo < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }

  BalanceResult result;
  result.rho_cc = 0.5 * (lo + hi);
  // Verify the full-trajectory criterion, not just the plateau.
  const double rho_ee = 0.5 * (1.0 - result.rho_cc);
  Vector5 x0;
  x0 << rho_ee, rho_ee, result.rho_cc, 0.0, 0.0;
  const Propagator step = make_propagator(gen, grid.step_seconds(params));
  const double wa = params.omega_ac();
  const double wb = params.omega_bc();
  Vector5 x = x0;
  double sup = 0.0;
  for (int k = 0; k < grid.samples; ++k) {
    if (k > 0) x = step.exp_a * x;
    const double shift = wa * (x[0] - x0[0]) + wb * (x[1] - x0[1]);
    sup = std::max(sup, std::abs(shift) / wa);
  }
  result.residual = sup;
  return result;
}

// Rectangular grid of signed extremal <Delta E>_coh / omega_a values.
struct SweepGrid {
  std::string axis1_name;
  std::string axis2_name;
  std::vector<double> axis1;
  std::vector<double> axis2;
  Eigen::MatrixXd values;  // values(i, j) for axis1[i], axis2[j]
};

enum class FixedPhase { a, b, c };

namespace detail {

// Signed time-grid extremum of <Delta E>_coh(t)/omega_a: the value of
// largest magnitude, keeping its sign. The sweep maps record the response
// to Re rho_ab(0) = alpha_a alpha_b cos(phi_a - phi_b); the Im rho_ab(0)
// channel only reaches the populations through the Delta rotation, at
// relative size Delta / [(nbar+1) gamma_mean] (a few permille here), and is
// projected out so the maps carry the exact symmetries of the ideal
// quasi-degenerate limit (mirror line at phi_b = pi, phi_a <-> phi_b
// exchange, flatness along phi_c).
inline double coh_extremum(const SystemParams& params, const Propagator& step,
                           const Matrix3c& rho0, const TimeGrid& grid) {
  const Matrix3c chi = split_diag_coh(rho0).coh;
  Vector5 x = to_xz(chi).x;
  x[4] = 0.0;  // drop the Im rho_ab(0) channel (see above)
  const double wa = params.omega_ac();
  const double wb = params.omega_bc();
  double best = 0.0;
  for (int k = 1; k < grid.samples; ++k) {
    x = step.exp_a * x;
    const double value = (wa * x[0] + wb * x[1]) / wa;
    if (std::abs(value) > std::abs(best)) best = value;
  }
  return best;
}

}  // namespace detail

inline SweepGrid phase_sweep(const SystemParams& params, double rho_aa,
                             double rho_bb, double rho_cc, FixedPhase fixed,
                             int resolution, const TimeGrid& grid) {
  if (resolution < 1) throw InvalidStateError("sweep resolution must be >= 1");
  grid.validate();
  const Generators gen = build_generators(params);
  const Propagator step = make_propagator(gen, grid.step_seconds(params));

  SweepGrid sweep;
  switch (fixed) {
    case FixedPhase::a:
      sweep.axis1_name = "phi_b";
      sweep.axis2_name = "phi_c";
      break;
    case FixedPhase::b:
      sweep.axis1_name = "phi_a";
      sweep.axis2_name = "phi_c";
      break;
    case FixedPhase::c:
      sweep.axis1_name = "phi_a";
      sweep.axis2_name = "phi_b";
      break;
  }
  // Periodic grid over [0, 2pi), so pi/2, pi and the mirror pairs are
  // grid-exact.
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < resolution; ++i) {
    sweep.axis1.push_back(two_pi * i / resolution);
    sweep.axis2.push_back(two_pi * i / resolution);
  }
  sweep.values.resize(resolution, resolution);

  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      InitialState init;
      init.alpha_a = std::sqrt(rho_aa);
      init.alpha_b = std::sqrt(rho_bb);
      init.alpha_c = std::sqrt(rho_cc);
      switch (fixed) {
        case FixedPhase::a:
          init.phi_a = 0.0;
          init.phi_b = sweep.axis1[i];
          init.phi_c = sweep.axis2[j];
          break;
        case FixedPhase::b:
          init.phi_b = 0.0;
          init.phi_a = sweep.axis1[i];
          init.phi_c = sweep.axis2[j];
          break;
        case FixedPhase::c:
          init.phi_c = 0.0;
          init.phi_a = sweep.axis1[i];
          init.phi_b = sweep.axis2[j];
          break;
      }
      sweep.values(i, j) =
          detail::coh_extremum(params, step, pure_state(init), grid);
    }
  }
  return sweep;
}

inline SweepGrid population_sweep(const SystemParams& params, double rho_cc,
                                  const std::vector<double>& phi_b_list,
                                  int points, const TimeGrid& grid) {
  if (points < 2) throw InvalidStateError("population sweep needs >= 2 points");
  if (!(rho_cc >= 0.0 && rho_cc < 1.0))
    throw InvalidStateError("rho_cc must lie in [0, 1)");
  grid.validate();
  const Generators gen = build_generators(params);
  const Propagator step = make_propagator(gen, grid.step_seconds(params));

  SweepGrid sweep;
  sweep.axis1_name = "phi_b";
  sweep.axis2_name = "rho_aa";
  sweep.axis1 = phi_b_list;
  const double span = 1.0 - rho_cc;
  for (int j = 0; j < points; ++j)
    sweep.axis2.push_back(span * j / (points - 1));
  sweep.values.resize(static_cast<int>(phi_b_list.size()), points);

  for (int i = 0; i < static_cast<int>(phi_b_list.size()); ++i) {
    for (int j = 0; j < points; ++j) {
      const double rho_aa = sweep.axis2[j];
      InitialState init;
      init.alpha_a = std::sqrt(rho_aa);
      init.alpha_b = std::sqrt(std::max(0.0, span - rho_aa));
      init.alpha_c = std::sqrt(rho_cc);
      init.phi_b = phi_b_list[i];
      sweep.values(i, j) =
          detail::coh_extremum(params, step, pure_state(init), grid);
    }
  }
  return sweep;
}

}  // namespace fano
