#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "fano/liouville.hpp"
#include "fano/model.hpp"

// Kirkwood-Dirac quasiprobability distribution of two-time energy changes,
// q_{l,j} = Tr[Pi_j Phi[Pi_l rho_S(0)]], with the first measurement time
// fixed at t1 = 0 and the second at t2 = t.
//
// The table is evaluated through the Hermitian symmetrization
// (Pi_l rho + rho Pi_l)/2, i.e. the Margenau-Hill (real-part) reading of the
// KDQ. This is the quantity carried by the real x/z sector representation;
// it shares the sum rule, the unperturbed marginals, and every energy
// average with the two-sided form, and its imaginary parts vanish
// identically. Imaginary entries are stored and reported so that the
// zero-imaginary-part property is visible in the output, not assumed.
namespace fano {

struct KdqDistribution {
  Matrix3c q;       // full table, rows: initial projector l, cols: final j
  Matrix3c q_diag;  // contribution of diag(rho_S(0))
  Matrix3c q_coh;   // contribution of chi_S
  double t = 0.0;

  Eigen::Vector3cd row_marginals() const { return q.rowwise().sum(); }
  Eigen::Vector3cd column_marginals() const { return q.colwise().sum(); }
};

namespace detail {

// KDQ table of a single (sub-normalized) Hermitian component of rho_S(0).
inline Matrix3c kdq_table(const Propagator& prop, const Matrix3c& part) {
  Matrix3c table;
  for (int l = 0; l < 3; ++l) {
    Matrix3c op = Matrix3c::Zero();
    op.row(l) = 0.5 * part.row(l);  // (Pi_l part + part Pi_l) / 2
    op.col(l) += 0.5 * part.col(l);
    const Matrix3c evolved = apply_channel_hermitian(prop, op);
    for (int j = 0; j < 3; ++j)
      table(l, j) = complexd(evolved(j, j).real(), 0.0);
  }
  return table;
}

}  // namespace detail

inline KdqDistribution kdq(const Generators& gen, const Matrix3c& rho0,
                           const Propagator& prop) {
  const DiagCohSplit parts = split_diag_coh(rho0);
  KdqDistribution dist;
  dist.t = prop.t;
  dist.q_diag = detail::kdq_table(prop, parts.diag);
  dist.q_coh = detail::kdq_table(prop, parts.coh);
  dist.q = dist.q_diag + dist.q_coh;
  return dist;
}

inline KdqDistribution kdq(const SystemParams& params, const Matrix3c& rho0,
                           double t) {
  check_density_operator(rho0);
  const Generators gen = build_generators(params);
  return kdq(gen, rho0, make_propagator(gen, t));
}

// Joint probabilities of the two-point measurement scheme,
// p_{l,j} = rho0_{ll} <j|Phi[|l><l|]|j>.
inline Eigen::Matrix3d tpm(const Generators& gen, const Matrix3c& rho0,
                           const Propagator& prop) {
  Eigen::Matrix3d table;
  for (int l = 0; l < 3; ++l) {
    Matrix3c proj = Matrix3c::Zero();
    proj(l, l) = 1.0;
    const Matrix3c evolved = apply_channel_hermitian(prop, proj);
    for (int j = 0; j < 3; ++j)
      table(l, j) = rho0(l, l).real() * evolved(j, j).real();
  }
  return table;
}

inline Eigen::Matrix3d tpm(const SystemParams& params, const Matrix3c& rho0,
                           double t) {
  check_density_operator(rho0);
  const Generators gen = build_generators(params);
  return tpm(gen, rho0, make_propagator(gen, t));
}

// Non-positivity functional: -1 + sum |q_{l,j}|. Zero iff every entry is a
// nonnegative real number.
inline double nonpositivity(const KdqDistribution& dist) {
  return -1.0 + dist.q.cwiseAbs().sum();
}

struct EnergyChange {
  complexd total;  // <Delta E> = sum q_{l,j} (E_j - E_l), rad/s
  complexd diag;   // contribution of diag(rho_S(0))
  complexd coh;    // contribution of chi_S
};

inline EnergyChange average_energy_change(const KdqDistribution& dist,
                                          const Hamiltonian& ham) {
  EnergyChange de{};
  for (int l = 0; l < 3; ++l) {
    for (int j = 0; j < 3; ++j) {
      const double gap = ham.energy_gap(l, j);
      de.diag += dist.q_diag(l, j) * gap;
      de.coh += dist.q_coh(l, j) * gap;
    }
  }
  de.total = de.diag + de.coh;
  return de;
}

// KDQ distributions on a uniform time grid, evolved by iterating the
// single-step propagator (keeps the output deterministic and cheap).
inline std::vector<KdqDistribution> kdq_trajectory(const SystemParams& params,
                                                   const Matrix3c& rho0,
                                                   const TimeGrid& grid) {
  check_density_operator(rho0);
  grid.validate();
  const Generators gen = build_generators(params);
  const Propagator step =
      make_propagator(gen, grid.step_seconds(params));

  // Symmetrized projections (Pi_l part + part Pi_l)/2 for both parts of
  // rho0; only these Hermitian operators need to be evolved.
  const DiagCohSplit parts = split_diag_coh(rho0);
  const std::array<const Matrix3c*, 2> part_ptr{&parts.diag, &parts.coh};
  std::array<std::array<XZVectors, 3>, 2> comps;
  for (int n = 0; n < 2; ++n) {
    for (int l = 0; l < 3; ++l) {
      Matrix3c op = Matrix3c::Zero();
      op.row(l) = 0.5 * part_ptr[n]->row(l);
      op.col(l) += 0.5 * part_ptr[n]->col(l);
      comps[n][l] = to_xz(op);
    }
  }

  std::vector<KdqDistribution> out;
  out.reserve(grid.samples);
  for (int k = 0; k < grid.samples; ++k) {
    if (k > 0) {
      for (auto& per_part : comps) {
        for (auto& v : per_part) {
          v.x = step.exp_a * v.x;
          v.z = step.exp_c * v.z;
        }
      }
    }
    KdqDistribution dist;
    dist.t = grid.seconds(k, params);
    for (int l = 0; l < 3; ++l) {
      for (int j = 0; j < 3; ++j) {
        // Diagonal elements of the evolved operator live in the x sector.
        dist.q_diag(l, j) = complexd(comps[0][l].x[j], 0.0);
        dist.q_coh(l, j) = complexd(comps[1][l].x[j], 0.0);
      }
    }
    dist.q = dist.q_diag + dist.q_coh;
    out.push_back(std::move(dist));
  }
  return out;
}

}  // namespace fano
