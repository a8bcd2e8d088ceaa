#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fano/expm.hpp"
#include "fano/model.hpp"

// Generator matrices of the two decoupled sectors of the master equation,
// their exponentials, and the quantum channel Phi acting on 3x3 operators.
namespace fano {

using Matrix5 = Eigen::Matrix<double, 5, 5>;
using Matrix4 = Eigen::Matrix<double, 4, 4>;

struct NoSteadyStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dx/dt = A x on (rho_aa, rho_bb, rho_cc, Re rho_ab, Im rho_ab);
// dz/dt = C z on (Re rho_ac, Im rho_ac, Re rho_bc, Im rho_bc).
struct Generators {
  Matrix5 a_matrix;
  Matrix4 c_matrix;
};

inline Generators build_generators(const SystemParams& params) {
  params.validate();
  const double ga = params.gamma_a;
  const double gb = params.gamma_b;
  const double n = params.nbar;
  const double cross = params.p * std::sqrt(ga * gb);
  const double gbar = params.gamma_mean();
  const double wac = params.omega_ac();
  const double wbc = params.omega_bc();

  Generators gen;
  gen.a_matrix <<
      -ga * (n + 1), 0.0, ga * n, -cross * (n + 1), 0.0,
      0.0, -gb * (n + 1), gb * n, -cross * (n + 1), 0.0,
      ga * (n + 1), gb * (n + 1), -(ga + gb) * n, 2.0 * cross * (n + 1), 0.0,
      -0.5 * cross * (n + 1), -0.5 * cross * (n + 1), cross * n,
          -gbar * (n + 1), params.delta,
      0.0, 0.0, 0.0, -params.delta, -gbar * (n + 1);

  const double decay_ac = n * (ga + 0.5 * gb) + 0.5 * ga;
  const double decay_bc = n * (gb + 0.5 * ga) + 0.5 * gb;
  const double mix = 0.5 * cross * (n + 1);
  gen.c_matrix <<
      -decay_ac, wac, -mix, 0.0,
      -wac, -decay_ac, 0.0, -mix,
      -mix, 0.0, -decay_bc, wbc,
      0.0, -mix, -wbc, -decay_bc;
  return gen;
}

// e^{At}, e^{Ct} at a fixed time.
struct Propagator {
  Matrix5 exp_a;
  Matrix4 exp_c;
  double t;
};

inline Propagator make_propagator(const Generators& gen, double t) {
  return Propagator{expm(gen.a_matrix, t), expm(gen.c_matrix, t), t};
}

inline Matrix3c apply_channel_hermitian(const Propagator& prop,
                                        const Matrix3c& op) {
  const XZVectors v = to_xz(op);
  return from_xz(prop.exp_a * v.x, prop.exp_c * v.z);
}

inline Matrix3c apply_channel_hermitian(const Generators& gen,
                                        const Matrix3c& op, double t) {
  return apply_channel_hermitian(make_propagator(gen, t), op);
}

// Extension of Phi to arbitrary operators by complex-linear decomposition
// into Hermitian parts: op = H1 + i H2.
inline Matrix3c apply_channel_general(const Propagator& prop,
                                      const Matrix3c& op) {
  const complexd i(0.0, 1.0);
  const Matrix3c h1 = 0.5 * (op + Matrix3c(op.adjoint()));
  const Matrix3c h2 = Matrix3c(-0.5 * i * (op - Matrix3c(op.adjoint())));
  return apply_channel_hermitian(prop, h1) +
         i * apply_channel_hermitian(prop, h2);
}

inline Matrix3c apply_channel_general(const Generators& gen, const Matrix3c& op,
                                      double t) {
  return apply_channel_general(make_propagator(gen, t), op);
}

// t -> infinity limit of e^{At} x0. The nullspace of A is one-dimensional
// except at |p| = 1 with Delta = 0, where the limit depends on the initial
// condition; there the state is obtained by spectral projection of x0 onto
// the zero-eigenvalue subspace.
inline Vector5 steady_state(const Generators& gen,
                            std::optional<Vector5> x0 = std::nullopt) {
  const Matrix5& a = gen.a_matrix;
  const double a_norm = a.cwiseAbs().colwise().sum().maxCoeff();
  const double zero_tol = 1e-9 * a_norm;

  Eigen::EigenSolver<Matrix5> es(a);
  if (es.info() != Eigen::Success)
    throw NoSteadyStateError("eigendecomposition of A failed");

  std::vector<int> zero_modes;
  for (int k = 0; k < 5; ++k) {
    if (std::abs(es.eigenvalues()[k]) <= zero_tol) zero_modes.push_back(k);
  }
  if (zero_modes.empty())
    throw NoSteadyStateError("A has no zero eigenvalue within tolerance");

  Vector5 xs;
  if (zero_modes.size() == 1 && !x0) {
    Eigen::Matrix<complexd, 5, 1> v = es.eigenvectors().col(zero_modes[0]);
    const complexd pop = v[0] + v[1] + v[2];
    if (std::abs(pop) < 1e-14)
      throw NoSteadyStateError("zero mode carries no population");
    xs = (v / pop).real();
  } else {
    // Project the initial condition onto the zero-eigenvalue subspace.
    const Vector5 start = x0.value_or(Vector5(Vector5::Unit(2)));
    Eigen::Matrix<complexd, 5, 1> coeffs =
        es.eigenvectors().partialPivLu().solve(start.cast<complexd>());
    Eigen::Matrix<complexd, 5, 1> limit;
    limit.setZero();
    for (int k : zero_modes)
      limit += coeffs[k] * es.eigenvectors().col(k);
    xs = limit.real();
  }

  if ((a * xs).norm() > 1e-10 * a_norm * std::max(1.0, xs.norm()))
    throw NoSteadyStateError("steady-state residual too large");
  return xs;
}

// Uniform grid over the dimensionless time u = t*gamma_mean.
struct TimeGrid {
  double u_max = 1.5;
  int samples = 1501;

  void validate() const {
    if (samples < 1) throw InvalidStateError("time grid needs >= 1 sample");
    if (!(u_max >= 0.0)) throw InvalidStateError("u_max must be >= 0");
  }

  double dimless(int k) const {
    return samples == 1 ? 0.0 : u_max * k / (samples - 1);
  }

  double seconds(int k, const SystemParams& params) const {
    return dimless(k) / params.gamma_mean();
  }

  double step_seconds(const SystemParams& params) const {
    return samples == 1 ? 0.0 : u_max / (samples - 1) / params.gamma_mean();
  }
};

}  // namespace fano
