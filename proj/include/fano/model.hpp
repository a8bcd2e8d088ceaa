#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

// Physical description of the V-type three-level system: parameters of the
// system and of the incoherent field, the (diagonal) Hamiltonian, initial
// states, and the mapping between 3x3 Hermitian operators and the real
// vectors used by the dynamics.
namespace fano {

using Matrix3c = Eigen::Matrix3cd;
using Vector5 = Eigen::Matrix<double, 5, 1>;
using Vector4 = Eigen::Matrix<double, 4, 1>;
using complexd = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigenvalueFloor = -1e-9;

struct InvalidStateError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RepresentationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rates in rad/s. Basis order is (a, b, c) with |a> = (1,0,0)^T.
struct SystemParams {
  double gamma_a;   // decay rate |a> -> |c>
  double gamma_b;   // decay rate |b> -> |c>
  double delta;     // excited-state splitting w_ac - w_bc
  double d_center;  // mean excited frequency D
  double nbar;      // average thermal photon number
  double p;         // dipole alignment parameter cos(Theta)

  double omega_ac() const { return d_center + 0.5 * delta; }
  double omega_bc() const { return d_center - 0.5 * delta; }
  double pump_a() const { return nbar * gamma_a; }
  double pump_b() const { return nbar * gamma_b; }
  double gamma_mean() const { return 0.5 * (gamma_a + gamma_b); }

  void validate() const {
    if (!(gamma_a > 0.0) || !(gamma_b > 0.0))
      throw InvalidStateError("decay rates must be positive");
    if (!(delta >= 0.0)) throw InvalidStateError("delta must be >= 0");
    if (!(d_center > 0.0)) throw InvalidStateError("d_center must be > 0");
    if (!(omega_bc() > 0.0))
      throw InvalidStateError("omega_bc must be positive (delta too large)");
    if (!(nbar >= 0.0)) throw InvalidStateError("nbar must be >= 0");
    if (!(p >= -1.0 && p <= 1.0))
      throw InvalidStateError("alignment parameter p must lie in [-1, 1]");
  }
};

// H = diag(w_a, w_b, 0) with hbar = 1; energies in rad/s.
struct Hamiltonian {
  double e_a;
  double e_b;
  double e_c = 0.0;

  explicit Hamiltonian(const SystemParams& params)
      : e_a(params.omega_ac()), e_b(params.omega_bc()) {}

  double energy(int k) const {
    switch (k) {
      case 0: return e_a;
      case 1: return e_b;
      case 2: return e_c;
    }
    throw std::out_of_range("level index");
  }

  // Projector |k><k| in the computational basis.
  Matrix3c projector(int k) const {
    Matrix3c pi = Matrix3c::Zero();
    pi(k, k) = 1.0;
    return pi;
  }

  Matrix3c matrix() const {
    Matrix3c h = Matrix3c::Zero();
    h(0, 0) = e_a;
    h(1, 1) = e_b;
    h(2, 2) = e_c;
    return h;
  }

  double energy_gap(int l, int j) const { return energy(j) - energy(l); }
};

// |psi_0> = alpha_a e^{i phi_a}|a> + alpha_b e^{i phi_b}|b> + alpha_c e^{i phi_c}|c>
struct InitialState {
  double alpha_a = 0.0;
  double alpha_b = 0.0;
  double alpha_c = 1.0;
  double phi_a = 0.0;
  double phi_b = 0.0;
  double phi_c = 0.0;

  void validate() const {
    if (alpha_a < 0.0 || alpha_b < 0.0 || alpha_c < 0.0)
      throw InvalidStateError("amplitudes must be nonnegative");
    const double norm2 =
        alpha_a * alpha_a + alpha_b * alpha_b + alpha_c * alpha_c;
    if (std::abs(norm2 - 1.0) > 1e-12)
      throw InvalidStateError("initial state not normalized: |alpha|^2 = " +
                              std::to_string(norm2));
  }

  Eigen::Vector3cd amplitudes() const {
    const complexd i(0.0, 1.0);
    Eigen::Vector3cd psi;
    psi << alpha_a * std::exp(i * phi_a), alpha_b * std::exp(i * phi_b),
        alpha_c * std::exp(i * phi_c);
    return psi;
  }
};

inline void check_density_operator(const Matrix3c& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw InvalidStateError("density operator is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > kTraceTol ||
      std::abs(rho.trace().imag()) > kTraceTol)
    throw InvalidStateError("density operator trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigenvalueFloor)
    throw InvalidStateError("density operator has a negative eigenvalue");
}

// rho_S(0) = |psi_0><psi_0|
inline Matrix3c pure_state(const InitialState& init) {
  init.validate();
  const Eigen::Vector3cd psi = init.amplitudes();
  Matrix3c rho = psi * psi.adjoint();
  // Clean Hermitian round-off so the invariants hold exactly.
  rho = 0.5 * (rho + Matrix3c(rho.adjoint()));
  return rho;
}

struct DiagCohSplit {
  Matrix3c diag;  // diag(rho)
  Matrix3c coh;   // chi_S, the off-diagonal remainder
};

inline DiagCohSplit split_diag_coh(const Matrix3c& rho) {
  DiagCohSplit out;
  out.diag = rho.diagonal().asDiagonal();
  out.coh = rho - out.diag;
  return out;
}

struct XZVectors {
  Vector5 x;  // (rho_aa, rho_bb, rho_cc, Re rho_ab, Im rho_ab)
  Vector4 z;  // (Re rho_ac, Im rho_ac, Re rho_bc, Im rho_bc)
};

// Linear bijection between Hermitian 3x3 matrices (any trace) and (x, z).
inline XZVectors to_xz(const Matrix3c& op) {
  if ((op - op.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw RepresentationError("to_xz requires a Hermitian matrix");
  XZVectors v;
  v.x << op(0, 0).real(), op(1, 1).real(), op(2, 2).real(), op(0, 1).real(),
      op(0, 1).imag();
  v.z << op(0, 2).real(), op(0, 2).imag(), op(1, 2).real(), op(1, 2).imag();
  return v;
}

inline Matrix3c from_xz(const Vector5& x, const Vector4& z) {
  const complexd i(0.0, 1.0);
  Matrix3c op;
  const complexd ab(x[3], x[4]);
  const complexd ac(z[0], z[1]);
  const complexd bc(z[2], z[3]);
  op << complexd(x[0], 0.0), ab, ac,
      std::conj(ab), complexd(x[1], 0.0), bc,
      std::conj(ac), std::conj(bc), complexd(x[2], 0.0);
  return op;
}

inline Matrix3c from_xz(const XZVectors& v) { return from_xz(v.x, v.z); }

}  // namespace fano
