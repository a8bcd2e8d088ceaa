#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "fano/kdq.hpp"
#include "fano/presets.hpp"
#include "oracles.hpp"

using namespace fano;
using Catch::Matchers::WithinAbs;

namespace {

double dimless_to_seconds(const SystemParams& params, double u) {
  return u * 2.0 * std::numbers::pi / params.gamma_mean();
}

}  // namespace

TEST_CASE("kdq at t = 0 is the diagonal table of populations") {
  const RunConfig cfg = preset("certification-p-1");
  const Matrix3c rho0 = pure_state(cfg.init);
  const KdqDistribution dist = kdq(cfg.params, rho0, 0.0);
  for (int l = 0; l < 3; ++l) {
    for (int j = 0; j < 3; ++j) {
      const complexd expected = l == j ? rho0(j, j) : complexd(0.0);
      CHECK(std::abs(dist.q(l, j) - expected) <= 1e-14);
    }
  }
}

TEST_CASE("kdq sum rule and Born marginals") {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const SystemParams params = oracles::random_params(rng);
    const Matrix3c rho0 = oracles::random_pure_state(rng);
    const double t = dimless_to_seconds(params, 1.2 * (trial + 1) / 20.0);
    const KdqDistribution dist = kdq(params, rho0, t);

    CHECK(std::abs(dist.q.sum() - 1.0) <= 1e-10);

    const Generators gen = build_generators(params);
    const Matrix3c rho_t = apply_channel_hermitian(gen, rho0, t);
    const Eigen::Vector3cd cols = dist.column_marginals();
    const Eigen::Vector3cd rows = dist.row_marginals();
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(cols[k] - rho_t(k, k)) <= 1e-10);
      CHECK(std::abs(rows[k] - rho0(k, k)) <= 1e-10);
    }
  }
}

TEST_CASE("kdq equals tpm for initial states diagonal in the energy basis") {
  std::mt19937 rng(59);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemParams params = oracles::random_params(rng);
    Eigen::Vector3d pops(uni(rng), uni(rng), uni(rng));
    pops /= pops.sum();
    const Matrix3c rho0 = pops.cast<complexd>().asDiagonal();
    const double t = dimless_to_seconds(params, 0.8);
    const KdqDistribution dist = kdq(params, rho0, t);
    const Eigen::Matrix3d joint = tpm(params, rho0, t);
    CHECK((dist.q.real() - joint).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(dist.q.imag().cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(nonpositivity(dist) <= 1e-10);
  }
}

TEST_CASE("tpm basics") {
  const RunConfig cfg = preset("certification-p-1");
  const Matrix3c rho0 = pure_state(cfg.init);
  const Eigen::Matrix3d at_zero = tpm(cfg.params, rho0, 0.0);
  CHECK_THAT(at_zero(0, 0), WithinAbs(0.3, 1e-12));
  CHECK_THAT(at_zero(1, 1), WithinAbs(0.3, 1e-12));
  CHECK_THAT(at_zero(2, 2), WithinAbs(0.4, 1e-12));
  CHECK_THAT(at_zero.sum(), WithinAbs(1.0, 1e-10));

  RunConfig dark = cfg;
  dark.params.nbar = 0.0;
  const Matrix3c ground = Eigen::Vector3cd(0, 0, 1).asDiagonal();
  const Eigen::Matrix3d p_dark =
      tpm(dark.params, ground, dimless_to_seconds(dark.params, 1.0));
  CHECK_THAT(p_dark(2, 2), WithinAbs(1.0, 1e-10));
  CHECK(p_dark.cwiseAbs().sum() - p_dark(2, 2) <= 1e-10);
}

TEST_CASE("tpm entries stay within [0, 1] and sum to one") {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemParams params = oracles::random_params(rng);
    const Matrix3c rho0 = oracles::random_pure_state(rng);
    const Eigen::Matrix3d joint =
        tpm(params, rho0, dimless_to_seconds(params, 0.5));
    CHECK(joint.minCoeff() >= -1e-12);
    CHECK(joint.maxCoeff() <= 1.0 + 1e-12);
    CHECK_THAT(joint.sum(), WithinAbs(1.0, 1e-10));
  }
}

TEST_CASE("column marginal differs from the TPM marginal for coherent states") {
  const RunConfig cfg = preset("certification-p-1");
  const Matrix3c rho0 = pure_state(cfg.init);
  const Generators gen = build_generators(cfg.params);
  bool differs = false;
  for (int k = 1; k <= 15 && !differs; ++k) {
    const double t = dimless_to_seconds(cfg.params, 0.1 * k);
    const Propagator prop = make_propagator(gen, t);
    const KdqDistribution dist = kdq(gen, rho0, prop);
    const Eigen::Vector3d kdq_marginal = dist.column_marginals().real();
    const Eigen::Vector3d tpm_marginal =
        tpm(gen, rho0, prop).colwise().sum().transpose();
    differs = (kdq_marginal - tpm_marginal).cwiseAbs().maxCoeff() > 1e-6;
  }
  CHECK(differs);
}

TEST_CASE("transient negativity of q_ab at p = -1 with zero imaginary parts") {
  const RunConfig cfg = preset("certification-p-1");
  const Matrix3c rho0 = pure_state(cfg.init);
  const auto dists = kdq_trajectory(cfg.params, rho0, cfg.grid);
  double min_re_ab = 0.0;
  double max_im = 0.0;
  for (const auto& dist : dists) {
    min_re_ab = std::min(min_re_ab, dist.q(0, 1).real());
    max_im = std::max(max_im, dist.q.imag().cwiseAbs().maxCoeff());
  }
  CHECK(min_re_ab < -0.01);
  CHECK(max_im <= 1e-10);
}

TEST_CASE("nonpositivity is zero for diagonal states and handles complex tables") {
  const RunConfig cfg = preset("certification-p-0.5");
  const Matrix3c rho0 = Eigen::Vector3cd(0.3, 0.3, 0.4).asDiagonal();
  const KdqDistribution dist =
      kdq(cfg.params, rho0, dimless_to_seconds(cfg.params, 0.6));
  CHECK(nonpositivity(dist) <= 1e-10);

  KdqDistribution synthetic;
  synthetic.q = Matrix3c::Zero();
  synthetic.q(0, 0) = 0.5;
  synthetic.q(0, 1) = complexd(0.0, 0.5);  // magnitude 1/2
  synthetic.q_diag = synthetic.q;
  synthetic.q_coh = Matrix3c::Zero();
  CHECK_THAT(nonpositivity(synthetic), WithinAbs(0.0, 1e-15));
}

TEST_CASE("nonpositivity peak grows with |p|") {
  double previous = -1.0;
  for (const char* name : {"certification-p-0.25", "certification-p-0.5",
                           "certification-p-0.75", "certification-p-1"}) {
    const RunConfig cfg = preset(name);
    const auto dists =
        kdq_trajectory(cfg.params, pure_state(cfg.init), cfg.grid);
    double peak = 0.0;
    for (const auto& dist : dists)
      peak = std::max(peak, nonpositivity(dist));
    CHECK(peak > previous);
    previous = peak;
  }
  CHECK(previous > 0.0);
}

TEST_CASE("average energy change vanishes at t = 0") {
  const RunConfig cfg = preset("certification-p-1");
  const Hamiltonian ham(cfg.params);
  const KdqDistribution dist = kdq(cfg.params, pure_state(cfg.init), 0.0);
  const EnergyChange de = average_energy_change(dist, ham);
  CHECK(std::abs(de.total) <= 1e-10 * cfg.params.omega_ac());
}

TEST_CASE("extractable work plateau near 17% of omega_a at p = -1") {
  const RunConfig cfg = preset("certification-p-1");
  const Hamiltonian ham(cfg.params);
  const KdqDistribution dist =
      kdq(cfg.params, pure_state(cfg.init),
          dimless_to_seconds(cfg.params, 1.2));
  const EnergyChange de = average_energy_change(dist, ham);
  CHECK_THAT(-de.total.real() / cfg.params.omega_ac(), WithinAbs(0.17, 0.02));
}

TEST_CASE("diagonal contribution to the energy change is zero for presets") {
  for (const char* name : {"certification-p-1", "certification-p-0.5"}) {
    const RunConfig cfg = preset(name);
    const Hamiltonian ham(cfg.params);
    for (double u : {0.1, 0.5, 1.5}) {
      const KdqDistribution dist =
          kdq(cfg.params, pure_state(cfg.init),
              dimless_to_seconds(cfg.params, u));
      const EnergyChange de = average_energy_change(dist, ham);
      CHECK(std::abs(de.diag.real()) <= 1e-6 * cfg.params.omega_ac());
    }
  }
}

TEST_CASE("energy change agrees with the trace formula") {
  std::mt19937 rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemParams params = oracles::random_params(rng);
    const Hamiltonian ham(params);
    const Matrix3c rho0 = oracles::random_pure_state(rng);
    const double t = dimless_to_seconds(params, 0.9);
    const KdqDistribution dist = kdq(params, rho0, t);
    const EnergyChange de = average_energy_change(dist, ham);

    const Generators gen = build_generators(params);
    const Matrix3c rho_t = apply_channel_hermitian(gen, rho0, t);
    const double via_trace =
        ((ham.matrix() * rho_t).trace() - (ham.matrix() * rho0).trace()).real();
    CHECK(std::abs(de.total.real() - via_trace) <= 1e-9 * params.omega_ac());
    CHECK(std::abs(de.total.imag()) <= 1e-9 * params.omega_ac());
  }
}

TEST_CASE("kdq split is exactly additive") {
  std::mt19937 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const SystemParams params = oracles::random_params(rng);
    const Matrix3c rho0 = oracles::random_pure_state(rng);
    const KdqDistribution dist =
        kdq(params, rho0, dimless_to_seconds(params, 0.4));
    // Order matters for exactness: q is stored as fl(q_diag + q_coh).
    CHECK((dist.q_diag + dist.q_coh - dist.q).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("kdq values are insensitive to the z sector") {
  // Perturbing the optical coherences of the initial state must leave the
  // whole table unchanged: only the x sector feeds the diagonal readout.
  const RunConfig cfg = preset("certification-p-1");
  const Generators gen = build_generators(cfg.params);
  const Matrix3c rho0 = pure_state(cfg.init);
  Matrix3c perturbed = rho0;
  perturbed(0, 2) += complexd(0.02, -0.01);
  perturbed(2, 0) += complexd(0.02, 0.01);
  const Propagator prop = make_propagator(
      gen, dimless_to_seconds(cfg.params, 0.7));
  const KdqDistribution base = kdq(gen, rho0, prop);
  const KdqDistribution shifted = kdq(gen, perturbed, prop);
  CHECK((base.q - shifted.q).cwiseAbs().maxCoeff() <= 1e-14);
}
