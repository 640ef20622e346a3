#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qland/errors.hpp"
#include "qland/losses.hpp"

using namespace qland;

namespace {

UnitaryMatrix pauli(const oracle::Mat& m) { return UnitaryMatrix(m); }

// 1 - |<alpha|(U^dagger V (x) I)|alpha>|^2 by explicit Kronecker products.
double kron_loss(const UnitaryMatrix& u, const UnitaryMatrix& v, const TrainingSample& s) {
  const auto dr = static_cast<Eigen::Index>(s.dim_r());
  const CMatrix op = oracle::kron(CMatrix(u.matrix().adjoint() * v.matrix()), CMatrix::Identity(dr, dr));
  const CVector& a = s.state.amplitudes();
  return 1.0 - std::norm(a.dot(op * a));
}

}  // namespace

TEST(SampleLoss, ZeroAtTarget) {
  Rng rng(1);
  const UnitaryMatrix u = haar_random_unitary(4, rng);
  for (const auto& s : {make_separable(4, rng), make_max_entangled(4), make_nme({0.6, 0.4}, 4)}) {
    EXPECT_NEAR(sample_loss(u, u, s).loss, 0.0, 1e-12);
  }
}

TEST(SampleLoss, PauliZExamples) {
  const UnitaryMatrix id = UnitaryMatrix::identity(2);
  const UnitaryMatrix z = pauli(oracle::pauli_z());
  EXPECT_NEAR(sample_loss(id, z, make_nme({1.0}, 2)).loss, 0.0, 1e-15);
  EXPECT_NEAR(sample_loss(id, z, make_max_entangled(2)).loss, 1.0, 1e-15);
}

TEST(SampleLoss, MatchesKroneckerOracle) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const UnitaryMatrix u = haar_random_unitary(4, rng);
    const UnitaryMatrix v = haar_random_unitary(4, rng);
    const StateVector a(haar_random_vector(12, rng), 4, 3);
    const TrainingSample s = make_sample(a);
    const LossValue l = sample_loss(u, v, s);
    EXPECT_NEAR(l.loss, kron_loss(u, v, s), 1e-12);
    EXPECT_NEAR(l.fidelity, std::pow(std::cos(l.bures_angle), 2), 1e-12);
  }
  EXPECT_THROW(sample_loss(haar_random_unitary(2, rng), haar_random_unitary(2, rng), make_max_entangled(4)),
               DimensionError);
}

TEST(FrobeniusPhaseDistance, ExtremesAndGridOracle) {
  Rng rng(3);
  const UnitaryMatrix u = haar_random_unitary(4, rng);
  const UnitaryMatrix phased(u.matrix() * std::polar(1.0, 0.7));
  EXPECT_NEAR(frobenius_phase_distance(u, phased), 0.0, 1e-7);
  EXPECT_NEAR(frobenius_phase_distance(UnitaryMatrix::identity(2), pauli(oracle::pauli_x())), 2.0, 1e-12);

  const UnitaryMatrix v = haar_random_unitary(4, rng);
  double best = 1e9;
  const int n = 10000;
  for (int k = 0; k < n; ++k) {
    const double rho = 2.0 * std::numbers::pi * k / n;
    best = std::min(best, (u.matrix() - std::polar(1.0, rho) * v.matrix()).norm());
  }
  EXPECT_NEAR(frobenius_phase_distance(u, v), best, 1e-6);
}

TEST(TraceIdentity, AgreesWithStateSimulation) {
  Rng rng(4);
  const TrainingSample phi = make_max_entangled(8);
  for (int t = 0; t < 100; ++t) {
    const UnitaryMatrix u = haar_random_unitary(8, rng);
    const UnitaryMatrix v = haar_random_unitary(8, rng);
    EXPECT_NEAR(maxent_loss_from_trace(u, v).loss, kron_loss(u, v, phi), 1e-10);
  }
  EXPECT_NEAR(maxent_loss_from_trace(UnitaryMatrix::identity(2), pauli(oracle::pauli_x())).loss, 1.0, 1e-15);
}

TEST(Risk, ZeroAtTarget) {
  Rng rng(5);
  const UnitaryMatrix u = haar_random_unitary(3, rng);
  const RiskEstimate r = risk_estimate(u, u, 500, rng);
  EXPECT_NEAR(r.mean, 0.0, 1e-12);
  EXPECT_NEAR(r.std_error, 0.0, 1e-12);
}

TEST(Risk, PauliZMatchesBlochQuadrature) {
  // Midpoint rule over the polar angle; 1 - |<psi|Z|psi>|^2 = 1 - cos^2(theta).
  const int m = 20000;
  double quad = 0.0;
  for (int k = 0; k < m; ++k) {
    const double th = std::numbers::pi * (k + 0.5) / m;
    quad += (1.0 - std::cos(th) * std::cos(th)) * 0.5 * std::sin(th) * std::numbers::pi / m;
  }
  Rng rng(6);
  const RiskEstimate r = risk_estimate(UnitaryMatrix::identity(2), pauli(oracle::pauli_z()), 100000, rng);
  EXPECT_LT(std::abs(r.mean - quad), 3.0 * r.std_error);
}

TEST(Qnfl, DirectFormula) {
  EXPECT_NEAR(qnfl_lower_bound(2, 1, 1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(qnfl_lower_bound(4, 1, 1), 0.7, 1e-15);
  EXPECT_LT(qnfl_lower_bound(4, 4, 1), 0.0);
  EXPECT_THROW(qnfl_lower_bound(4, 5, 1), DomainError);
  EXPECT_THROW(qnfl_lower_bound(4, 1, 0), DomainError);
}
