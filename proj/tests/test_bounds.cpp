#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qland/bounds.hpp"
#include "qland/errors.hpp"
#include "qland/losses.hpp"

using namespace qland;

namespace {

// sqrt(scale (1 - sqrt(fv fw) - sqrt((1-fv)(1-fw)))), the unsimplified form.
double distance_formula(double fv, double fw, double scale) {
  return std::sqrt(scale * std::max(0.0, 1.0 - std::sqrt(fv * fw) - std::sqrt((1 - fv) * (1 - fw))));
}

}  // namespace

TEST(MinDistance, ClosedFormValues) {
  for (double f : {0.0, 0.3, 1.0}) EXPECT_NEAR(min_distance_separable(f, f), 0.0, 1e-12);
  EXPECT_NEAR(min_distance_separable(0.0, 1.0), 2.0, 1e-12);
  EXPECT_NEAR(min_distance_separable(0.5, 1.0), 2.0 * std::sqrt(1.0 - std::sqrt(0.5)), 1e-12);
  EXPECT_NEAR(min_distance_entangled_lb(0.0, 1.0, 8), 4.0, 1e-12);
  EXPECT_NEAR(min_distance_entangled_lb(0.4, 0.4, 8), 0.0, 1e-12);
  for (double fv = 0.0; fv <= 1.0; fv += 0.1) {
    for (double fw = 0.0; fw <= 1.0; fw += 0.1) {
      EXPECT_NEAR(min_distance_separable(fv, fw), distance_formula(fv, fw, 4.0), 1e-7);
      EXPECT_NEAR(min_distance_entangled_lb(fv, fw, 4), distance_formula(fv, fw, 8.0), 1e-7);
    }
  }
  EXPECT_THROW(min_distance_separable(1.5, 0.2), DomainError);
  EXPECT_THROW(min_distance_entangled_lb(0.5, 0.2, 1), DomainError);
}

TEST(MinDistanceOperator, AttainsTargetFidelityAndDistance) {
  Rng rng(1);
  for (std::size_t d : {2u, 4u, 8u}) {
    for (int t = 0; t < 30; ++t) {
      const UnitaryMatrix u = haar_random_unitary(d, rng);
      const UnitaryMatrix v = haar_random_unitary(d, rng);
      const TrainingSample psi = make_separable(d, rng);
      const double fv = sample_loss(u, v, psi).fidelity;
      const double fw = rng.uniform();
      const UnitaryMatrix w = construct_min_distance_operator(u, v, psi, fw);
      EXPECT_NEAR(sample_loss(u, w, psi).fidelity, fw, 1e-9);
      EXPECT_NEAR(frobenius_phase_distance(v, w), min_distance_separable(fv, fw), 1e-9);
    }
  }
}

TEST(MinDistanceOperator, EdgeCases) {
  Rng rng(2);
  const UnitaryMatrix u = haar_random_unitary(4, rng);
  const UnitaryMatrix v = haar_random_unitary(4, rng);
  const TrainingSample psi = make_separable(4, rng);
  const double fv = sample_loss(u, v, psi).fidelity;
  const UnitaryMatrix same = construct_min_distance_operator(u, v, psi, fv);
  EXPECT_NEAR(frobenius_phase_distance(v, same), 0.0, 1e-7);
  const UnitaryMatrix best = construct_min_distance_operator(u, v, psi, 1.0);
  EXPECT_NEAR(sample_loss(u, best, psi).fidelity, 1.0, 1e-9);
  EXPECT_NEAR(frobenius_phase_distance(v, best), std::sqrt(4.0 * (1.0 - std::sqrt(fv))), 1e-9);
  // V = U leaves no orthogonal component; the construction must still work.
  const UnitaryMatrix w = construct_min_distance_operator(u, u, psi, 0.25);
  EXPECT_NEAR(sample_loss(u, w, psi).fidelity, 0.25, 1e-9);
  EXPECT_THROW(construct_min_distance_operator(u, v, make_max_entangled(4), 0.5), DomainError);
}

TEST(EntangledLowerBound, HoldsForRandomOperators) {
  Rng rng(3);
  const TrainingSample phi = make_max_entangled(4);
  for (int t = 0; t < 300; ++t) {
    const UnitaryMatrix u = haar_random_unitary(4, rng);
    const UnitaryMatrix v = haar_random_unitary(4, rng);
    const UnitaryMatrix w = haar_random_unitary(4, rng);
    const double lb = min_distance_entangled_lb(sample_loss(u, v, phi).fidelity,
                                                sample_loss(u, w, phi).fidelity, 4);
    EXPECT_GE(frobenius_phase_distance(v, w), lb - 1e-8);
  }
}

TEST(Ball, SeparableGeometry) {
  const double fv = 0.3;
  const double r_sep = 2.0 * std::sqrt(1.0 - std::sqrt(fv));
  EXPECT_NEAR(ball_max_fidelity_separable(fv, 0.0).max_fidelity, fv, 1e-12);
  EXPECT_NEAR(ball_max_fidelity_separable(fv, 0.0).beta, 0.0, 1e-12);
  EXPECT_EQ(ball_max_fidelity_separable(fv, r_sep).max_fidelity, 1.0);
  EXPECT_EQ(ball_max_fidelity_separable(fv, r_sep + 1).max_fidelity, 1.0);
  EXPECT_NEAR(ball_max_fidelity_separable(fv, 0.5).threshold_radius, r_sep, 1e-12);
  EXPECT_FALSE(ball_max_fidelity_separable(fv, 0.5).is_upper_bound);
  // The max fidelity at radius R has min distance exactly R.
  for (double r : {0.1, 0.4, 0.8}) {
    const BallGeometry g = ball_max_fidelity_separable(fv, r);
    EXPECT_NEAR(min_distance_separable(fv, g.max_fidelity), r, 1e-10);
  }
  EXPECT_THROW(ball_max_fidelity_separable(fv, -1.0), DomainError);
}

TEST(Ball, EntangledGeometry) {
  const double fv = 0.3;
  const std::size_t d = 8;
  const double r_ent = std::sqrt(2.0 * d) * std::sqrt(1.0 - std::sqrt(fv));
  EXPECT_NEAR(ball_max_fidelity_entangled_ub(fv, 0.0, d).max_fidelity, fv, 1e-12);
  EXPECT_EQ(ball_max_fidelity_entangled_ub(fv, r_ent, d).max_fidelity, 1.0);
  EXPECT_TRUE(ball_max_fidelity_entangled_ub(fv, 0.5, d).is_upper_bound);
  for (double r : {0.1, 0.7, 1.5}) {
    const BallGeometry g = ball_max_fidelity_entangled_ub(fv, r, d);
    EXPECT_NEAR(min_distance_entangled_lb(fv, g.max_fidelity, d), r, 1e-10);
  }
}

TEST(Improvement, SeparableValues) {
  EXPECT_NEAR(improvement_separable(0.4, 0.0).value, 0.0, 1e-12);
  EXPECT_TRUE(improvement_separable(0.4, 0.3).exact);
  const double r_sep = 2.0 * std::sqrt(1.0 - std::sqrt(0.4));
  EXPECT_NEAR(improvement_separable(0.4, r_sep).value, 0.6, 1e-12);
  // Improvement equals f_max - f_V below threshold.
  for (double r : {0.2, 0.5, 0.9}) {
    const double fmax = ball_max_fidelity_separable(0.4, r).max_fidelity;
    EXPECT_NEAR(improvement_separable(0.4, r).value, fmax - 0.4, 1e-12);
  }
  // gamma = pi/4 with beta = gamma gives sin^2(gamma), the full loss.
  const double gamma = std::numbers::pi / 4;
  EXPECT_NEAR(std::sin(2 * gamma - gamma) * std::sin(gamma), 0.5, 1e-15);
  const double r_at_gamma = std::sqrt(4.0 * (1.0 - std::cos(gamma)));
  EXPECT_NEAR(improvement_separable(0.5, r_at_gamma).value, 0.5, 1e-12);
}

TEST(Improvement, EntangledDecreasesWithDimension) {
  EXPECT_NEAR(improvement_entangled_ub(0.2, 0.0, 4).value, 0.0, 1e-15);
  EXPECT_FALSE(improvement_entangled_ub(0.2, 1.0, 4).exact);
  double prev = 1e9;
  for (std::size_t d : {4u, 16u, 64u}) {
    const double v = improvement_entangled_ub(0.2, 1.0, d).value;
    EXPECT_LT(v, prev);
    EXPECT_LE(v, 1.0 / std::sqrt(double(d)) + 1e-12);
    prev = v;
  }
}

TEST(Improvement, RatioBound) {
  EXPECT_NEAR(improvement_ratio_bound(0.5, 0.5, 2), 4.0, 1e-12);
  EXPECT_NEAR(improvement_ratio_bound(0.5, 0.5, 5) / improvement_ratio_bound(0.5, 0.5, 7), 2.0, 1e-12);
  EXPECT_THROW(improvement_ratio_bound(0.5, 0.0, 3), DomainError);
  EXPECT_THROW(improvement_ratio_bound(0.5, 5.0, 3), DomainError);
  EXPECT_THROW(improvement_ratio_bound(0.0, 0.5, 3), DomainError);
}

TEST(SineEnvelopes, BracketSine) {
  for (int i = 0; i <= 1000; ++i) {
    const double x = std::numbers::pi * i / 1000.0;
    EXPECT_LE(std::sin(x), sine_upper_parabola(x) + 1e-12);
    EXPECT_GE(std::sin(x), sine_lower_piecewise(x) - 1e-12);
  }
  EXPECT_NEAR(sine_upper_parabola(std::numbers::pi / 2), 1.0, 1e-15);
  EXPECT_NEAR(sine_lower_piecewise(std::numbers::pi / 2), 1.0, 1e-15);
}

TEST(CheckedAcos, ClampsOnlyTinyOvershoot) {
  EXPECT_EQ(checked_acos(1.0 + 1e-13), 0.0);
  EXPECT_THROW(checked_acos(1.0 + 1e-6), DomainError);
  EXPECT_NEAR(bures_angle_from_fidelity(0.5), std::numbers::pi / 4, 1e-15);
}
