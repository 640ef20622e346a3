#pragma once

#include <cstddef>

#include "qland/qcore.hpp"
#include "qland/samples.hpp"

namespace qland {

/// arccos with overshoot handling: arguments within 1e-12 outside [-1, 1]
/// are clamped, anything further out throws DomainError.
double checked_acos(double x);

/// Bures angle arccos(sqrt f); f is clamped into [0, 1] at the 1e-12 level.
double bures_angle_from_fidelity(double fidelity);

/// Maximal reachable fidelity inside a d_F' ball around the hypothesis.
struct BallGeometry {
  double radius;
  /// Largest Bures-angle decrease available in the ball. Below threshold this
  /// is arccos(1 - R^2/4) (separable) or arccos(1 - R^2/(2d)) (entangled);
  /// at or above threshold it is the full angle gamma_V.
  double beta;
  /// Radius from which a zero-loss operator lies inside the ball.
  double threshold_radius;
  double max_fidelity;
  /// False when max_fidelity is attained (separable), true for the entangled bound.
  bool is_upper_bound;
};

struct ImprovementValue {
  double value;
  /// True for the separable equality, false for the entangled upper bound.
  bool exact;
};

/// Smallest d_F'(V, W) over all W with separable fidelity f_W, given f_V:
/// sqrt(4 (1 - sqrt(f_V f_W) - sqrt((1-f_V)(1-f_W)))).
double min_distance_separable(double f_v, double f_w);

/// Lower bound on d_F'(V, W) over W with maximally-entangled fidelity f_W:
/// sqrt(2d (1 - sqrt(f_V f_W) - sqrt((1-f_V)(1-f_W)))).
double min_distance_entangled_lb(double f_v, double f_w, std::size_t d);

/// Builds the operator W = T V that attains min_distance_separable.
///
/// T is a rotation in the plane spanned by U|psi> and U|gamma>, where
/// |gamma> is the normalised part of U^dagger V |psi> orthogonal to |psi>
/// (or, if that part vanishes, the first computational basis vector
/// orthogonalised against |psi>). In the basis {U|psi>, U|gamma>, b_3, ...}
///
///     T = [[ x, e^{i theta} y ], [ -e^{-i theta} y, x ]] (+) I_{d-2}
///
/// with x = cos(gamma_V - gamma_W), y = sin(gamma_V - gamma_W) and
/// theta = arg <psi|U^dagger V|psi>.
///
/// Requires a separable `psi` and d >= 2; throws DomainError otherwise.
UnitaryMatrix construct_min_distance_operator(const UnitaryMatrix& target,
                                              const UnitaryMatrix& hypothesis,
                                              const TrainingSample& psi, double f_w);

BallGeometry ball_max_fidelity_separable(double f_v, double radius);
BallGeometry ball_max_fidelity_entangled_ub(double f_v, double radius, std::size_t d);

/// Exact separable improvement: sin(2 gamma - beta_sep) sin(beta_sep) below
/// the threshold radius, the full loss 1 - f_V at or above it.
ImprovementValue improvement_separable(double f_v, double radius);

/// Upper bound on the maximally entangled improvement, same form with beta_ent.
ImprovementValue improvement_entangled_ub(double f_v, double radius, std::size_t d);

/// Bound 8 / sqrt(2^n) on Lambda_Phi^ub / Lambda_psi at a common starting
/// loss. Requires loss in (0, 1] and 0 < R <= sqrt(4 (1 - sqrt(1 - loss))).
double improvement_ratio_bound(double loss, double radius, std::size_t qubits);

/// (4x/pi)(1 - x/pi), an upper envelope of sin on [0, pi].
double sine_upper_parabola(double x);

/// 2x/pi on [0, pi/2], 2 - 2x/pi on [pi/2, pi]; a lower envelope of sin.
double sine_lower_piecewise(double x);

}  // namespace qland
