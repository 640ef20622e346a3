#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qland/pqc.hpp"

namespace qland {

using Objective = std::function<double(const ParameterVector&)>;

/// B(center, radius) in the 2-norm.
struct BallConstraint {
  ParameterVector center;
  double radius = 0.0;

  /// ||theta - center|| <= radius + tol.
  bool contains(const ParameterVector& theta, double tol = 1e-9) const;

  /// Euclidean projection onto the ball.
  ParameterVector project(const ParameterVector& theta) const;
};

struct OptimizerSettings {
  std::size_t max_iterations = 200;
  std::size_t restarts = 3;
  /// Stop when the projected-gradient step or the loss decrease falls below this.
  double tolerance = 1e-10;
  double fd_step = 1e-6;
  std::uint64_t seed = 0;

  /// Throws DomainError unless every field is positive.
  void validate() const;
};

struct MinimizeResult {
  ParameterVector theta;
  double loss;
  std::size_t evaluations;
};

/// Minimises `objective` over the ball with projected quasi-Newton steps.
///
/// Restart 0 starts from the center, restart k > 0 from a random feasible
/// perturbation drawn with derive_seed(settings.seed, {k}). The center is
/// always kept as a candidate, so loss <= objective(center).
MinimizeResult minimize_in_ball(const Objective& objective, const BallConstraint& ball,
                                const OptimizerSettings& settings);

struct SweepPoint {
  double radius;
  double raw_min_loss;
  /// Running minimum of raw_min_loss over all radii up to this one.
  double envelope_min_loss;
  ParameterVector best_theta;
  std::size_t evaluations;
};

struct SweepCurve {
  std::vector<SweepPoint> points;
};

/// n evenly spaced radii from start to stop inclusive.
std::vector<double> linear_radii(double start, double stop, std::size_t count);

/// The default grid: 16 radii from 0.25 to 4.0.
std::vector<double> default_radii();

/// One independent minimize_in_ball per radius. The run at index k uses seed
/// derive_seed(settings.seed, {k}). Throws DomainError if radii is empty, not
/// strictly increasing or not positive.
SweepCurve radius_sweep(const Objective& objective, const ParameterVector& center,
                        const std::vector<double>& radii, const OptimizerSettings& settings);

/// Smallest swept radius whose envelope loss is <= threshold.
std::optional<double> distance_to_minimum(const SweepCurve& curve, double threshold = 1e-3);

/// loss_at_center minus the envelope loss at the largest swept radius <= R,
/// floored at zero. Throws DomainError when R is below the smallest radius.
double improvement_from_curve(const SweepCurve& curve, double loss_at_center, double radius);

}  // namespace qland
