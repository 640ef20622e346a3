#pragma once

#include <cstddef>

#include "qland/qcore.hpp"
#include "qland/samples.hpp"

namespace qland {

/// Loss, fidelity and Bures angle of one hypothesis on one sample.
/// loss = 1 - fidelity and fidelity = cos(bures_angle)^2.
struct LossValue {
  double loss;
  double fidelity;
  double bures_angle;

  /// Builds the triple from a fidelity, clamping rounding overshoot into [0, 1].
  static LossValue from_fidelity(double fidelity);
};

/// 1 - |<alpha| (U^dagger V (x) I) |alpha>|^2.
LossValue sample_loss(const UnitaryMatrix& target, const UnitaryMatrix& hypothesis,
                      const TrainingSample& sample);

/// Frobenius distance minimised over a global phase:
/// sqrt(2d) * sqrt(1 - |Tr(U^dagger V)| / d).
double frobenius_phase_distance(const UnitaryMatrix& u, const UnitaryMatrix& v);

/// Loss on the maximally entangled sample through the trace identity
/// F = |Tr(U^dagger V)|^2 / d^2.
LossValue maxent_loss_from_trace(const UnitaryMatrix& target, const UnitaryMatrix& hypothesis);

struct RiskEstimate {
  double mean;
  double std_error;
  std::size_t samples;
};

/// Monte Carlo estimate of the Haar-averaged loss over separable inputs on H_X.
RiskEstimate risk_estimate(const UnitaryMatrix& target, const UnitaryMatrix& hypothesis,
                           std::size_t samples, Rng& rng);

/// 1 - (r^2 t^2 + d + 1) / (d (d + 1)); unclamped, so it may be negative.
double qnfl_lower_bound(std::size_t d, std::size_t rank, std::size_t training_size);

}  // namespace qland
