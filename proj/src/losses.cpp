#include "qland/losses.hpp"

#include <algorithm>
#include <cmath>

#include "qland/errors.hpp"

namespace qland {

namespace {

void require_same_dim(const UnitaryMatrix& u, const UnitaryMatrix& v, const char* what) {
  if (u.dim() != v.dim()) {
    throw DimensionError(std::string(what) + ": operator dimensions differ (" +
                         std::to_string(u.dim()) + " vs " + std::to_string(v.dim()) + ")");
  }
}

}  // namespace

LossValue LossValue::from_fidelity(double fidelity) {
  const double f = std::clamp(fidelity, 0.0, 1.0);
  return LossValue{1.0 - f, f, std::acos(std::sqrt(f))};
}

LossValue sample_loss(const UnitaryMatrix& target, const UnitaryMatrix& hypothesis,
                      const TrainingSample& sample) {
  require_same_dim(target, hypothesis, "sample_loss");
  if (target.dim() != sample.dim_x()) {
    throw DimensionError("sample_loss: operator dimension does not match the sample's H_X");
  }
  const CMatrix a = sample.state.as_matrix();
  // <alpha|(U^dagger V (x) I)|alpha> = <U A, V A>_F
  const cplx overlap = ((target.matrix() * a).adjoint() * (hypothesis.matrix() * a)).trace();
  return LossValue::from_fidelity(std::norm(overlap));
}

double frobenius_phase_distance(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  require_same_dim(u, v, "frobenius_phase_distance");
  const double d = static_cast<double>(u.dim());
  const double tr = std::abs((u.matrix().adjoint() * v.matrix()).trace());
  return std::sqrt(2.0 * d) * std::sqrt(std::max(0.0, 1.0 - tr / d));
}

LossValue maxent_loss_from_trace(const UnitaryMatrix& target, const UnitaryMatrix& hypothesis) {
  require_same_dim(target, hypothesis, "maxent_loss_from_trace");
  const double d = static_cast<double>(target.dim());
  const cplx tr = (target.matrix().adjoint() * hypothesis.matrix()).trace();
  return LossValue::from_fidelity(std::norm(tr) / (d * d));
}

RiskEstimate risk_estimate(const UnitaryMatrix& target, const UnitaryMatrix& hypothesis,
                           std::size_t samples, Rng& rng) {
  require_same_dim(target, hypothesis, "risk_estimate");
  if (samples == 0) throw DomainError("risk_estimate: need at least one sample");
  const CMatrix m = target.matrix().adjoint() * hypothesis.matrix();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const CVector psi = haar_random_vector(target.dim(), rng);
    const double loss = 1.0 - std::min(1.0, std::norm(psi.dot(m * psi)));
    sum += loss;
    sum_sq += loss * loss;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  double se = 0.0;
  if (samples > 1) {
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    se = std::sqrt(var / n);
  }
  return RiskEstimate{mean, se, samples};
}

double qnfl_lower_bound(std::size_t d, std::size_t rank, std::size_t training_size) {
  if (d == 0 || rank == 0 || training_size == 0) {
    throw DomainError("qnfl_lower_bound: d, r and t must be positive");
  }
  if (rank > d) throw DomainError("qnfl_lower_bound: Schmidt rank exceeds dimension");
  const double dd = static_cast<double>(d);
  const double rt = static_cast<double>(rank) * static_cast<double>(training_size);
  return 1.0 - (rt * rt + dd + 1.0) / (dd * (dd + 1.0));
}

}  // namespace qland
