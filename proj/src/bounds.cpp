#include "qland/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qland/errors.hpp"

namespace qland {

namespace {

constexpr double kClampSlack = 1e-12;
constexpr double kPi = std::numbers::pi;

double checked_fidelity(double f, const char* what) {
  if (!(f >= -kClampSlack && f <= 1.0 + kClampSlack)) {
    throw DomainError(std::string(what) + ": fidelity " + std::to_string(f) +
                      " outside [0, 1]");
  }
  return std::clamp(f, 0.0, 1.0);
}

void check_radius(double radius, const char* what) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw DomainError(std::string(what) + ": radius must be a finite value >= 0");
  }
}

void check_dim(std::size_t d, const char* what) {
  if (d < 2) throw DomainError(std::string(what) + ": dimension must be >= 2");
}

// 1 - cos(a - b) = 2 sin^2((a - b)/2), evaluated in the stable form.
double half_angle_sine(double f_v, double f_w) {
  const double delta = bures_angle_from_fidelity(f_v) - bures_angle_from_fidelity(f_w);
  return std::abs(std::sin(0.5 * delta));
}

BallGeometry ball_geometry(double f_v, double radius, double scale, bool upper) {
  const double gamma = bures_angle_from_fidelity(f_v);
  const double threshold = std::sqrt(scale) * std::sqrt(1.0 - std::sqrt(f_v));
  if (radius >= threshold) {
    return BallGeometry{radius, gamma, threshold, 1.0, upper};
  }
  const double beta = checked_acos(1.0 - radius * radius / scale);
  const double c = std::cos(gamma - beta);
  return BallGeometry{radius, beta, threshold, c * c, upper};
}

double improvement(double f_v, const BallGeometry& g) {
  if (g.radius >= g.threshold_radius) return 1.0 - f_v;
  const double gamma = bures_angle_from_fidelity(f_v);
  const double v = std::sin(2.0 * gamma - g.beta) * std::sin(g.beta);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

double checked_acos(double x) {
  if (std::isnan(x) || x < -1.0 - kClampSlack || x > 1.0 + kClampSlack) {
    throw DomainError("arccos argument " + std::to_string(x) + " outside [-1, 1]");
  }
  return std::acos(std::clamp(x, -1.0, 1.0));
}

double bures_angle_from_fidelity(double fidelity) {
  const double f = checked_fidelity(fidelity, "bures_angle_from_fidelity");
  return std::acos(std::sqrt(f));
}

double min_distance_separable(double f_v, double f_w) {
  checked_fidelity(f_v, "min_distance_separable");
  checked_fidelity(f_w, "min_distance_separable");
  // sqrt(4 * 2 sin^2(delta/2))
  return 2.0 * std::numbers::sqrt2 * half_angle_sine(f_v, f_w);
}

double min_distance_entangled_lb(double f_v, double f_w, std::size_t d) {
  checked_fidelity(f_v, "min_distance_entangled_lb");
  checked_fidelity(f_w, "min_distance_entangled_lb");
  check_dim(d, "min_distance_entangled_lb");
  return 2.0 * std::sqrt(static_cast<double>(d)) * half_angle_sine(f_v, f_w);
}

UnitaryMatrix construct_min_distance_operator(const UnitaryMatrix& target,
                                              const UnitaryMatrix& hypothesis,
                                              const TrainingSample& psi, double f_w) {
  const std::size_t d = target.dim();
  if (hypothesis.dim() != d || psi.dim_x() != d) {
    throw DimensionError("construct_min_distance_operator: dimension mismatch");
  }
  check_dim(d, "construct_min_distance_operator");
  if (psi.schmidt.rank != 1) {
    throw DomainError("construct_min_distance_operator: sample must be separable");
  }
  f_w = checked_fidelity(f_w, "construct_min_distance_operator");

  const auto n = static_cast<Eigen::Index>(d);
  const CMatrix& u = target.matrix();
  const CVector x = psi.schmidt.basis_x.col(0);
  const CVector rotated = u.adjoint() * (hypothesis.matrix() * x);
  const cplx overlap = x.dot(rotated);
  const CVector perp = rotated - overlap * x;

  CVector gamma_vec;
  if (perp.norm() >= 1e-10) {
    gamma_vec = perp / perp.norm();
  } else {
    // Any unit vector orthogonal to |psi>: first basis vector that survives
    // Gram-Schmidt against |psi>.
    for (Eigen::Index k = 0; k < n; ++k) {
      CVector e = CVector::Zero(n);
      e(k) = 1.0;
      e -= x.dot(e) * x;
      if (e.norm() > 1e-6) {
        gamma_vec = e / e.norm();
        break;
      }
    }
  }

  const double f_v = std::min(1.0, std::norm(overlap));
  const double delta = bures_angle_from_fidelity(f_v) - bures_angle_from_fidelity(f_w);
  const double cx = std::cos(delta);
  const double sy = std::sin(delta);
  const double theta = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;
  const cplx phase = std::polar(1.0, theta);

  CMatrix pair(n, 2);
  pair.col(0) = u * x;
  pair.col(1) = u * gamma_vec;
  // Complete {U|psi>, U|gamma>} to an orthonormal basis; the Householder Q
  // spans the same leading plane, so its trailing columns are the b_3.. b_d.
  Eigen::HouseholderQR<CMatrix> qr(pair);
  CMatrix basis = qr.householderQ();
  basis.col(0) = pair.col(0);
  basis.col(1) = pair.col(1);

  CMatrix block = CMatrix::Identity(n, n);
  block(0, 0) = cx;
  block(0, 1) = phase * sy;
  block(1, 0) = -std::conj(phase) * sy;
  block(1, 1) = cx;

  const CMatrix t = basis * block * basis.adjoint();
  return UnitaryMatrix(t * hypothesis.matrix());
}

BallGeometry ball_max_fidelity_separable(double f_v, double radius) {
  f_v = checked_fidelity(f_v, "ball_max_fidelity_separable");
  check_radius(radius, "ball_max_fidelity_separable");
  return ball_geometry(f_v, radius, 4.0, false);
}

BallGeometry ball_max_fidelity_entangled_ub(double f_v, double radius, std::size_t d) {
  f_v = checked_fidelity(f_v, "ball_max_fidelity_entangled_ub");
  check_radius(radius, "ball_max_fidelity_entangled_ub");
  check_dim(d, "ball_max_fidelity_entangled_ub");
  return ball_geometry(f_v, radius, 2.0 * static_cast<double>(d), true);
}

ImprovementValue improvement_separable(double f_v, double radius) {
  const BallGeometry g = ball_max_fidelity_separable(f_v, radius);
  return ImprovementValue{improvement(std::clamp(f_v, 0.0, 1.0), g), true};
}

ImprovementValue improvement_entangled_ub(double f_v, double radius, std::size_t d) {
  const BallGeometry g = ball_max_fidelity_entangled_ub(f_v, radius, d);
  return ImprovementValue{improvement(std::clamp(f_v, 0.0, 1.0), g), false};
}

double improvement_ratio_bound(double loss, double radius, std::size_t qubits) {
  if (!(loss > 0.0 && loss <= 1.0)) {
    throw DomainError("improvement_ratio_bound: loss must lie in (0, 1]");
  }
  if (qubits == 0) throw DomainError("improvement_ratio_bound: need at least one qubit");
  const double r_max = std::sqrt(4.0 * (1.0 - std::sqrt(1.0 - loss)));
  if (!(radius > 0.0 && radius <= r_max + kClampSlack)) {
    throw DomainError("improvement_ratio_bound: radius " + std::to_string(radius) +
                      " outside (0, " + std::to_string(r_max) + "]");
  }
  return 8.0 / std::sqrt(std::ldexp(1.0, static_cast<int>(qubits)));
}

double sine_upper_parabola(double x) {
  if (x < -kClampSlack || x > kPi + kClampSlack) {
    throw DomainError("sine_upper_parabola: x outside [0, pi]");
  }
  return 4.0 * x / kPi * (1.0 - x / kPi);
}

double sine_lower_piecewise(double x) {
  if (x < -kClampSlack || x > kPi + kClampSlack) {
    throw DomainError("sine_lower_piecewise: x outside [0, pi]");
  }
  return x <= kPi / 2.0 ? 2.0 * x / kPi : 2.0 - 2.0 * x / kPi;
}

}  // namespace qland
