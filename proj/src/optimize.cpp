#include "qland/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qland/errors.hpp"
#include "qland/numdiff.hpp"

namespace qland {

bool BallConstraint::contains(const ParameterVector& theta, double tol) const {
  return (theta - center).norm() <= radius + tol;
}

ParameterVector BallConstraint::project(const ParameterVector& theta) const {
  const ParameterVector offset = theta - center;
  const double norm = offset.norm();
  if (norm <= radius) return theta;
  if (radius == 0.0) return center;
  return center + offset * (radius / norm);
}

void OptimizerSettings::validate() const {
  if (max_iterations == 0 || restarts == 0 || !(tolerance > 0.0) || !(fd_step > 0.0)) {
    throw DomainError("OptimizerSettings: max_iterations, restarts, tolerance and fd_step must be positive");
  }
}

namespace {

struct Counted {
  const Objective& f;
  std::size_t calls = 0;
  double operator()(const ParameterVector& x) {
    ++calls;
    return f(x);
  }
};

// Projected BFGS with Armijo backtracking along the projection arc.
MinimizeResult local_search(Counted& f, const BallConstraint& ball, ParameterVector x,
                            const OptimizerSettings& s) {
  const auto p = x.size();
  const double fd = s.fd_step;
  // Difference probes may step slightly outside the ball.
  auto grad = [&](const ParameterVector& at) { return central_difference_gradient(f, at, fd); };

  double fx = f(x);
  Eigen::VectorXd g = grad(x);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(p, p);
  bool fresh = true;

  for (std::size_t it = 0; it < s.max_iterations; ++it) {
    const ParameterVector pg = ball.project(x - g) - x;
    if (pg.norm() < s.tolerance) break;

    Eigen::VectorXd dir = -h * g;
    if (!fresh && g.dot(dir) >= 0.0) {
      h.setIdentity();
      fresh = true;
      dir = -g;
    }

    bool accepted = false;
    ParameterVector xn;
    double fn = fx;
    for (double t = 1.0; t > 1e-12; t *= 0.5) {
      xn = ball.project(x + t * dir);
      const Eigen::VectorXd step = xn - x;
      if (step.norm() < 1e-15) break;
      fn = f(xn);
      const double slope = std::min(g.dot(step), 0.0);
      if (fn < fx && fn <= fx + 1e-4 * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (fresh) break;
      h.setIdentity();
      fresh = true;
      continue;
    }

    const Eigen::VectorXd gn = grad(xn);
    const Eigen::VectorXd sv = xn - x;
    const Eigen::VectorXd yv = gn - g;
    const double sy = sv.dot(yv);
    if (sy > 1e-12 * sv.norm() * yv.norm()) {
      if (fresh) h *= sy / yv.squaredNorm();
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = h * yv;
      h += (rho * rho * yv.dot(hy) + rho) * sv * sv.transpose() -
           rho * (hy * sv.transpose() + sv * hy.transpose());
      fresh = false;
    }

    const double decrease = fx - fn;
    x = std::move(xn);
    fx = fn;
    g = gn;
    if (decrease < s.tolerance * std::max(1.0, std::abs(fx)) && sv.norm() < std::sqrt(s.tolerance)) {
      break;
    }
  }
  return {std::move(x), fx, 0};
}

}  // namespace

MinimizeResult minimize_in_ball(const Objective& objective, const BallConstraint& ball,
                                const OptimizerSettings& settings) {
  settings.validate();
  if (!(ball.radius >= 0.0)) throw DomainError("minimize_in_ball: radius must be >= 0");

  Counted f{objective};
  MinimizeResult best{ball.center, f(ball.center), 0};
  if (ball.radius == 0.0 || ball.center.size() == 0) {
    best.evaluations = f.calls;
    return best;
  }

  for (std::size_t k = 0; k < settings.restarts; ++k) {
    ParameterVector start = ball.center;
    if (k > 0) {
      Rng rng(derive_seed(settings.seed, {k}));
      Eigen::VectorXd dir(ball.center.size());
      for (Eigen::Index i = 0; i < dir.size(); ++i) dir(i) = rng.normal();
      const double norm = dir.norm();
      if (norm > 0.0) start += dir * (ball.radius * rng.uniform() / norm);
      start = ball.project(start);
    }
    MinimizeResult r = local_search(f, ball, std::move(start), settings);
    if (r.loss < best.loss) best = std::move(r);
  }
  best.evaluations = f.calls;
  return best;
}

std::vector<double> linear_radii(double start, double stop, std::size_t count) {
  if (count == 0) throw DomainError("linear_radii: count must be >= 1");
  if (count == 1) return {start};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = stop;
  return out;
}

std::vector<double> default_radii() { return linear_radii(0.25, 4.0, 16); }

SweepCurve radius_sweep(const Objective& objective, const ParameterVector& center,
                        const std::vector<double>& radii, const OptimizerSettings& settings) {
  if (radii.empty()) throw DomainError("radius_sweep: empty radius list");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw DomainError("radius_sweep: radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) {
      throw DomainError("radius_sweep: radii must be strictly increasing");
    }
  }
  SweepCurve curve;
  curve.points.reserve(radii.size());
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < radii.size(); ++k) {
    OptimizerSettings local = settings;
    local.seed = derive_seed(settings.seed, {k});
    MinimizeResult r = minimize_in_ball(objective, BallConstraint{center, radii[k]}, local);
    running = std::min(running, r.loss);
    curve.points.push_back({radii[k], r.loss, running, std::move(r.theta), r.evaluations});
  }
  return curve;
}

std::optional<double> distance_to_minimum(const SweepCurve& curve, double threshold) {
  for (const auto& pt : curve.points) {
    if (pt.envelope_min_loss <= threshold) return pt.radius;
  }
  return std::nullopt;
}

double improvement_from_curve(const SweepCurve& curve, double loss_at_center, double radius) {
  const SweepPoint* hit = nullptr;
  for (const auto& pt : curve.points) {
    if (pt.radius <= radius) hit = &pt;
  }
  if (hit == nullptr) throw DomainError("improvement_from_curve: radius below the swept range");
  return std::max(0.0, loss_at_center - hit->envelope_min_loss);
}

}  // namespace qland
