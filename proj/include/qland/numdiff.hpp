#pragma once

#include <Eigen/Core>

namespace qland {

/// Central finite-difference gradient, (f(x + h e_i) - f(x - h e_i)) / 2h.
template <class F>
Eigen::VectorXd central_difference_gradient(F&& f, const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x(i);
    probe(i) = xi + h;
    const double up = f(probe);
    probe(i) = xi - h;
    const double down = f(probe);
    probe(i) = xi;
    grad(i) = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace qland
