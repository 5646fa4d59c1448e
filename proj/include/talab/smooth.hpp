#pragma once

#include <Eigen/Core>
#include <functional>

#include "talab/polynomial.hpp"

namespace talab {

/// A scalar function on R^d with an analytic gradient (and optionally a
/// Hessian, needed only by the sphere Laplacian identity). bounded_by_one
/// marks |f| <= 1 for the L1-type bounds that require it.
struct SmoothFunction {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;  // optional
  bool bounded_by_one = false;

  static SmoothFunction from_polynomial(const Polynomial& p);
  // tanh(scale * (p(x))): bounded by one, smooth.
  static SmoothFunction tanh_of(const Polynomial& p, double scale = 1.0);
  // erf((threshold - x_axis)/width): a mollified half-space indicator
  // rescaled to [-1,1].
  static SmoothFunction erf_ramp(int dim, int axis, double threshold, double width);
};

// Largest relative deviation between the analytic gradient and central
// finite differences (step 1e-5) over the given points.
double max_gradient_fd_error(const SmoothFunction& f, const std::vector<Eigen::VectorXd>& points);

}  // namespace talab
