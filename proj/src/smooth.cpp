#include "talab/smooth.hpp"

#include <cmath>

namespace talab {

SmoothFunction SmoothFunction::from_polynomial(const Polynomial& p) {
  SmoothFunction f;
  f.value = [p](const Eigen::VectorXd& x) { return p(x); };
  f.gradient = [p](const Eigen::VectorXd& x) { return p.gradient(x); };
  f.hessian = [p](const Eigen::VectorXd& x) { return p.hessian(x); };
  return f;
}

SmoothFunction SmoothFunction::tanh_of(const Polynomial& p, double scale) {
  SmoothFunction f;
  f.value = [p, scale](const Eigen::VectorXd& x) { return std::tanh(scale * p(x)); };
  f.gradient = [p, scale](const Eigen::VectorXd& x) {
    double t = std::tanh(scale * p(x));
    return ((1.0 - t * t) * scale * p.gradient(x)).eval();
  };
  f.bounded_by_one = true;
  return f;
}

SmoothFunction SmoothFunction::erf_ramp(int dim, int axis, double threshold, double width) {
  SmoothFunction f;
  f.value = [axis, threshold, width](const Eigen::VectorXd& x) {
    return std::erf((threshold - x[axis]) / width);
  };
  f.gradient = [dim, axis, threshold, width](const Eigen::VectorXd& x) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    double u = (threshold - x[axis]) / width;
    g[axis] = -2.0 / std::sqrt(M_PI) * std::exp(-u * u) / width;
    return g;
  };
  f.bounded_by_one = true;
  return f;
}

double max_gradient_fd_error(const SmoothFunction& f, const std::vector<Eigen::VectorXd>& points) {
  const double h = 1e-5;
  double worst = 0.0;
  for (const auto& x : points) {
    Eigen::VectorXd g = f.gradient(x);
    for (int i = 0; i < x.size(); ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      double fd = (f.value(xp) - f.value(xm)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
    }
  }
  return worst;
}

}  // namespace talab
