#include "talab/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace talab {

namespace {

// Golub-Welsch from a symmetric tridiagonal Jacobi matrix.
Grid1D golub_welsch(const Eigen::VectorXd& off_diagonal, double total_mass) {
  int n = static_cast<int>(off_diagonal.size()) + 1;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    j(k, k + 1) = off_diagonal[k];
    j(k + 1, k) = off_diagonal[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  Grid1D g;
  g.nodes = es.eigenvalues();
  g.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    double v0 = es.eigenvectors()(0, k);
    g.weights[k] = total_mass * v0 * v0;
  }
  return g;
}

}  // namespace

Grid1D gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
  // Physicists' recurrence (weight e^{-x^2}), then rescale to the standard
  // normal: x -> sqrt(2) x, total mass normalized to 1.
  Eigen::VectorXd off(n - 1);
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * k);
  Grid1D g = golub_welsch(off, 1.0);
  g.nodes *= std::sqrt(2.0);
  return g;
}

Grid1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  Eigen::VectorXd off(n - 1);
  for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  return golub_welsch(off, 2.0);
}

Grid1D density_grid(const std::function<double(double)>& density, double lo, double hi, int panels,
                    int nodes_per_panel) {
  if (!(hi > lo)) throw std::invalid_argument("density_grid: empty interval");
  if (panels < 1) throw std::invalid_argument("density_grid: need at least one panel");
  Grid1D base = gauss_legendre(nodes_per_panel);
  Grid1D g;
  g.nodes.resize(static_cast<Eigen::Index>(panels) * nodes_per_panel);
  g.weights.resize(g.nodes.size());
  double h = (hi - lo) / panels;
  Eigen::Index at = 0;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * h;
    for (int k = 0; k < nodes_per_panel; ++k, ++at) {
      double x = a + 0.5 * h * (base.nodes[k] + 1.0);
      g.nodes[at] = x;
      g.weights[at] = 0.5 * h * base.weights[k] * density(x);
    }
  }
  return g;
}

TensorGrid::TensorGrid(std::vector<Grid1D> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("TensorGrid: no dimensions");
  count_ = 1;
  for (const auto& d : dims_) {
    count_ *= static_cast<std::size_t>(d.nodes.size());
    if (count_ > 20'000'000) throw std::invalid_argument("TensorGrid: node count too large");
  }
}

void TensorGrid::for_each(const std::function<void(const Eigen::VectorXd&, double)>& fn) const {
  int d = dim();
  std::vector<int> idx(d, 0);
  Eigen::VectorXd x(d);
  for (int k = 0; k < d; ++k) x[k] = dims_[k].nodes[0];
  for (;;) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) w *= dims_[k].weights[idx[k]];
    fn(x, w);
    int k = 0;
    for (; k < d; ++k) {
      if (++idx[k] < dims_[k].nodes.size()) {
        x[k] = dims_[k].nodes[idx[k]];
        break;
      }
      idx[k] = 0;
      x[k] = dims_[k].nodes[0];
    }
    if (k == d) break;
  }
}

double TensorGrid::integrate(const std::function<double(const Eigen::VectorXd&)>& f) const {
  double s = 0.0;
  for_each([&](const Eigen::VectorXd& x, double w) { s += w * f(x); });
  return s;
}

}  // namespace talab
