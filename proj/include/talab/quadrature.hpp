#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace talab {

/// One-dimensional nodes and weights; weights carry the probability
/// density, so they sum to 1 for a normalized factor.
struct Grid1D {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Gauss-Hermite rule for the standard normal weight; exact for
// polynomials up to degree 2n-1.
Grid1D gauss_hermite(int n);

// Gauss-Legendre rule on [-1,1] (weights sum to 2).
Grid1D gauss_legendre(int n);

// Composite Gauss-Legendre rule against a density on [lo,hi].
Grid1D density_grid(const std::function<double(double)>& density, double lo, double hi,
                    int panels, int nodes_per_panel = 16);

/// Tensor product of per-dimension rules.
class TensorGrid {
 public:
  explicit TensorGrid(std::vector<Grid1D> dims);

  int dim() const { return static_cast<int>(dims_.size()); }
  std::size_t point_count() const { return count_; }

  // Calls fn(x, w) for every tensor node.
  void for_each(const std::function<void(const Eigen::VectorXd&, double)>& fn) const;

  double integrate(const std::function<double(const Eigen::VectorXd&)>& f) const;

 private:
  std::vector<Grid1D> dims_;
  std::size_t count_;
};

}  // namespace talab
