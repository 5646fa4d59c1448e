#pragma once

#include <Eigen/Core>
#include <map>
#include <vector>

namespace talab {

class Rng;

/// Sparse multivariate polynomial keyed by exponent multi-index.
class Polynomial {
 public:
  explicit Polynomial(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  int degree() const;

  static Polynomial constant(int dim, double c);
  static Polynomial variable(int dim, int i);

  Polynomial& add_term(const std::vector<int>& exponents, double coeff);

  double operator()(const Eigen::VectorXd& x) const;
  Polynomial partial(int i) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  const std::map<std::vector<int>, double>& terms() const { return terms_; }

 private:
  int dim_;
  std::map<std::vector<int>, double> terms_;
};

// Dense random polynomial of total degree <= max_degree with coefficients
// uniform in [-1,1].
Polynomial random_polynomial(int dim, int max_degree, Rng& rng);

// Probabilists' Hermite polynomial h_k (h_2 = x^2 - 1).
double hermite_h(int k, double x);

}  // namespace talab
