#include "talab/polynomial.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "talab/rng.hpp"

namespace talab {

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_)
    if (c != 0.0) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

Polynomial Polynomial::constant(int dim, double c) {
  Polynomial p(dim);
  p.add_term(std::vector<int>(dim, 0), c);
  return p;
}

Polynomial Polynomial::variable(int dim, int i) {
  if (i < 0 || i >= dim) throw std::out_of_range("Polynomial::variable: index out of range");
  Polynomial p(dim);
  std::vector<int> e(dim, 0);
  e[i] = 1;
  p.add_term(e, 1.0);
  return p;
}

Polynomial& Polynomial::add_term(const std::vector<int>& exponents, double coeff) {
  if (static_cast<int>(exponents.size()) != dim_)
    throw std::invalid_argument("Polynomial: exponent arity mismatch");
  terms_[exponents] += coeff;
  return *this;
}

double Polynomial::operator()(const Eigen::VectorXd& x) const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    s += t;
  }
  return s;
}

Polynomial Polynomial::partial(int i) const {
  if (i < 0 || i >= dim_) throw std::out_of_range("Polynomial::partial: index out of range");
  Polynomial p(dim_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    std::vector<int> d = e;
    d[i] -= 1;
    p.add_term(d, c * e[i]);
  }
  return p;
}

Eigen::VectorXd Polynomial::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(dim_);
  for (int i = 0; i < dim_; ++i) g[i] = partial(i)(x);
  return g;
}

Eigen::MatrixXd Polynomial::hessian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd h(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    Polynomial pi = partial(i);
    for (int j = 0; j < dim_; ++j) h(i, j) = pi.partial(j)(x);
  }
  return h;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial p = *this;
  for (const auto& [e, c] : o.terms_) p.add_term(e, c);
  return p;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial p(dim_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      std::vector<int> e(dim_);
      for (int i = 0; i < dim_; ++i) e[i] = e1[i] + e2[i];
      p.add_term(e, c1 * c2);
    }
  return p;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial p = *this;
  for (auto& [e, c] : p.terms_) c *= s;
  return p;
}

namespace {

void enumerate_exponents(int dim, int budget, std::vector<int>& cur,
                         std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dim) {
    out.push_back(cur);
    return;
  }
  for (int e = 0; e <= budget; ++e) {
    cur.push_back(e);
    enumerate_exponents(dim, budget - e, cur, out);
    cur.pop_back();
  }
}

}  // namespace

Polynomial random_polynomial(int dim, int max_degree, Rng& rng) {
  std::vector<std::vector<int>> exps;
  std::vector<int> cur;
  enumerate_exponents(dim, max_degree, cur, exps);
  Polynomial p(dim);
  for (const auto& e : exps) p.add_term(e, rng.uniform(-1.0, 1.0));
  return p;
}

double hermite_h(int k, double x) {
  if (k < 0) throw std::invalid_argument("hermite_h: negative degree");
  double prev = 1.0;
  if (k == 0) return prev;
  double cur = x;
  for (int j = 2; j <= k; ++j) {
    double next = x * cur - (j - 1) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace talab
