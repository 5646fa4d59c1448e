#include "talab/talagrand.hpp"

#include <cmath>
#include <stdexcept>

#include "talab/cube.hpp"
#include "talab/numeric.hpp"

namespace talab {

double theorem1_constant(double rho, double kappa) {
  if (!(rho > 0.0)) throw std::domain_error("theorem1_constant: rho must be positive");
  return 4.0 * std::exp(std::max(0.0, 1.0 + kappa / rho)) / rho;
}

double talagrand_summand(double n2, double n1) {
  if (n2 == 0.0) return 0.0;
  if (n1 == 0.0) throw std::runtime_error("talagrand_summand: zero L1 norm with positive L2 norm");
  return n2 * n2 / (1.0 + std::log(n2 / n1));
}

InequalityReport theorem1_report(const FiniteChain& c, const DirichletDecomposition& d, double rho,
                                 const Eigen::VectorXd& f, const std::string& model) {
  double constant = theorem1_constant(rho, d.kappa);
  double sum = 0.0;
  for (const auto& gamma : d.directions) {
    Eigen::VectorXd g = gamma(f);
    sum += talagrand_summand(lp_norm(c, g, 2.0), lp_norm(c, g, 1.0));
  }
  return make_report("theorem1", model.empty() ? "chain n=" + std::to_string(c.size()) : model,
                     variance(c, f), constant * sum, constant);
}

double interpolation_theta(double v) {
  if (!(v >= 1.0 && v <= 2.0)) throw std::domain_error("interpolation_theta: v outside [1,2]");
  return 2.0 / v - 1.0;
}

double interpolation_integral(const Eigen::VectorXd& g, const Eigen::VectorXd& mu) {
  double max_abs = g.cwiseAbs().maxCoeff();
  if (max_abs == 0.0) return 0.0;
  auto norm_sq = [&](double v) {
    double s = 0.0;
    for (int x = 0; x < g.size(); ++x) s += mu[x] * std::pow(std::abs(g[x]), v);
    return std::pow(s, 2.0 / v);
  };
  return integrate_adaptive(norm_sq, 1.0, 2.0, 1e-9);
}

InequalityReport interpolation_variance_report(const FiniteChain& c,
                                               const DirichletDecomposition& d, double rho,
                                               const Eigen::VectorXd& f, const std::string& model) {
  if (!(rho > 0.0)) throw std::domain_error("interpolation_variance_report: rho must be positive");
  double constant = 2.0 * std::exp(std::max(0.0, 1.0 + d.kappa / rho)) / rho;
  double sum = 0.0;
  for (const auto& gamma : d.directions) sum += interpolation_integral(gamma(f), c.measure());
  return make_report("interpolation-variance",
                     model.empty() ? "chain n=" + std::to_string(c.size()) : model, variance(c, f),
                     constant * sum, constant);
}

double orlicz_norm(const FiniteChain& c, const Eigen::VectorXd& g) {
  double max_abs = g.cwiseAbs().maxCoeff();
  if (max_abs == 0.0) return 0.0;
  auto mean_phi = [&](double level) {
    double s = 0.0;
    for (int x = 0; x < g.size(); ++x) s += c.measure()[x] * orlicz_phi(std::abs(g[x]) / level);
    return s - 1.0;
  };
  double hi = max_abs;
  while (mean_phi(hi) > 0.0) hi *= 2.0;
  double lo = hi;
  while (mean_phi(lo) < 0.0) lo *= 0.5;
  return bisect(mean_phi, lo, hi, 1e-11);
}

InequalityReport orlicz_variance_report(const FiniteChain& c, const DirichletDecomposition& d,
                                        double rho, const Eigen::VectorXd& f, double c_phi,
                                        const std::string& model) {
  if (!(c_phi > 0.0)) throw std::domain_error("orlicz_variance_report: C_phi must be positive");
  if (!(rho > 0.0)) throw std::domain_error("orlicz_variance_report: rho must be positive");
  double constant = 2.0 * c_phi * std::exp(std::max(0.0, 1.0 + d.kappa / rho)) / rho;
  double sum = 0.0;
  for (const auto& gamma : d.directions) {
    double n = orlicz_norm(c, gamma(f));
    sum += n * n;
  }
  return make_report("orlicz-variance",
                     model.empty() ? "chain n=" + std::to_string(c.size()) : model, variance(c, f),
                     constant * sum, constant);
}

InequalityReport corollary2_report(const CayleyChain& g, const Eigen::VectorXd& f, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("corollary2_report: rho must be positive");
  if (!conjugacy_closed(g.group, g.gens))
    throw std::invalid_argument("corollary2_report: generator set is not conjugacy-closed");
  double constant = 2.0 * std::exp(1.0) / (rho * static_cast<double>(g.gens.elements.size()));
  double sum = 0.0;
  for (int s : g.gens.elements) {
    Eigen::VectorXd ds = edge_derivative(g, s, f);
    sum += talagrand_summand(lp_norm(g.chain, ds, 2.0), lp_norm(g.chain, ds, 1.0));
  }
  return make_report("corollary2", "cayley |G|=" + std::to_string(g.group.order()),
                     variance(g.chain, f), constant * sum, constant);
}

double influence_bound_extract(double a, double rho, double c) {
  if (!(a > 0.0 && a < 1.0)) throw std::domain_error("influence_bound_extract: a outside (0,1)");
  if (!(rho > 0.0)) throw std::domain_error("influence_bound_extract: rho must be positive");
  if (!(c >= 1.0)) throw std::domain_error("influence_bound_extract: C must be >= 1");
  double aa = a * (1.0 - a);
  return aa * rho / c * std::log1p(1.0 / (c * rho * aa));
}

}  // namespace talab
