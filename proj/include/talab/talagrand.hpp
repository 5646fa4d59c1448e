#pragma once

#include <Eigen/Core>
#include <string>

#include "talab/cayley.hpp"
#include "talab/chain.hpp"
#include "talab/report.hpp"

namespace talab {

// C(rho, kappa) = 4 e^{(1 + kappa/rho)^+} / rho.
double theorem1_constant(double rho, double kappa);

// Var(f) <= C(rho,kappa) sum_i ||Gamma_i f||_2^2 / (1 + log(||Gamma_i f||_2
// / ||Gamma_i f||_1)); zero directions contribute 0.
InequalityReport theorem1_report(const FiniteChain& c, const DirichletDecomposition& d, double rho,
                                 const Eigen::VectorXd& f, const std::string& model = "");

// Summand of the Talagrand right side for one direction with L2 norm n2
// and L1 norm n1; n2 = 0 contributes 0, n1 = 0 with n2 > 0 is a model error.
double talagrand_summand(double n2, double n1);

// Holder interpolation exponent: 1/v = theta + (1-theta)/2.
double interpolation_theta(double v);

// Int_1^2 ||g||_v^2 dv over the weighted finite space, adaptive to 1e-8
// relative tolerance.
double interpolation_integral(const Eigen::VectorXd& g, const Eigen::VectorXd& mu);

// Var(f) <= (2 e^{(1+kappa/rho)^+} / rho) sum_i Int_1^2 ||Gamma_i f||_v^2 dv.
InequalityReport interpolation_variance_report(const FiniteChain& c,
                                               const DirichletDecomposition& d, double rho,
                                               const Eigen::VectorXd& f,
                                               const std::string& model = "");

double orlicz_norm(const FiniteChain& c, const Eigen::VectorXd& g);

// Var(f) <= (2 C_phi e^{(1+kappa/rho)^+} / rho) sum_i ||Gamma_i f||_phi^2.
InequalityReport orlicz_variance_report(const FiniteChain& c, const DirichletDecomposition& d,
                                        double rho, const Eigen::VectorXd& f, double c_phi,
                                        const std::string& model = "");

// Var(f) <= (2e / rho |S|) sum_s ||D_s f||_2^2 / (1 + log(||D_s f||_2 /
// ||D_s f||_1)). Requires a conjugacy-closed generator set.
InequalityReport corollary2_report(const CayleyChain& g, const Eigen::VectorXd& f, double rho);

// Guaranteed max-influence lower bound (1/C) a(1-a) rho log(1 + 1/(C rho a(1-a))).
double influence_bound_extract(double a, double rho, double c);

}  // namespace talab
