#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "talab/gauss.hpp"
#include "talab/report.hpp"
#include "talab/smooth.hpp"

namespace talab {

/// Uniform surface measure on S^{n-1}, sampled in antithetic pairs.
struct SphereModel {
  int n = 3;
  std::uint64_t seed = 1;
  int samples = 100'000;  // must be even
};

// samples x n matrix of unit vectors; row M/2 + k = -row k.
Eigen::MatrixXd sphere_points(const SphereModel& model);

// D_ij f(x) = x_i d_j f(x) - x_j d_i f(x); requires |x| = 1 within 1e-12.
double dij_derivative(const SmoothFunction& f, int i, int j, const Eigen::VectorXd& x);

struct SphereEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

SphereEstimate sphere_variance(const SmoothFunction& f, const SphereModel& model);
// ||D_ij f||_r over the sphere.
SphereEstimate sphere_pair_norm(const SmoothFunction& f, const SphereModel& model, int i, int j,
                                double r);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double std_error = 0.0;
  bool pass = false;  // agreement within 3 combined standard errors
};

// E(f,f) = Int f(-Lap_S f) dmu = sum_{i<j} Int (D_ij f)^2 dmu. Needs the
// Hessian to evaluate the sphere Laplacian of the ambient extension.
IdentityCheck sphere_dirichlet_identity_check(const SmoothFunction& f, const SphereModel& model);

/// A report whose verdict allows 3 Monte Carlo standard errors of slack.
struct McInequalityReport {
  InequalityReport report;
  double lhs_se = 0.0;
  double rhs_se = 0.0;
};

// Var(f) <= (4e/n) sum_{i,j} ||D_ij f||_2^2/(1+log(||D_ij f||_2/||D_ij f||_1)),
// the (i,j) sum running over ordered pairs (twice the i<j sum).
McInequalityReport corollary4_report(const SmoothFunction& f, const SphereModel& model);

// L1 version with constant C/sqrt(n) for |f| <= 1.
McInequalityReport theorem8_report(const SmoothFunction& f, const SphereModel& model, double c);

/// Weights c_i > 0 and orthonormal bases of subspaces E_i with
/// sum c_i Q_{E_i} = Id.
struct SubspaceDecomposition {
  struct Term {
    double weight;
    Eigen::MatrixXd basis;  // n x dim(E_i), orthonormal columns
  };
  std::vector<Term> terms;
  int ambient_dim = 0;
};

// Validates orthonormal bases, the trace pre-filter sum c_i dim E_i = n,
// and the identity resolution to 1e-10 in operator norm.
SubspaceDecomposition validate_decomposition(const std::vector<SubspaceDecomposition::Term>& terms,
                                             int n);

SubspaceDecomposition coordinate_decomposition(int n);
// c_i = 1/(n-1), E_i = e_i-perp.
SubspaceDecomposition loomis_whitney(int n);

// |Q_{E_i} grad f| at x.
double projected_gradient_norm(const SubspaceDecomposition::Term& term, const SmoothFunction& f,
                               const Eigen::VectorXd& x);

// Var(f) <= 4 sum c_i ||Q_i grad f||_2^2/(1+log(...)) for the standard
// Gaussian measure on R^n.
InequalityReport corollary5_report(const SmoothFunction& f, const SubspaceDecomposition& decomp,
                                   const TensorGrid& grid);

// L1 version with a calibrated constant, |f| <= 1.
InequalityReport proposition9_report(const SmoothFunction& f, const SubspaceDecomposition& decomp,
                                     const TensorGrid& grid, double c);

// Q_{E_i}(grad P_t f) = e^{-t} P_t(Q_{E_i} grad f) within quadrature
// tolerance at the given points.
PointwiseReport projection_commutation_check(const SmoothFunction& f,
                                             const SubspaceDecomposition& decomp, double t,
                                             const std::vector<Eigen::VectorXd>& points,
                                             int nodes = 24, double tol = 1e-8);

struct SectionBoundaryReport {
  double averaged_boundary = 0.0;  // ||Q_{e_i-perp} grad 1_A||_1, analytic
  double bound = 0.0;              // (1/C) a(1-a) sqrt(log 1/(a(1-a)))
  bool pass = false;
  bool halfspace_section_isoperimetric = false;  // sections achieve phi(Phi^{-1}(a))
};

// Averaged boundary measure of hyperplane sections along coordinate i for
// an analytic set under the standard Gaussian measure.
SectionBoundaryReport section_boundary_check(const SetSpec& a, int i, const ProductMeasure& mu,
                                             double c);

// Config format: one "term c=<real> basis=<row-major reals>" per line.
SubspaceDecomposition parse_decomposition(const std::vector<std::string>& term_lines, int n);

}  // namespace talab
