#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "talab/quadrature.hpp"
#include "talab/report.hpp"
#include "talab/smooth.hpp"

namespace talab {

enum class FactorKind { gaussian, exp_power, custom };

/// One factor of a continuous product measure e^{-V} dx. Two curvature
/// roles are kept separate: curvature_kappa >= 0 bounds V'' from below
/// (governs the admissible range of the gradient bound), while
/// commutation_rate is the rate in |grad P_t f| <= e^{rate t} P_t |grad f|
/// (-1 for the Gaussian factor).
struct Factor {
  FactorKind kind = FactorKind::gaussian;
  int dim = 1;
  double alpha = 2.0;  // exp_power exponent
  std::function<double(double)> potential;  // custom normalized 1-d potential V
  double log_sobolev = 1.0;
  double curvature_kappa = 0.0;
  double commutation_rate = 0.0;

  static Factor gaussian_factor(int dim = 1);
  static Factor exp_power_factor(double alpha);
  static Factor custom_factor(std::function<double(double)> potential, double rho,
                              double curvature_kappa, double commutation_rate);

  double density1d(double x) const;       // 1-d marginal density
  double cdf1d(double x) const;           // 1-d distribution function
  double truncation_radius() const;       // density below ~1e-18 outside
};

class ProductMeasure {
 public:
  explicit ProductMeasure(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  int total_dim() const { return total_dim_; }
  int block_count() const { return static_cast<int>(factors_.size()); }
  int block_offset(int i) const { return offsets_[i]; }
  int block_dim(int i) const { return factors_[i].dim; }
  int block_of_dim(int d) const;           // factor index owning coordinate d
  const Factor& factor_of_dim(int d) const { return factors_[block_of_dim(d)]; }

  double rho() const;               // min factor log-Sobolev constant
  double curvature_kappa() const;   // max factor curvature bound
  double commutation_rate() const;  // max factor commutation rate
  bool all_gaussian() const;

  static ProductMeasure standard_gaussian(int n_factors);
  static ProductMeasure gaussian_block(int dim);  // one n-dimensional factor

 private:
  std::vector<Factor> factors_;
  std::vector<int> offsets_;
  int total_dim_;
};

// Tensor grid with `nodes` points per dimension (per-dimension override
// possible).
TensorGrid make_grid(const ProductMeasure& mu, int nodes);
TensorGrid make_grid(const ProductMeasure& mu, const std::vector<int>& nodes_per_dim);
// Like make_grid but one axis gets a dense composite rule with the given
// panel width, for integrands with a sharp feature along that axis.
TensorGrid make_grid_dense_axis(const ProductMeasure& mu, int nodes, int axis, double panel_width);

/// Reproducible i.i.d. sample of the measure; row i is sample i, generated
/// from its own counter-based stream so any parallel schedule produces the
/// same cloud.
struct SampleCloud {
  std::uint64_t seed = 0;
  Eigen::MatrixXd points;  // M x total_dim
};

SampleCloud make_cloud(const ProductMeasure& mu, int count, std::uint64_t seed);

double grid_integral(const TensorGrid& grid, const std::function<double(const Eigen::VectorXd&)>& f);
double variance_grid(const SmoothFunction& f, const TensorGrid& grid);
Estimate variance_mc(const std::function<double(const Eigen::VectorXd&)>& f,
                     const SampleCloud& cloud);

// P_t f(x) for the Ornstein-Uhlenbeck semigroup via the averaging
// representation; Gaussian factors only.
double ou_apply(const SmoothFunction& f, double t, const Eigen::VectorXd& x,
                const ProductMeasure& mu, int nodes = 20);

// Full gradient of P_t f at x by the y-moment (integration by parts)
// formula; requires t > 0 and Gaussian factors.
Eigen::VectorXd ou_gradient(const std::function<double(const Eigen::VectorXd&)>& f, double t,
                            const Eigen::VectorXd& x, const ProductMeasure& mu, int nodes = 32);

// (Int |grad_i f|^r dmu)^{1/r} over block i.
Estimate gradient_block_norm(const SmoothFunction& f, const ProductMeasure& mu, int block, double r,
                             const TensorGrid& grid);
Estimate gradient_block_norm(const SmoothFunction& f, const ProductMeasure& mu, int block, double r,
                             const SampleCloud& cloud);

// Var(f) <= C sum_i ||grad_i f||_2^2/(1 + log(||grad_i f||_2/||grad_i f||_1));
// default C = 4 (the hypercontractive constant with Gaussian commutation).
InequalityReport corollary3_report(const SmoothFunction& f, const ProductMeasure& mu,
                                   const TensorGrid& grid,
                                   std::optional<double> constant = std::nullopt);

// Summand b(1+b)/[1+log^+(1/b)]^{1/2} of the L1 variance bounds.
double l1_summand(double b);

// Var(f) <= C'(rho,kappa) sum_i l1_summand(||grad_i f||_1) for |f| <= 1;
// C' = c0 / (rho^{3/2} T), T = min(1, 1/2rho, 1/2kappa).
InequalityReport theorem6_report(const SmoothFunction& f, const ProductMeasure& mu,
                                 const TensorGrid& grid, double c0);
double theorem6_constant(double rho, double curvature_kappa, double c0);

// Interpolated family: q in [1,2], summand
// ||g||_q^q (1 + ||g||_1^2/||g||_q^q) / [1 + log^+(||g||_q^q/||g||_1^2)]^{q/2}.
double q_summand(double q, double norm_q, double norm_1);
InequalityReport interpolated_q_report(const SmoothFunction& f, const ProductMeasure& mu, double q,
                                       const TensorGrid& grid, double constant);

/// Axis-aligned set specifications. `empty` is the measure-zero set.
struct SetSpec {
  enum class Kind { halfspace, box, ball, predicate, empty };
  Kind kind = Kind::empty;
  int axis = 0;
  double threshold = 0.0;
  Eigen::VectorXd lo, hi;          // box
  Eigen::VectorXd center;          // ball
  double radius = 0.0;
  std::function<bool(const Eigen::VectorXd&)> member;  // predicate
  Eigen::VectorXd bound_lo, bound_hi;                  // predicate bounding box

  static SetSpec halfspace(int axis, double threshold);
  static SetSpec box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static SetSpec ball(Eigen::VectorXd center, double radius);
  static SetSpec empty_set();
  static SetSpec predicate(std::function<bool(const Eigen::VectorXd&)> member,
                           Eigen::VectorXd bound_lo, Eigen::VectorXd bound_hi);

  bool contains(const Eigen::VectorXd& x) const;
  // Euclidean distance to the set; 0 inside, +inf for the empty set.
  // Defined for halfspace/box/ball/empty.
  double distance(const Eigen::VectorXd& x) const;
  bool analytic() const { return kind != Kind::predicate; }
};

// Parses "halfspace axis=<i> threshold=<t>", "box lo=<v,..> hi=<v,..>",
// "ball center=<v,..> radius=<r>", "empty".
SetSpec parse_set_spec(const std::string& text);

double set_measure(const SetSpec& a, const ProductMeasure& mu);

struct GeometricInfluenceEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::string method;  // analytic | mollified | mc
};

struct MollifyOptions {
  double width0 = 0.2;   // widest mollification
  int levels = 4;        // widths width0 / 2^k
  int outer_nodes = 20;  // grid nodes per non-mollified dimension
  int mc_samples = 0;    // > 0 switches the outer integral to Monte Carlo
  std::uint64_t seed = 7;
};

// I_i(A) = lim ||d_i f_eps||_1 over a shrinking mollification of 1_A.
// Analytic sets take the exact fiber-boundary route; otherwise the
// mollified estimator extrapolates over the width schedule.
GeometricInfluenceEstimate geometric_influence(const SetSpec& a, int i, const ProductMeasure& mu,
                                               const MollifyOptions& opts = {});

struct InfluenceBoundReport {
  std::vector<double> influences;
  double max_influence = 0.0;
  double bound_strong = 0.0;  // a(1-a) sqrt(log(N/a(1-a))) / (C N)
  double bound_weak = 0.0;    // a(1-a) sqrt(log N) / (C N)
  double minimal_c = 0.0;     // smallest C making the strong bound hold
  bool pass = false;
};

InfluenceBoundReport corollary7_check(const SetSpec& a, const ProductMeasure& mu, double c,
                                      const MollifyOptions& opts = {});

// phi(Phi^{-1}(a)); symmetric about 1/2, zero at the endpoints.
double isoperimetric_profile(double a);

// liminf (mu(A_eps) - mu(A))/eps via a decreasing width schedule and
// one-step Richardson extrapolation; analytic mu(A_eps) for half-spaces,
// distance-function Monte Carlo for boxes and balls.
Estimate minkowski_content(const SetSpec& a, const ProductMeasure& mu,
                           const std::vector<double>& widths, int mc_samples = 2'000'000,
                           std::uint64_t seed = 11);

struct PointwiseReport {
  double max_violation = 0.0;
  bool pass = false;
};

// |grad_i P_t f| <= e^{kappa t} P_t |grad_i f| at the given points, per block.
PointwiseReport gradient_commutation_check(const SmoothFunction& f, double t,
                                           const ProductMeasure& mu, double kappa,
                                           const std::vector<Eigen::VectorXd>& points,
                                           int nodes = 32, double slack = 1e-8);

struct GradientBoundReport {
  double sup_scaled = 0.0;  // max over points of |grad P_t f| sqrt(t)
  bool pass = false;
};

// sup_x |grad P_t f(x)| sqrt(t) <= 1 for |f| <= 1 and t in the curvature
// window (0, min(1, 1/2kappa)].
GradientBoundReport gradient_bound_check(const SmoothFunction& f, double t,
                                         const ProductMeasure& mu,
                                         const std::vector<Eigen::VectorXd>& points,
                                         int nodes = 64);

struct ExpPowerReport {
  double alpha = 0.0;
  double beta = 0.0;        // 2(1 - 1/alpha) in (0,1); 1 in the fallback
  bool fallback_beta1 = false;
  double max_influence = 0.0;
  double bound = 0.0;       // a(1-a) (log N)^{beta/2} / (C N)
  double constant_used = 0.0;
  bool pass = false;
};

// Influence lower bound for products of exp-power factors; alpha in (1,2)
// uses beta = 2(1-1/alpha), alpha >= 2 falls back to beta = 1.
ExpPowerReport exp_power_influence_report(const SetSpec& a, double alpha, const ProductMeasure& mu,
                                          double c);

}  // namespace talab
