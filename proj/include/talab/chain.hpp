#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "talab/report.hpp"

namespace talab {

class Rng;

/// mu-orthonormal eigendecomposition of the generator L = K - Id of a
/// reversible chain. Eigenvalues ascend; the last one is 0 with constant
/// eigenvector, all others are <= 0.
struct GeneratorSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd basis;  // columns orthonormal in the mu-inner product
};

/// A finite reversible ergodic Markov chain. `kernel` has unit row sums
/// and satisfies detailed balance with `measure`; chains built from a
/// product generator may carry negative diagonal kernel entries (the
/// generator kernel + Id), which leaves every semigroup computation
/// intact since P_t = e^{tL}.
class FiniteChain {
 public:
  static constexpr int kMaxStates = 4096;

  const Eigen::MatrixXd& kernel() const { return kernel_; }
  const Eigen::VectorXd& measure() const { return measure_; }
  const std::vector<std::string>& states() const { return states_; }
  int size() const { return static_cast<int>(measure_.size()); }
  const GeneratorSpectrum& spectrum() const { return spectrum_; }

  // Applies L = K - Id.
  Eigen::VectorXd generator_apply(const Eigen::VectorXd& f) const;

  friend FiniteChain build_chain(const Eigen::MatrixXd&, std::optional<Eigen::VectorXd>,
                                 std::vector<std::string>);
  friend FiniteChain chain_from_generator(const Eigen::MatrixXd&, const Eigen::VectorXd&,
                                          std::vector<std::string>);

 private:
  FiniteChain() = default;
  void validate_and_decompose(bool require_nonnegative_kernel);

  Eigen::MatrixXd kernel_;
  Eigen::VectorXd measure_;
  std::vector<std::string> states_;
  GeneratorSpectrum spectrum_;
};

/// Directions Gamma_i decomposing the Dirichlet form, together with the
/// commutation constant kappa of Gamma_i(P_t f) <= e^{kappa t} P_t Gamma_i(f).
struct DirichletDecomposition {
  std::vector<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>> directions;
  double kappa = 0.0;
};

// If mu is absent the stationary vector is computed from the kernel.
FiniteChain build_chain(const Eigen::MatrixXd& kernel,
                        std::optional<Eigen::VectorXd> mu = std::nullopt,
                        std::vector<std::string> labels = {});

// Internal constructor for product chains: takes the generator L (zero row
// sums, nonnegative off-diagonal) and stores K = L + Id.
FiniteChain chain_from_generator(const Eigen::MatrixXd& generator, const Eigen::VectorXd& mu,
                                 std::vector<std::string> labels = {});

// The kernel averaging against mu: K(x,y) = mu(y).
FiniteChain mean_chain(const Eigen::VectorXd& mu, std::vector<std::string> labels = {});
FiniteChain two_point_chain(double p);

double mu_integral(const FiniteChain& c, const Eigen::VectorXd& f);
double variance(const FiniteChain& c, const Eigen::VectorXd& f);
double entropy(const FiniteChain& c, const Eigen::VectorXd& f);
double lp_norm(const FiniteChain& c, const Eigen::VectorXd& f, double r);

// E(f,g) = Int f(-Lg) dmu; symmetric, nonnegative on the diagonal.
double dirichlet_form(const FiniteChain& c, const Eigen::VectorXd& f, const Eigen::VectorXd& g);

// P_t f through the spectral decomposition; exact contraction for t >= 0.
Eigen::VectorXd semigroup_apply(const FiniteChain& c, const Eigen::VectorXd& f, double t);

// Smallest nonzero eigenvalue of -L.
double spectral_gap(const FiniteChain& c);

enum class LogSobMode { exact_two_point, numeric };

struct LogSobOptions {
  int restarts = 32;
  int max_iterations = 4000;
  double step_tolerance = 1e-8;
  double min_variance = 1e-6;
  std::uint64_t seed = 20120515;
};

// Best constant rho in rho Ent(f^2) <= 2 E(f,f). Exact mode applies the
// closed two-point form (scaled by the chain rate); numeric mode runs
// projected gradient descent on 2E/Ent with multi-start.
double logsob_constant(const FiniteChain& c, LogSobMode mode, const LogSobOptions& opts = {});

// ||P_t f||_2 <= ||f||_{1+e^{-2 rho t}}.
InequalityReport hypercontractivity_check(const FiniteChain& c, double rho, double t,
                                          const Eigen::VectorXd& f);

// Var(f) <= (1 - e^{-lambda t})^{-1} (||f||_2^2 - ||P_t f||_2^2).
InequalityReport variance_decay_check(const FiniteChain& c, double lambda, double t,
                                      const Eigen::VectorXd& f);

struct ProductChain {
  FiniteChain chain;
  DirichletDecomposition decomposition;  // Gamma_i(f) = |L_i f|, kappa = 0
  std::vector<int> factor_sizes;
};

// Kronecker-sum product of projection-type factors (K_i f = Int f dmu_i).
// Factor 0 is the fastest-varying index. Rejects factors whose generator
// is not a projection, since the |L_i f| decomposition identity requires it.
ProductChain product_chain(const std::vector<FiniteChain>& factors);

// Lifts a cube function index space: product of N two-point factors with
// state 0 = -1 and state 1 = +1, matching the cube's binary-counter order.
ProductChain cube_product_chain(int n, double p);

struct CommutationReport {
  double max_violation;  // max over i,x of Gamma_i(P_t f) - e^{kappa t} P_t Gamma_i(f)
  bool pass;
};

CommutationReport commutation_check(const FiniteChain& c, const DirichletDecomposition& d,
                                    const Eigen::VectorXd& f, double t, double slack = 1e-10);

// Checks the quadratic identity sum_i Int Gamma_i(f)^2 dmu = E(f,f) on a
// spanning test set plus random combinations, and the commutation bound on
// sampled functions and times.
void validate_decomposition(const FiniteChain& c, const DirichletDecomposition& d,
                            double tol = 1e-10);

Eigen::VectorXd random_chain_function(const FiniteChain& c, Rng& rng, double lo = -1.0,
                                      double hi = 1.0);

// Text import: "n=<int>", n rows of n decimals, optional "mu:" line.
FiniteChain read_chain(std::istream& is);
// CSV export "index,eigenvalue" of the generator spectrum.
void write_spectrum_csv(std::ostream& os, const FiniteChain& c);

}  // namespace talab
