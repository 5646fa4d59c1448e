#include "talab/chain.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "talab/cube.hpp"
#include "talab/numeric.hpp"
#include "talab/rng.hpp"

namespace talab {

namespace {

constexpr double kSupportTol = 1e-14;

bool support_connected(const Eigen::MatrixXd& k) {
  int n = static_cast<int>(k.rows());
  std::vector<bool> seen(n, false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  int count = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y = 0; y < n; ++y) {
      if (y == x || seen[y]) continue;
      if (std::abs(k(x, y)) > kSupportTol || std::abs(k(y, x)) > kSupportTol) {
        seen[y] = true;
        ++count;
        q.push(y);
      }
    }
  }
  return count == n;
}

Eigen::VectorXd stationary_measure(const Eigen::MatrixXd& k) {
  int n = static_cast<int>(k.rows());
  Eigen::MatrixXd a = k.transpose() - Eigen::MatrixXd::Identity(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  if (lu.dimensionOfKernel() != 1)
    throw std::invalid_argument("build_chain: stationary measure is not unique (chain not ergodic)");
  Eigen::VectorXd mu = lu.kernel().col(0);
  double s = mu.sum();
  if (s == 0.0) throw std::invalid_argument("build_chain: degenerate stationary vector");
  mu /= s;
  for (int i = 0; i < n; ++i)
    if (!(mu[i] > 0.0))
      throw std::invalid_argument("build_chain: stationary measure has nonpositive mass");
  return mu;
}

}  // namespace

void FiniteChain::validate_and_decompose(bool require_nonnegative_kernel) {
  int n = size();
  if (n < 2) throw std::invalid_argument("chain: need at least two states");
  if (n > kMaxStates) throw std::invalid_argument("chain: state count above the dense cap");
  if (kernel_.rows() != n || kernel_.cols() != n)
    throw std::invalid_argument("chain: kernel shape mismatch");
  if (states_.empty()) {
    states_.resize(n);
    for (int i = 0; i < n; ++i) states_[i] = std::to_string(i);
  }
  for (int x = 0; x < n; ++x) {
    if (std::abs(kernel_.row(x).sum() - 1.0) > 1e-12)
      throw std::invalid_argument("chain: kernel row " + std::to_string(x) + " does not sum to 1");
    for (int y = 0; y < n; ++y)
      if (require_nonnegative_kernel && kernel_(x, y) < 0.0)
        throw std::invalid_argument("chain: negative kernel entry");
  }
  for (int y = 0; y < n; ++y) {
    double s = 0.0;
    for (int x = 0; x < n; ++x) s += kernel_(x, y) * measure_[x];
    if (std::abs(s - measure_[y]) > 1e-10)
      throw std::invalid_argument("chain: measure is not invariant");
  }
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (std::abs(measure_[x] * kernel_(x, y) - measure_[y] * kernel_(y, x)) > 1e-10)
        throw std::invalid_argument("chain: detailed balance fails (not reversible)");
  if (!support_connected(kernel_))
    throw std::invalid_argument("chain: kernel support graph is disconnected (not ergodic)");

  // Symmetrize in the mu-weighted inner product and eigensolve; exact
  // reversibility makes D^{1/2} K D^{-1/2} symmetric.
  Eigen::VectorXd sq = measure_.cwiseSqrt();
  Eigen::MatrixXd s(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) s(x, y) = sq[x] * kernel_(x, y) / sq[y];
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) throw std::runtime_error("chain: eigendecomposition failed");
  spectrum_.eigenvalues = es.eigenvalues().array() - 1.0;
  spectrum_.basis = es.eigenvectors();
  for (int x = 0; x < n; ++x) spectrum_.basis.row(x) /= sq[x];
  int top = n - 1;
  if (std::abs(spectrum_.eigenvalues[top]) > 1e-9)
    throw std::runtime_error("chain: top generator eigenvalue is not 0");
  spectrum_.eigenvalues[top] = 0.0;
  for (int a = 0; a < top; ++a)
    if (spectrum_.eigenvalues[a] > 0.0) spectrum_.eigenvalues[a] = 0.0;
}

Eigen::VectorXd FiniteChain::generator_apply(const Eigen::VectorXd& f) const {
  return kernel_ * f - f;
}

FiniteChain build_chain(const Eigen::MatrixXd& kernel, std::optional<Eigen::VectorXd> mu,
                        std::vector<std::string> labels) {
  FiniteChain c;
  c.kernel_ = kernel;
  int n = static_cast<int>(kernel.rows());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (kernel(x, y) < -1e-15) throw std::invalid_argument("build_chain: kernel is not stochastic");
  c.measure_ = mu ? *mu : stationary_measure(kernel);
  if (c.measure_.size() != kernel.rows())
    throw std::invalid_argument("build_chain: measure dimension mismatch");
  if (std::abs(c.measure_.sum() - 1.0) > 1e-10)
    throw std::invalid_argument("build_chain: measure does not sum to 1");
  c.states_ = std::move(labels);
  c.validate_and_decompose(true);
  return c;
}

FiniteChain chain_from_generator(const Eigen::MatrixXd& generator, const Eigen::VectorXd& mu,
                                 std::vector<std::string> labels) {
  int n = static_cast<int>(generator.rows());
  for (int x = 0; x < n; ++x) {
    if (std::abs(generator.row(x).sum()) > 1e-10)
      throw std::invalid_argument("chain_from_generator: generator rows must sum to 0");
    for (int y = 0; y < n; ++y)
      if (x != y && generator(x, y) < -1e-15)
        throw std::invalid_argument("chain_from_generator: negative off-diagonal rate");
  }
  FiniteChain c;
  c.kernel_ = generator + Eigen::MatrixXd::Identity(n, n);
  c.measure_ = mu;
  c.states_ = std::move(labels);
  c.validate_and_decompose(false);
  return c;
}

FiniteChain mean_chain(const Eigen::VectorXd& mu, std::vector<std::string> labels) {
  int n = static_cast<int>(mu.size());
  Eigen::MatrixXd k(n, n);
  for (int x = 0; x < n; ++x) k.row(x) = mu.transpose();
  return build_chain(k, mu, std::move(labels));
}

FiniteChain two_point_chain(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("two_point_chain: p outside (0,1)");
  Eigen::VectorXd mu(2);
  mu << 1.0 - p, p;  // state 0 = -1, state 1 = +1
  return mean_chain(mu, {"-1", "+1"});
}

double mu_integral(const FiniteChain& c, const Eigen::VectorXd& f) {
  return c.measure().dot(f);
}

double variance(const FiniteChain& c, const Eigen::VectorXd& f) {
  double m = mu_integral(c, f);
  return std::max(0.0, c.measure().dot(f.cwiseProduct(f)) - m * m);
}

double entropy(const FiniteChain& c, const Eigen::VectorXd& f) {
  double m = 0.0, s = 0.0;
  for (int x = 0; x < c.size(); ++x) {
    if (f[x] < 0.0) throw std::domain_error("entropy: negative value");
    m += c.measure()[x] * f[x];
    if (f[x] > 0.0) s += c.measure()[x] * f[x] * std::log(f[x]);
  }
  if (m > 0.0) s -= m * std::log(m);
  return std::max(0.0, s);
}

double lp_norm(const FiniteChain& c, const Eigen::VectorXd& f, double r) {
  if (std::isinf(r) && r > 0) return f.cwiseAbs().maxCoeff();
  if (!(r >= 1.0)) throw std::domain_error("lp_norm: r must be >= 1");
  double s = 0.0;
  for (int x = 0; x < c.size(); ++x) s += c.measure()[x] * std::pow(std::abs(f[x]), r);
  return std::pow(s, 1.0 / r);
}

double dirichlet_form(const FiniteChain& c, const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
  if (f.size() != c.size() || g.size() != c.size())
    throw std::invalid_argument("dirichlet_form: dimension mismatch");
  return -c.measure().dot(f.cwiseProduct(c.generator_apply(g)));
}

Eigen::VectorXd semigroup_apply(const FiniteChain& c, const Eigen::VectorXd& f, double t) {
  if (t < 0.0) throw std::domain_error("semigroup_apply: t must be >= 0");
  const auto& sp = c.spectrum();
  Eigen::VectorXd coeff = sp.basis.transpose() * c.measure().cwiseProduct(f);
  Eigen::VectorXd scaled = (sp.eigenvalues.array() * t).exp() * coeff.array();
  return sp.basis * scaled;
}

double spectral_gap(const FiniteChain& c) {
  const auto& ev = c.spectrum().eigenvalues;
  return -ev[c.size() - 2];
}

namespace {

struct RatioValue {
  double ratio;
  Eigen::VectorXd grad;
};

RatioValue logsob_ratio(const FiniteChain& c, const Eigen::VectorXd& f, bool with_grad) {
  int n = c.size();
  const Eigen::VectorXd& mu = c.measure();
  Eigen::VectorXd neg_lf = -c.generator_apply(f);
  double energy = mu.dot(f.cwiseProduct(neg_lf));
  double m2 = mu.dot(f.cwiseProduct(f));
  double ent = 0.0;
  for (int x = 0; x < n; ++x) {
    double v = f[x] * f[x];
    if (v > 0.0) ent += mu[x] * v * std::log(v);
  }
  ent -= m2 * std::log(m2);
  RatioValue rv;
  if (ent <= 1e-300) {
    rv.ratio = std::numeric_limits<double>::infinity();
    rv.grad = Eigen::VectorXd::Zero(n);
    return rv;
  }
  rv.ratio = 2.0 * energy / ent;
  if (with_grad) {
    Eigen::VectorXd de = 2.0 * mu.cwiseProduct(neg_lf);
    Eigen::VectorXd dent(n);
    for (int x = 0; x < n; ++x) {
      double v = std::max(f[x] * f[x], 1e-300);
      dent[x] = 2.0 * mu[x] * f[x] * std::log(v / m2);
    }
    rv.grad = (2.0 / ent) * de - (2.0 * energy / (ent * ent)) * dent;
  }
  return rv;
}

// Positivity, unit mu-norm, and the variance floor that keeps the search
// away from constants.
Eigen::VectorXd logsob_project(const FiniteChain& c, Eigen::VectorXd f, double min_var) {
  int n = c.size();
  for (int x = 0; x < n; ++x) f[x] = std::max(f[x], 1e-9);
  for (int pass = 0; pass < 3; ++pass) {
    f /= std::sqrt(c.measure().dot(f.cwiseProduct(f)));
    double m = mu_integral(c, f);
    double var = std::max(0.0, c.measure().dot(f.cwiseProduct(f)) - m * m);
    if (var >= min_var) break;
    double s = std::sqrt(min_var * 1.0000001 / std::max(var, 1e-300));
    for (int x = 0; x < n; ++x) f[x] = m + s * (f[x] - m);
    for (int x = 0; x < n; ++x) f[x] = std::max(f[x], 1e-9);
  }
  return f;
}

double logsob_descend(const FiniteChain& c, Eigen::VectorXd f, const LogSobOptions& opts) {
  f = logsob_project(c, std::move(f), opts.min_variance);
  RatioValue cur = logsob_ratio(c, f, true);
  double best = cur.ratio;
  double step = 0.1;
  for (int it = 0; it < opts.max_iterations; ++it) {
    double gnorm = cur.grad.norm();
    if (gnorm * step < opts.step_tolerance) break;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      Eigen::VectorXd cand = logsob_project(c, f - step * cur.grad, opts.min_variance);
      RatioValue rv = logsob_ratio(c, cand, true);
      if (rv.ratio < cur.ratio - 1e-15) {
        f = std::move(cand);
        cur = std::move(rv);
        best = std::min(best, cur.ratio);
        step *= 1.25;
        accepted = true;
        break;
      }
      step *= 0.5;
      if (step < 1e-14) break;
    }
    if (!accepted) break;
  }
  return best;
}

}  // namespace

double logsob_constant(const FiniteChain& c, LogSobMode mode, const LogSobOptions& opts) {
  if (mode == LogSobMode::exact_two_point) {
    if (c.size() != 2)
      throw std::invalid_argument("logsob_constant: exact mode requires a two-point chain");
    double p = c.measure()[1];
    // Any reversible two-point generator is rate * (mean - Id); the rate
    // equals the spectral gap and scales the constant.
    return spectral_gap(c) * two_point_log_sobolev(p);
  }
  int n = c.size();
  double best = spectral_gap(c);  // rho <= lambda; near-constant functions approach lambda
  // Warm starts along the spectral-gap eigenvector.
  Eigen::VectorXd v2 = c.spectrum().basis.col(n - 2);
  double vmax = v2.cwiseAbs().maxCoeff();
  for (double eps : {1e-3, 0.1, 0.5}) {
    Eigen::VectorXd f = Eigen::VectorXd::Ones(n) + (eps * 0.99 / vmax) * v2;
    best = std::min(best, logsob_descend(c, f, opts));
  }
  Rng rng(opts.seed);
  const double sigmas[] = {0.25, 0.5, 1.0, 2.0};
  for (int r = 0; r < opts.restarts; ++r) {
    double sigma = sigmas[r % 4];
    Eigen::VectorXd f(n);
    for (int x = 0; x < n; ++x) f[x] = std::exp(sigma * rng.normal());
    best = std::min(best, logsob_descend(c, f, opts));
  }
  return best;
}

InequalityReport hypercontractivity_check(const FiniteChain& c, double rho, double t,
                                          const Eigen::VectorXd& f) {
  if (!(rho > 0.0)) throw std::domain_error("hypercontractivity_check: rho must be positive");
  if (t < 0.0) throw std::domain_error("hypercontractivity_check: t must be >= 0");
  double p = 1.0 + std::exp(-2.0 * rho * t);
  double lhs = lp_norm(c, semigroup_apply(c, f, t), 2.0);
  double rhs = lp_norm(c, f, p);
  return make_report("hypercontractivity", "chain n=" + std::to_string(c.size()), lhs, rhs, rho);
}

InequalityReport variance_decay_check(const FiniteChain& c, double lambda, double t,
                                      const Eigen::VectorXd& f) {
  if (!(t > 0.0)) throw std::domain_error("variance_decay_check: t must be positive");
  double lhs = variance(c, f);
  double n2 = lp_norm(c, f, 2.0);
  double pt = lp_norm(c, semigroup_apply(c, f, t), 2.0);
  double rhs = (n2 * n2 - pt * pt) / (1.0 - std::exp(-lambda * t));
  return make_report("variance-decay", "chain n=" + std::to_string(c.size()), lhs, rhs, lambda);
}

namespace {

struct FactorData {
  Eigen::MatrixXd kernel;
  int stride;
  int size;
};

Eigen::VectorXd apply_factor_generator(const FactorData& fd, const Eigen::VectorXd& f) {
  int n = static_cast<int>(f.size());
  Eigen::VectorXd out(n);
  int period = fd.stride * fd.size;
  for (int base = 0; base < n; base += period)
    for (int off = 0; off < fd.stride; ++off) {
      for (int a = 0; a < fd.size; ++a) {
        double acc = 0.0;
        for (int b = 0; b < fd.size; ++b) acc += fd.kernel(a, b) * f[base + off + b * fd.stride];
        out[base + off + a * fd.stride] = acc - f[base + off + a * fd.stride];
      }
    }
  return out;
}

}  // namespace

ProductChain product_chain(const std::vector<FiniteChain>& factors) {
  if (factors.empty()) throw std::invalid_argument("product_chain: need at least one factor");
  long total = 1;
  for (const auto& f : factors) {
    total *= f.size();
    if (total > FiniteChain::kMaxStates)
      throw std::invalid_argument("product_chain: product state count above the dense cap");
  }
  int n = static_cast<int>(total);

  // The |L_i f| decomposition identity needs projection factors
  // (K_i f = Int f dmu_i), i.e. every kernel row equal to mu_i.
  for (const auto& f : factors) {
    for (int x = 0; x < f.size(); ++x)
      for (int y = 0; y < f.size(); ++y)
        if (std::abs(f.kernel()(x, y) - f.measure()[y]) > 1e-12)
          throw std::invalid_argument(
              "product_chain: factor kernel is not the mean (projection) chain of its measure");
  }

  std::vector<FactorData> data;
  int stride = 1;
  std::vector<int> sizes;
  for (const auto& f : factors) {
    data.push_back({f.kernel(), stride, f.size()});
    sizes.push_back(f.size());
    stride *= f.size();
  }

  Eigen::VectorXd mu = Eigen::VectorXd::Ones(n);
  for (int x = 0; x < n; ++x) {
    int rem = x;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      int d = rem % sizes[i];
      rem /= sizes[i];
      mu[x] *= factors[i].measure()[d];
    }
  }

  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    int rem = x;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      int d = rem % sizes[i];
      rem /= sizes[i];
      for (int y = 0; y < sizes[i]; ++y) {
        int target = x + (y - d) * data[i].stride;
        gen(x, target) += factors[i].kernel()(d, y);
      }
      gen(x, x) -= 1.0;
    }
  }

  DirichletDecomposition decomp;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    FactorData fd = data[i];
    decomp.directions.push_back(
        [fd](const Eigen::VectorXd& f) { return apply_factor_generator(fd, f).cwiseAbs().eval(); });
  }
  decomp.kappa = 0.0;
  ProductChain pc{chain_from_generator(gen, mu), std::move(decomp), std::move(sizes)};
  validate_decomposition(pc.chain, pc.decomposition);
  return pc;
}

ProductChain cube_product_chain(int n, double p) {
  std::vector<FiniteChain> factors;
  factors.reserve(n);
  for (int i = 0; i < n; ++i) factors.push_back(two_point_chain(p));
  return product_chain(factors);
}

CommutationReport commutation_check(const FiniteChain& c, const DirichletDecomposition& d,
                                    const Eigen::VectorXd& f, double t, double slack) {
  if (t < 0.0) throw std::domain_error("commutation_check: t must be >= 0");
  Eigen::VectorXd ptf = semigroup_apply(c, f, t);
  double scale = std::exp(d.kappa * t);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& gamma : d.directions) {
    Eigen::VectorXd lhs = gamma(ptf);
    Eigen::VectorXd rhs = scale * semigroup_apply(c, gamma(f), t);
    worst = std::max(worst, (lhs - rhs).maxCoeff());
  }
  return {worst, worst <= slack};
}

void validate_decomposition(const FiniteChain& c, const DirichletDecomposition& d, double tol) {
  int n = c.size();
  auto check = [&](const Eigen::VectorXd& f) {
    double sum = 0.0;
    for (const auto& gamma : d.directions) {
      Eigen::VectorXd g = gamma(f);
      sum += c.measure().dot(g.cwiseProduct(g));
    }
    double e = dirichlet_form(c, f, f);
    if (std::abs(sum - e) > tol * std::max(1.0, std::abs(e)))
      throw std::runtime_error("decomposition: directional energies do not sum to the Dirichlet form");
  };
  for (int j = 0; j < n; ++j) check(Eigen::VectorXd::Unit(n, j));
  Rng rng(0x9d2c5680u);
  int extra = std::min(n, 16);
  for (int r = 0; r < extra; ++r) {
    Eigen::VectorXd f(n);
    for (int x = 0; x < n; ++x) f[x] = rng.uniform(-1.0, 1.0);
    check(f);
  }
  for (int r = 0; r < 4; ++r) {
    Eigen::VectorXd f(n);
    for (int x = 0; x < n; ++x) f[x] = rng.uniform(-1.0, 1.0);
    for (double t : {0.1, 0.5, 1.0}) {
      CommutationReport cr = commutation_check(c, d, f, t);
      if (!cr.pass)
        throw std::runtime_error("decomposition: commutation bound fails at t=" + std::to_string(t));
    }
  }
}

Eigen::VectorXd random_chain_function(const FiniteChain& c, Rng& rng, double lo, double hi) {
  Eigen::VectorXd f(c.size());
  for (int x = 0; x < c.size(); ++x) f[x] = rng.uniform(lo, hi);
  return f;
}

FiniteChain read_chain(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("chain read: missing header");
  int n = 0;
  if (std::sscanf(line.c_str(), "n=%d", &n) != 1 || n < 2)
    throw std::runtime_error("chain read: malformed header: " + line);
  Eigen::MatrixXd k(n, n);
  for (int x = 0; x < n; ++x) {
    if (!std::getline(is, line)) throw std::runtime_error("chain read: truncated kernel");
    std::istringstream ls(line);
    for (int y = 0; y < n; ++y)
      if (!(ls >> k(x, y))) throw std::runtime_error("chain read: bad kernel row " + std::to_string(x));
  }
  std::optional<Eigen::VectorXd> mu;
  if (std::getline(is, line) && line.rfind("mu:", 0) == 0) {
    Eigen::VectorXd m(n);
    std::istringstream ls(line.substr(3));
    for (int x = 0; x < n; ++x)
      if (!(ls >> m[x])) throw std::runtime_error("chain read: bad mu line");
    mu = std::move(m);
  }
  return build_chain(k, mu);
}

void write_spectrum_csv(std::ostream& os, const FiniteChain& c) {
  os << "index,eigenvalue\n";
  os.precision(17);
  for (int i = 0; i < c.size(); ++i) os << i << "," << c.spectrum().eigenvalues[i] << "\n";
}

}  // namespace talab
