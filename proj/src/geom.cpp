#include "talab/geom.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "talab/numeric.hpp"
#include "talab/rng.hpp"

namespace talab {

Eigen::MatrixXd sphere_points(const SphereModel& model) {
  if (model.n < 2) throw std::invalid_argument("sphere_points: n must be >= 2");
  if (model.samples < 2 || model.samples % 2 != 0)
    throw std::invalid_argument("sphere_points: sample count must be even and positive");
  int half = model.samples / 2;
  Eigen::MatrixXd pts(model.samples, model.n);
  for (int k = 0; k < half; ++k) {
    Rng rng = stream(model.seed, static_cast<std::uint64_t>(k));
    Eigen::VectorXd v(model.n);
    double norm2 = 0.0;
    do {
      for (int d = 0; d < model.n; ++d) v[d] = rng.normal();
      norm2 = v.squaredNorm();
    } while (norm2 < 1e-24);
    v /= std::sqrt(norm2);
    pts.row(k) = v.transpose();
    pts.row(half + k) = -v.transpose();
  }
  return pts;
}

double dij_derivative(const SmoothFunction& f, int i, int j, const Eigen::VectorXd& x) {
  if (i < 0 || j < 0 || i >= x.size() || j >= x.size() || i == j)
    throw std::out_of_range("dij_derivative: bad pair");
  if (std::abs(x.norm() - 1.0) > 1e-12)
    throw std::domain_error("dij_derivative: point is off the sphere");
  Eigen::VectorXd g = f.gradient(x);
  return x[i] * g[j] - x[j] * g[i];
}

namespace {

// Batched mean with standard error; batches respect antithetic pairing
// (pair k and M/2+k land in the same batch).
struct Batched {
  double mean = 0.0;
  double se = 0.0;
};

constexpr int kBatches = 10;

Batched batched_mean(const std::function<double(int)>& value, int half, int samples) {
  std::vector<double> sums(kBatches, 0.0);
  std::vector<int> counts(kBatches, 0);
  for (int k = 0; k < half; ++k) {
    int b = k % kBatches;
    sums[b] += value(k) + value(half + k);
    counts[b] += 2;
  }
  (void)samples;
  double mean = 0.0;
  std::vector<double> avgs(kBatches);
  for (int b = 0; b < kBatches; ++b) {
    avgs[b] = sums[b] / counts[b];
    mean += sums[b];
  }
  int total = 0;
  for (int c : counts) total += c;
  mean /= total;
  double var = 0.0;
  for (int b = 0; b < kBatches; ++b) var += (avgs[b] - mean) * (avgs[b] - mean);
  var /= (kBatches - 1);
  return {mean, std::sqrt(var / kBatches)};
}

}  // namespace

namespace {

SphereEstimate variance_impl(const SmoothFunction& f, const Eigen::MatrixXd& pts) {
  int samples = static_cast<int>(pts.rows());
  int half = samples / 2;
  std::vector<double> vals(samples);
  for (int k = 0; k < samples; ++k) vals[k] = f.value(pts.row(k).transpose());
  Batched m1 = batched_mean([&](int k) { return vals[k]; }, half, samples);
  Batched m2 = batched_mean([&](int k) { return vals[k] * vals[k]; }, half, samples);
  double var = std::max(0.0, m2.mean - m1.mean * m1.mean);
  double se = std::sqrt(m2.se * m2.se + 4.0 * m1.mean * m1.mean * m1.se * m1.se);
  return {var, se};
}

// All pair derivatives in one pass over the samples.
struct PairMoments {
  Eigen::MatrixXd abs1;  // samples x pairs, |D_ij f|
};

PairMoments pair_values(const SmoothFunction& f, const Eigen::MatrixXd& pts, int n) {
  int samples = static_cast<int>(pts.rows());
  int pairs = n * (n - 1) / 2;
  PairMoments pm;
  pm.abs1.resize(samples, pairs);
  for (int k = 0; k < samples; ++k) {
    Eigen::VectorXd x = pts.row(k).transpose();
    Eigen::VectorXd g = f.gradient(x);
    int at = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++at) pm.abs1(k, at) = std::abs(x[i] * g[j] - x[j] * g[i]);
  }
  return pm;
}

SphereEstimate column_norm(const Eigen::MatrixXd& abs1, int col, double r) {
  int samples = static_cast<int>(abs1.rows());
  int half = samples / 2;
  Batched m = batched_mean([&](int k) { return std::pow(abs1(k, col), r); }, half, samples);
  double value = std::pow(m.mean, 1.0 / r);
  double se = m.mean > 0.0 ? value / (r * m.mean) * m.se : m.se;
  return {value, se};
}

}  // namespace

SphereEstimate sphere_variance(const SmoothFunction& f, const SphereModel& model) {
  return variance_impl(f, sphere_points(model));
}

SphereEstimate sphere_pair_norm(const SmoothFunction& f, const SphereModel& model, int i, int j,
                                double r) {
  Eigen::MatrixXd pts = sphere_points(model);
  int n = model.n;
  int at = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if ((a == i && b == j) || (a == j && b == i)) {
        PairMoments pm = pair_values(f, pts, n);
        return column_norm(pm.abs1, at, r);
      }
      ++at;
    }
  throw std::out_of_range("sphere_pair_norm: bad pair");
}

IdentityCheck sphere_dirichlet_identity_check(const SmoothFunction& f, const SphereModel& model) {
  if (!f.hessian) throw std::invalid_argument("sphere identity: needs a Hessian evaluator");
  Eigen::MatrixXd pts = sphere_points(model);
  int half = model.samples / 2;
  int n = model.n;

  // Sphere Laplacian of the ambient extension:
  // Lap_S f = Lap f - x^T H x - (n-1) x . grad f on |x| = 1.
  auto lhs_val = [&](int k) {
    Eigen::VectorXd x = pts.row(k).transpose();
    Eigen::VectorXd g = f.gradient(x);
    Eigen::MatrixXd h = f.hessian(x);
    double lap_s = h.trace() - x.dot(h * x) - (n - 1) * x.dot(g);
    return -f.value(x) * lap_s;
  };
  auto rhs_val = [&](int k) {
    Eigen::VectorXd x = pts.row(k).transpose();
    Eigen::VectorXd g = f.gradient(x);
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double d = x[i] * g[j] - x[j] * g[i];
        s += d * d;
      }
    return s;
  };
  Batched lhs = batched_mean(lhs_val, half, model.samples);
  Batched rhs = batched_mean(rhs_val, half, model.samples);
  double se = std::sqrt(lhs.se * lhs.se + rhs.se * rhs.se);
  IdentityCheck out;
  out.lhs = lhs.mean;
  out.rhs = rhs.mean;
  out.std_error = se;
  out.pass = std::abs(lhs.mean - rhs.mean) <= 3.0 * se + 1e-9;
  return out;
}

namespace {

McInequalityReport mc_report(std::string id, std::string model_desc, double lhs, double rhs,
                             double constant, double lhs_se, double rhs_se) {
  McInequalityReport out;
  out.report = make_report(std::move(id), std::move(model_desc), lhs, rhs, constant);
  out.lhs_se = lhs_se;
  out.rhs_se = rhs_se;
  // Re-derive the verdict with 3 sigma of Monte Carlo slack.
  double slack = 3.0 * std::sqrt(lhs_se * lhs_se + rhs_se * rhs_se);
  out.report.pass = lhs <= rhs + slack + pass_slack(rhs);
  return out;
}

}  // namespace

McInequalityReport corollary4_report(const SmoothFunction& f, const SphereModel& model) {
  int n = model.n;
  double constant = 4.0 * std::exp(1.0) / n;
  Eigen::MatrixXd pts = sphere_points(model);
  SphereEstimate var = variance_impl(f, pts);
  PairMoments pm = pair_values(f, pts, n);
  double sum = 0.0, sum_se2 = 0.0;
  for (int col = 0; col < pm.abs1.cols(); ++col) {
    SphereEstimate n2 = column_norm(pm.abs1, col, 2.0);
    if (n2.value == 0.0) continue;
    SphereEstimate n1 = column_norm(pm.abs1, col, 1.0);
    double denom = 1.0 + std::log(n2.value / n1.value);
    // Ordered pairs double the i<j sum.
    sum += 2.0 * n2.value * n2.value / denom;
    double d = 4.0 * n2.value * n2.std_error / denom;
    sum_se2 += d * d;
  }
  std::ostringstream m;
  m << "sphere n=" << n << " M=" << model.samples;
  return mc_report("corollary4", m.str(), var.value, constant * sum, constant, var.std_error,
                   constant * std::sqrt(sum_se2));
}

McInequalityReport theorem8_report(const SmoothFunction& f, const SphereModel& model, double c) {
  if (!f.bounded_by_one) throw std::invalid_argument("theorem8_report: requires the |f| <= 1 flag");
  int n = model.n;
  double constant = c / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd pts = sphere_points(model);
  SphereEstimate var = variance_impl(f, pts);
  PairMoments pm = pair_values(f, pts, n);
  double sum = 0.0, sum_se2 = 0.0;
  for (int col = 0; col < pm.abs1.cols(); ++col) {
    SphereEstimate n1 = column_norm(pm.abs1, col, 1.0);
    sum += 2.0 * l1_summand(n1.value);
    // Derivative of the summand is O(1); first-order error propagation.
    double d = 2.0 * (1.0 + 2.0 * n1.value) * n1.std_error;
    sum_se2 += d * d;
  }
  std::ostringstream m;
  m << "sphere n=" << n << " M=" << model.samples;
  return mc_report("theorem8", m.str(), var.value, constant * sum, constant, var.std_error,
                   constant * std::sqrt(sum_se2));
}

SubspaceDecomposition validate_decomposition(const std::vector<SubspaceDecomposition::Term>& terms,
                                             int n) {
  if (terms.empty()) throw std::invalid_argument("decomposition: no terms");
  double trace = 0.0;
  for (const auto& t : terms) {
    if (!(t.weight > 0.0)) throw std::invalid_argument("decomposition: weights must be positive");
    if (t.basis.rows() != n) throw std::invalid_argument("decomposition: basis row count mismatch");
    Eigen::MatrixXd gram = t.basis.transpose() * t.basis;
    if ((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("decomposition: basis columns are not orthonormal");
    trace += t.weight * t.basis.cols();
  }
  if (std::abs(trace - n) > 1e-8)
    throw std::invalid_argument("decomposition: trace identity sum c_i dim E_i = n fails");
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : terms) sum += t.weight * t.basis * t.basis.transpose();
  Eigen::MatrixXd defect = sum - Eigen::MatrixXd::Identity(n, n);
  double opnorm = defect.cwiseAbs().rowwise().sum().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(defect);
  opnorm = std::min(opnorm, es.eigenvalues().cwiseAbs().maxCoeff());
  if (opnorm > 1e-10)
    throw std::invalid_argument("decomposition: weighted projections do not resolve the identity");
  SubspaceDecomposition d;
  d.terms = terms;
  d.ambient_dim = n;
  return d;
}

SubspaceDecomposition coordinate_decomposition(int n) {
  std::vector<SubspaceDecomposition::Term> terms;
  for (int i = 0; i < n; ++i)
    terms.push_back({1.0, Eigen::MatrixXd::Identity(n, n).col(i)});
  return validate_decomposition(terms, n);
}

SubspaceDecomposition loomis_whitney(int n) {
  if (n < 2) throw std::invalid_argument("loomis_whitney: n must be >= 2");
  std::vector<SubspaceDecomposition::Term> terms;
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd basis(n, n - 1);
    int at = 0;
    for (int j = 0; j < n; ++j)
      if (j != i) basis.col(at++) = id.col(j);
    terms.push_back({1.0 / (n - 1), basis});
  }
  return validate_decomposition(terms, n);
}

double projected_gradient_norm(const SubspaceDecomposition::Term& term, const SmoothFunction& f,
                               const Eigen::VectorXd& x) {
  return (term.basis.transpose() * f.gradient(x)).norm();
}

InequalityReport corollary5_report(const SmoothFunction& f, const SubspaceDecomposition& decomp,
                                   const TensorGrid& grid) {
  const double constant = 4.0;
  double sum = 0.0;
  for (const auto& term : decomp.terms) {
    double m1 = 0.0, m2 = 0.0;
    grid.for_each([&](const Eigen::VectorXd& x, double w) {
      double v = projected_gradient_norm(term, f, x);
      m1 += w * v;
      m2 += w * v * v;
    });
    if (m2 <= 0.0) continue;
    double n2 = std::sqrt(m2);
    if (m1 == 0.0)
      throw std::runtime_error("corollary5_report: zero L1 norm with positive L2 norm");
    sum += term.weight * m2 / (1.0 + std::log(n2 / m1));
  }
  std::ostringstream m;
  m << "gaussian brascamp-lieb n=" << decomp.ambient_dim << " m=" << decomp.terms.size();
  double var = 0.0;
  {
    double s1 = 0.0, s2 = 0.0;
    grid.for_each([&](const Eigen::VectorXd& x, double w) {
      double v = f.value(x);
      s1 += w * v;
      s2 += w * v * v;
    });
    var = std::max(0.0, s2 - s1 * s1);
  }
  return make_report("corollary5", m.str(), var, constant * sum, constant);
}

InequalityReport proposition9_report(const SmoothFunction& f, const SubspaceDecomposition& decomp,
                                     const TensorGrid& grid, double c) {
  if (!f.bounded_by_one)
    throw std::invalid_argument("proposition9_report: requires the |f| <= 1 flag");
  double sum = 0.0;
  for (const auto& term : decomp.terms) {
    double n1 = grid.integrate(
        [&](const Eigen::VectorXd& x) { return projected_gradient_norm(term, f, x); });
    sum += term.weight * l1_summand(n1);
  }
  double s1 = 0.0, s2 = 0.0;
  grid.for_each([&](const Eigen::VectorXd& x, double w) {
    double v = f.value(x);
    s1 += w * v;
    s2 += w * v * v;
  });
  std::ostringstream m;
  m << "gaussian brascamp-lieb n=" << decomp.ambient_dim << " m=" << decomp.terms.size();
  return make_report("proposition9", m.str(), std::max(0.0, s2 - s1 * s1), c * sum, c);
}

PointwiseReport projection_commutation_check(const SmoothFunction& f,
                                             const SubspaceDecomposition& decomp, double t,
                                             const std::vector<Eigen::VectorXd>& points, int nodes,
                                             double tol) {
  if (!(t > 0.0)) throw std::domain_error("projection_commutation_check: t must be positive");
  ProductMeasure mu = ProductMeasure::gaussian_block(decomp.ambient_dim);
  double decay = std::exp(-t);
  double worst = 0.0;
  for (const auto& x : points) {
    Eigen::VectorXd grad_pt = ou_gradient(f.value, t, x, mu, nodes);
    for (const auto& term : decomp.terms) {
      Eigen::VectorXd lhs = term.basis.transpose() * grad_pt;
      // e^{-t} P_t(Q grad f), component-wise quadrature.
      Eigen::VectorXd rhs(term.basis.cols());
      for (int c = 0; c < term.basis.cols(); ++c) {
        Eigen::VectorXd dir = term.basis.col(c);
        SmoothFunction comp;
        comp.value = [&f, dir](const Eigen::VectorXd& z) { return dir.dot(f.gradient(z)); };
        rhs[c] = decay * ou_apply(comp, t, x, mu, nodes);
      }
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  return {worst, worst <= tol};
}

SectionBoundaryReport section_boundary_check(const SetSpec& a, int i, const ProductMeasure& mu,
                                             double c) {
  if (!a.analytic() || a.kind == SetSpec::Kind::ball)
    throw std::invalid_argument("section_boundary_check: half-space or box only");
  if (!(c > 0.0)) throw std::domain_error("section_boundary_check: C must be positive");
  int n = mu.total_dim();
  if (i < 0 || i >= n) throw std::out_of_range("section_boundary_check: coordinate out of range");

  double mass = set_measure(a, mu);
  if (!(mass > 0.0 && mass < 1.0))
    throw std::domain_error("section_boundary_check: set measure is degenerate");

  SectionBoundaryReport rep;
  if (a.kind == SetSpec::Kind::halfspace) {
    if (a.axis == i) {
      // Sections along the defining axis collapse; the orthogonal gradient
      // component vanishes.
      rep.averaged_boundary = 0.0;
    } else {
      // Every section is the same half-space; its boundary is the density
      // at the threshold.
      rep.averaged_boundary = mu.factor_of_dim(a.axis).density1d(a.threshold);
      rep.halfspace_section_isoperimetric =
          std::abs(rep.averaged_boundary - isoperimetric_profile(mass)) <= 1e-12;
    }
  } else {
    // Box: faces normal to every coordinate except i, averaged over the
    // i-th coordinate's interval mass.
    std::vector<double> masses(n);
    for (int d = 0; d < n; ++d) {
      const Factor& f = mu.factor_of_dim(d);
      masses[d] = std::max(0.0, f.cdf1d(a.hi[d]) - f.cdf1d(a.lo[d]));
    }
    double total = 0.0;
    for (int d = 0; d < n; ++d) {
      if (d == i) continue;
      const Factor& f = mu.factor_of_dim(d);
      double face = 0.0;
      if (std::isfinite(a.lo[d])) face += f.density1d(a.lo[d]);
      if (std::isfinite(a.hi[d])) face += f.density1d(a.hi[d]);
      double rest = 1.0;
      for (int d2 = 0; d2 < n; ++d2)
        if (d2 != d) rest *= masses[d2];
      total += face * rest;
    }
    rep.averaged_boundary = total;
  }
  double aa = mass * (1.0 - mass);
  rep.bound = aa * std::sqrt(std::log(1.0 / aa)) / c;
  rep.pass = rep.averaged_boundary >= rep.bound - pass_slack(rep.bound);
  return rep;
}

SubspaceDecomposition parse_decomposition(const std::vector<std::string>& term_lines, int n) {
  std::vector<SubspaceDecomposition::Term> terms;
  for (const auto& line : term_lines) {
    std::istringstream in(line);
    std::string word;
    in >> word;
    if (word != "term") throw std::invalid_argument("decomposition: expected 'term ...': " + line);
    double weight = 0.0;
    std::vector<double> entries;
    while (in >> word) {
      if (word.rfind("c=", 0) == 0) {
        weight = std::stod(word.substr(2));
      } else if (word.rfind("basis=", 0) == 0) {
        std::istringstream vals(word.substr(6));
        std::string v;
        while (std::getline(vals, v, ',')) entries.push_back(std::stod(v));
      } else {
        throw std::invalid_argument("decomposition: unknown token " + word);
      }
    }
    if (entries.size() % n != 0)
      throw std::invalid_argument("decomposition: basis entry count not a multiple of n");
    int cols = static_cast<int>(entries.size()) / n;
    Eigen::MatrixXd basis(n, cols);
    // Row-major input: entry k belongs to row k/cols, column k%cols.
    for (std::size_t k = 0; k < entries.size(); ++k)
      basis(static_cast<int>(k) / cols, static_cast<int>(k) % cols) = entries[k];
    terms.push_back({weight, basis});
  }
  return validate_decomposition(terms, n);
}

}  // namespace talab
