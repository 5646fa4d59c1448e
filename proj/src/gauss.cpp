#include "talab/gauss.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "talab/numeric.hpp"
#include "talab/rng.hpp"

namespace talab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Factor Factor::gaussian_factor(int dim) {
  Factor f;
  f.kind = FactorKind::gaussian;
  f.dim = dim;
  f.log_sobolev = 1.0;
  f.curvature_kappa = 0.0;   // V'' = 1 >= 0
  f.commutation_rate = -1.0; // |grad P_t f| <= e^{-t} P_t |grad f|
  return f;
}

Factor Factor::exp_power_factor(double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("exp_power_factor: alpha must exceed 1");
  Factor f;
  f.kind = FactorKind::exp_power;
  f.dim = 1;
  f.alpha = alpha;
  f.log_sobolev = 0.0;  // not hypercontractive in the usual sense for alpha < 2
  f.curvature_kappa = 0.0;   // |x|^alpha is convex
  f.commutation_rate = 0.0;
  return f;
}

Factor Factor::custom_factor(std::function<double(double)> potential, double rho,
                             double curvature_kappa, double commutation_rate) {
  Factor f;
  f.kind = FactorKind::custom;
  f.dim = 1;
  f.potential = std::move(potential);
  f.log_sobolev = rho;
  f.curvature_kappa = curvature_kappa;
  f.commutation_rate = commutation_rate;
  return f;
}

double Factor::density1d(double x) const {
  switch (kind) {
    case FactorKind::gaussian:
      return normal_pdf(x);
    case FactorKind::exp_power: {
      double c = 1.0 / (2.0 * std::tgamma(1.0 + 1.0 / alpha));
      return c * std::exp(-std::pow(std::abs(x), alpha));
    }
    case FactorKind::custom:
      return std::exp(-potential(x));
  }
  return 0.0;
}

double Factor::cdf1d(double x) const {
  if (kind == FactorKind::gaussian) return normal_cdf(x);
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  double r = truncation_radius();
  if (x <= -r) return 0.0;
  if (x >= r) return 1.0;
  double half = std::abs(x);
  double mass = integrate_adaptive([this](double u) { return density1d(u); }, 0.0, half, 1e-11);
  return x >= 0.0 ? 0.5 + mass : 0.5 - mass;
}

double Factor::truncation_radius() const {
  switch (kind) {
    case FactorKind::gaussian:
      return 9.5;
    case FactorKind::exp_power:
      return std::pow(42.0, 1.0 / alpha);
    case FactorKind::custom: {
      double r = 1.0;
      while (r < 64.0 && (density1d(r) > 1e-18 || density1d(-r) > 1e-18)) r *= 2.0;
      return r;
    }
  }
  return 16.0;
}

ProductMeasure::ProductMeasure(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("ProductMeasure: no factors");
  total_dim_ = 0;
  for (const auto& f : factors_) {
    if (f.dim < 1) throw std::invalid_argument("ProductMeasure: factor dim < 1");
    offsets_.push_back(total_dim_);
    total_dim_ += f.dim;
  }
  // Each 1-d marginal must integrate to 1.
  for (const auto& f : factors_) {
    double r = f.truncation_radius();
    double total =
        integrate_adaptive([&f](double u) { return f.density1d(u); }, -r, r, 1e-11);
    if (std::abs(total - 1.0) > 1e-8)
      throw std::invalid_argument("ProductMeasure: factor density does not normalize to 1");
  }
}

int ProductMeasure::block_of_dim(int d) const {
  for (int i = 0; i < block_count(); ++i)
    if (d < offsets_[i] + factors_[i].dim) return i;
  throw std::out_of_range("ProductMeasure: coordinate out of range");
}

double ProductMeasure::rho() const {
  double r = kInf;
  for (const auto& f : factors_) r = std::min(r, f.log_sobolev);
  return r;
}

double ProductMeasure::curvature_kappa() const {
  double k = 0.0;
  for (const auto& f : factors_) k = std::max(k, f.curvature_kappa);
  return k;
}

double ProductMeasure::commutation_rate() const {
  double k = -kInf;
  for (const auto& f : factors_) k = std::max(k, f.commutation_rate);
  return k;
}

bool ProductMeasure::all_gaussian() const {
  for (const auto& f : factors_)
    if (f.kind != FactorKind::gaussian) return false;
  return true;
}

ProductMeasure ProductMeasure::standard_gaussian(int n_factors) {
  std::vector<Factor> fs(n_factors, Factor::gaussian_factor(1));
  return ProductMeasure(std::move(fs));
}

ProductMeasure ProductMeasure::gaussian_block(int dim) {
  return ProductMeasure({Factor::gaussian_factor(dim)});
}

TensorGrid make_grid(const ProductMeasure& mu, int nodes) {
  return make_grid(mu, std::vector<int>(mu.total_dim(), nodes));
}

TensorGrid make_grid_dense_axis(const ProductMeasure& mu, int nodes, int axis,
                                double panel_width) {
  if (axis < 0 || axis >= mu.total_dim())
    throw std::out_of_range("make_grid_dense_axis: axis out of range");
  std::vector<Grid1D> dims;
  for (int d = 0; d < mu.total_dim(); ++d) {
    const Factor& f = mu.factor_of_dim(d);
    double r = f.truncation_radius();
    if (d == axis) {
      int panels = std::max(64, static_cast<int>(std::ceil(2.0 * r / panel_width)));
      dims.push_back(density_grid([&f](double u) { return f.density1d(u); }, -r, r, panels, 8));
    } else if (f.kind == FactorKind::gaussian) {
      dims.push_back(gauss_hermite(nodes));
    } else {
      int panels = std::max(2, (nodes + 7) / 8);
      dims.push_back(density_grid([&f](double u) { return f.density1d(u); }, -r, r, panels, 8));
    }
  }
  return TensorGrid(std::move(dims));
}

TensorGrid make_grid(const ProductMeasure& mu, const std::vector<int>& nodes_per_dim) {
  if (static_cast<int>(nodes_per_dim.size()) != mu.total_dim())
    throw std::invalid_argument("make_grid: one node count per dimension required");
  std::vector<Grid1D> dims;
  for (int d = 0; d < mu.total_dim(); ++d) {
    const Factor& f = mu.factor_of_dim(d);
    int n = nodes_per_dim[d];
    if (f.kind == FactorKind::gaussian) {
      dims.push_back(gauss_hermite(n));
    } else {
      double r = f.truncation_radius();
      int panels = std::max(2, (n + 7) / 8);
      dims.push_back(density_grid([&f](double u) { return f.density1d(u); }, -r, r, panels, 8));
    }
  }
  return TensorGrid(std::move(dims));
}

namespace {

// Tabulated half-line CDF for inverse sampling of non-Gaussian factors.
struct InverseCdfTable {
  double radius;
  std::vector<double> cumulative;  // G(r_k), r_k = k h, G(R) ~ 1/2
  double step;

  explicit InverseCdfTable(const Factor& f) {
    radius = f.truncation_radius();
    const int n = 8192;
    step = radius / n;
    cumulative.resize(n + 1);
    cumulative[0] = 0.0;
    double prev = f.density1d(0.0);
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) {
      double x = k * step;
      double mid = f.density1d(x - 0.5 * step);
      double cur = f.density1d(x);
      acc += step / 6.0 * (prev + 4.0 * mid + cur);  // Simpson per cell
      cumulative[k] = acc;
      prev = cur;
    }
  }

  double invert(double target, const Factor& f) const {
    // target in [0, G(R)); binary search then Newton refinement.
    int lo = 0, hi = static_cast<int>(cumulative.size()) - 1;
    double top = cumulative.back();
    double g = std::min(target, top * (1.0 - 1e-15));
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      if (cumulative[mid] <= g)
        lo = mid;
      else
        hi = mid;
    }
    double x = lo * step + (g - cumulative[lo]) / std::max(f.density1d(lo * step), 1e-300);
    for (int it = 0; it < 2; ++it) {
      double err = cumulative[lo] +
                   integrate_adaptive([&f](double u) { return f.density1d(u); }, lo * step, x,
                                      1e-12) -
                   g;
      x -= err / std::max(f.density1d(x), 1e-300);
    }
    return std::min(std::max(x, 0.0), radius);
  }
};

}  // namespace

SampleCloud make_cloud(const ProductMeasure& mu, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("make_cloud: count must be positive");
  std::vector<std::shared_ptr<InverseCdfTable>> tables(mu.block_count());
  for (int i = 0; i < mu.block_count(); ++i)
    if (mu.factors()[i].kind != FactorKind::gaussian)
      tables[i] = std::make_shared<InverseCdfTable>(mu.factors()[i]);

  SampleCloud cloud;
  cloud.seed = seed;
  cloud.points.resize(count, mu.total_dim());
  for (int s = 0; s < count; ++s) {
    Rng rng = stream(seed, static_cast<std::uint64_t>(s));
    for (int i = 0; i < mu.block_count(); ++i) {
      const Factor& f = mu.factors()[i];
      for (int d = 0; d < f.dim; ++d) {
        int col = mu.block_offset(i) + d;
        if (f.kind == FactorKind::gaussian) {
          cloud.points(s, col) = rng.normal();
        } else {
          double u = rng.uniform();
          double half = std::abs(2.0 * u - 1.0) * 0.5;  // target half-line mass
          double x = tables[i]->invert(half * 2.0 * tables[i]->cumulative.back(), f);
          cloud.points(s, col) = u < 0.5 ? -x : x;
        }
      }
    }
  }
  return cloud;
}

double grid_integral(const TensorGrid& grid,
                     const std::function<double(const Eigen::VectorXd&)>& f) {
  return grid.integrate(f);
}

double variance_grid(const SmoothFunction& f, const TensorGrid& grid) {
  double m = 0.0, m2 = 0.0;
  grid.for_each([&](const Eigen::VectorXd& x, double w) {
    double v = f.value(x);
    m += w * v;
    m2 += w * v * v;
  });
  return std::max(0.0, m2 - m * m);
}

Estimate variance_mc(const std::function<double(const Eigen::VectorXd&)>& f,
                     const SampleCloud& cloud) {
  const int batches = 10;
  int m = static_cast<int>(cloud.points.rows());
  int per = m / batches;
  std::vector<double> vals;
  for (int b = 0; b < batches; ++b) {
    double s = 0.0, s2 = 0.0;
    for (int k = b * per; k < (b + 1) * per; ++k) {
      double v = f(cloud.points.row(k).transpose());
      s += v;
      s2 += v * v;
    }
    s /= per;
    s2 /= per;
    vals.push_back(std::max(0.0, s2 - s * s));
  }
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= batches;
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= (batches - 1);
  return {"variance", mean, std::sqrt(var / batches), "mc"};
}

double ou_apply(const SmoothFunction& f, double t, const Eigen::VectorXd& x,
                const ProductMeasure& mu, int nodes) {
  if (!mu.all_gaussian()) throw std::invalid_argument("ou_apply: Gaussian factors only");
  if (t < 0.0) throw std::domain_error("ou_apply: t must be >= 0");
  if (t == 0.0) return f.value(x);
  double decay = std::exp(-t);
  double beta = std::sqrt(1.0 - decay * decay);
  TensorGrid grid = make_grid(mu, nodes);
  return grid.integrate(
      [&](const Eigen::VectorXd& y) { return f.value(decay * x + beta * y); });
}

Eigen::VectorXd ou_gradient(const std::function<double(const Eigen::VectorXd&)>& f, double t,
                            const Eigen::VectorXd& x, const ProductMeasure& mu, int nodes) {
  if (!mu.all_gaussian()) throw std::invalid_argument("ou_gradient: Gaussian factors only");
  if (!(t > 0.0)) throw std::domain_error("ou_gradient: t must be positive");
  double decay = std::exp(-t);
  double beta = std::sqrt(1.0 - decay * decay);
  TensorGrid grid = make_grid(mu, nodes);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(mu.total_dim());
  grid.for_each([&](const Eigen::VectorXd& y, double w) {
    acc += w * f(decay * x + beta * y) * y;
  });
  return (decay / beta) * acc;
}

namespace {

double block_gradient_norm(const SmoothFunction& f, const ProductMeasure& mu, int block,
                           const Eigen::VectorXd& x) {
  Eigen::VectorXd g = f.gradient(x);
  return g.segment(mu.block_offset(block), mu.block_dim(block)).norm();
}

}  // namespace

Estimate gradient_block_norm(const SmoothFunction& f, const ProductMeasure& mu, int block, double r,
                             const TensorGrid& grid) {
  if (!(r >= 1.0)) throw std::domain_error("gradient_block_norm: r must be >= 1");
  double s = grid.integrate([&](const Eigen::VectorXd& x) {
    return std::pow(block_gradient_norm(f, mu, block, x), r);
  });
  return {"gradient-norm", std::pow(s, 1.0 / r), 0.0, "grid"};
}

Estimate gradient_block_norm(const SmoothFunction& f, const ProductMeasure& mu, int block, double r,
                             const SampleCloud& cloud) {
  if (!(r >= 1.0)) throw std::domain_error("gradient_block_norm: r must be >= 1");
  int m = static_cast<int>(cloud.points.rows());
  double s = 0.0, s2 = 0.0;
  for (int k = 0; k < m; ++k) {
    double v = std::pow(block_gradient_norm(f, mu, block, cloud.points.row(k).transpose()), r);
    s += v;
    s2 += v * v;
  }
  s /= m;
  s2 /= m;
  double se_mean = std::sqrt(std::max(0.0, s2 - s * s) / m);
  double value = std::pow(s, 1.0 / r);
  double se = s > 0.0 ? value / (r * s) * se_mean : se_mean;
  return {"gradient-norm", value, se, "mc"};
}

InequalityReport corollary3_report(const SmoothFunction& f, const ProductMeasure& mu,
                                   const TensorGrid& grid, std::optional<double> constant) {
  double c;
  if (constant) {
    c = *constant;
  } else {
    double rho = mu.rho();
    if (!(rho > 0.0))
      throw std::invalid_argument("corollary3_report: factors are not hypercontractive");
    c = 4.0 * std::exp(std::max(0.0, 1.0 + mu.commutation_rate() / rho)) / rho;
  }
  double sum = 0.0;
  for (int i = 0; i < mu.block_count(); ++i) {
    double n2 = gradient_block_norm(f, mu, i, 2.0, grid).value;
    if (n2 == 0.0) continue;
    double n1 = gradient_block_norm(f, mu, i, 1.0, grid).value;
    if (n1 == 0.0) throw std::runtime_error("corollary3_report: zero L1 norm with positive L2 norm");
    sum += n2 * n2 / (1.0 + std::log(n2 / n1));
  }
  std::ostringstream model;
  model << "product-measure N=" << mu.block_count();
  return make_report("corollary3", model.str(), variance_grid(f, grid), c * sum, c);
}

double l1_summand(double b) {
  if (b <= 0.0) return 0.0;
  double logplus = b < 1.0 ? std::log(1.0 / b) : 0.0;
  return b * (1.0 + b) / std::sqrt(1.0 + logplus);
}

double theorem6_constant(double rho, double curvature_kappa, double c0) {
  if (!(rho > 0.0)) throw std::domain_error("theorem6_constant: rho must be positive");
  double t = std::min(1.0, 1.0 / (2.0 * rho));
  if (curvature_kappa > 0.0) t = std::min(t, 1.0 / (2.0 * curvature_kappa));
  return c0 / (std::pow(rho, 1.5) * t);
}

InequalityReport theorem6_report(const SmoothFunction& f, const ProductMeasure& mu,
                                 const TensorGrid& grid, double c0) {
  if (!f.bounded_by_one)
    throw std::invalid_argument("theorem6_report: requires the |f| <= 1 flag");
  if (mu.curvature_kappa() < 0.0)
    throw std::invalid_argument("theorem6_report: curvature bound must be >= 0");
  double c = theorem6_constant(mu.rho(), mu.curvature_kappa(), c0);
  double sum = 0.0;
  for (int i = 0; i < mu.block_count(); ++i)
    sum += l1_summand(gradient_block_norm(f, mu, i, 1.0, grid).value);
  std::ostringstream model;
  model << "product-measure N=" << mu.block_count();
  return make_report("theorem6", model.str(), variance_grid(f, grid), c * sum, c);
}

double q_summand(double q, double norm_q, double norm_1) {
  if (norm_q <= 0.0) return 0.0;
  double nq = std::pow(norm_q, q);
  double n1sq = norm_1 * norm_1;
  double ratio = nq / n1sq;
  double logplus = ratio > 1.0 ? std::log(ratio) : 0.0;
  return nq * (1.0 + n1sq / nq) / std::pow(1.0 + logplus, 0.5 * q);
}

InequalityReport interpolated_q_report(const SmoothFunction& f, const ProductMeasure& mu, double q,
                                       const TensorGrid& grid, double constant) {
  if (!(q >= 1.0 && q <= 2.0)) throw std::domain_error("interpolated_q_report: q outside [1,2]");
  if (!f.bounded_by_one)
    throw std::invalid_argument("interpolated_q_report: requires the |f| <= 1 flag");
  double sum = 0.0;
  for (int i = 0; i < mu.block_count(); ++i) {
    double nq = gradient_block_norm(f, mu, i, q, grid).value;
    double n1 = gradient_block_norm(f, mu, i, 1.0, grid).value;
    sum += q_summand(q, nq, n1);
  }
  std::ostringstream model;
  model << "product-measure N=" << mu.block_count() << " q=" << q;
  return make_report("interpolated-q", model.str(), variance_grid(f, grid), constant * sum,
                     constant);
}

SetSpec SetSpec::halfspace(int axis, double threshold) {
  SetSpec s;
  s.kind = Kind::halfspace;
  s.axis = axis;
  s.threshold = threshold;
  return s;
}

SetSpec SetSpec::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("SetSpec::box: lo/hi size mismatch");
  SetSpec s;
  s.kind = Kind::box;
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  return s;
}

SetSpec SetSpec::ball(Eigen::VectorXd center, double radius) {
  SetSpec s;
  s.kind = Kind::ball;
  s.center = std::move(center);
  s.radius = radius;
  return s;
}

SetSpec SetSpec::empty_set() {
  SetSpec s;
  s.kind = Kind::empty;
  return s;
}

SetSpec SetSpec::predicate(std::function<bool(const Eigen::VectorXd&)> member,
                           Eigen::VectorXd bound_lo, Eigen::VectorXd bound_hi) {
  SetSpec s;
  s.kind = Kind::predicate;
  s.member = std::move(member);
  s.bound_lo = std::move(bound_lo);
  s.bound_hi = std::move(bound_hi);
  return s;
}

bool SetSpec::contains(const Eigen::VectorXd& x) const {
  switch (kind) {
    case Kind::halfspace:
      return x[axis] <= threshold;
    case Kind::box:
      for (int d = 0; d < lo.size(); ++d)
        if (x[d] < lo[d] || x[d] > hi[d]) return false;
      return true;
    case Kind::ball:
      return (x - center).norm() <= radius;
    case Kind::predicate:
      return member(x);
    case Kind::empty:
      return false;
  }
  return false;
}

double SetSpec::distance(const Eigen::VectorXd& x) const {
  switch (kind) {
    case Kind::halfspace:
      return std::max(0.0, x[axis] - threshold);
    case Kind::box: {
      double s = 0.0;
      for (int d = 0; d < lo.size(); ++d) {
        double e = std::max({lo[d] - x[d], 0.0, x[d] - hi[d]});
        s += e * e;
      }
      return std::sqrt(s);
    }
    case Kind::ball:
      return std::max(0.0, (x - center).norm() - radius);
    case Kind::empty:
      return kInf;
    case Kind::predicate:
      throw std::invalid_argument("SetSpec: no distance function for predicate sets");
  }
  return kInf;
}

namespace {

Eigen::VectorXd parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token == "inf")
      vals.push_back(kInf);
    else if (token == "-inf")
      vals.push_back(-kInf);
    else
      vals.push_back(std::stod(token));
  }
  Eigen::VectorXd v(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return v;
}

}  // namespace

SetSpec parse_set_spec(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  std::map<std::string, std::string> kv;
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("set spec: expected key=value: " + tok);
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  if (kind == "halfspace") return SetSpec::halfspace(std::stoi(kv.at("axis")), std::stod(kv.at("threshold")));
  if (kind == "box") return SetSpec::box(parse_vector(kv.at("lo")), parse_vector(kv.at("hi")));
  if (kind == "ball") return SetSpec::ball(parse_vector(kv.at("center")), std::stod(kv.at("radius")));
  if (kind == "empty") return SetSpec::empty_set();
  throw std::invalid_argument("set spec: unknown kind " + kind);
}

double set_measure(const SetSpec& a, const ProductMeasure& mu) {
  switch (a.kind) {
    case SetSpec::Kind::empty:
      return 0.0;
    case SetSpec::Kind::halfspace:
      return mu.factor_of_dim(a.axis).cdf1d(a.threshold);
    case SetSpec::Kind::box: {
      if (a.lo.size() != mu.total_dim())
        throw std::invalid_argument("set_measure: box dimension mismatch");
      double m = 1.0;
      for (int d = 0; d < mu.total_dim(); ++d) {
        const Factor& f = mu.factor_of_dim(d);
        m *= std::max(0.0, f.cdf1d(a.hi[d]) - f.cdf1d(a.lo[d]));
      }
      return m;
    }
    case SetSpec::Kind::ball:
    case SetSpec::Kind::predicate: {
      SampleCloud cloud = make_cloud(mu, 400'000, 0xba11);
      double s = 0.0;
      for (int k = 0; k < cloud.points.rows(); ++k)
        if (a.contains(cloud.points.row(k).transpose())) s += 1.0;
      return s / static_cast<double>(cloud.points.rows());
    }
  }
  return 0.0;
}

namespace {

// Quartic bump (15/(16w))(1 - (s/w)^2)^2 on [-w, w]; integrates to 1.
double bump_value(double s, double w) {
  if (std::abs(s) >= w) return 0.0;
  double u = s / w;
  double q = 1.0 - u * u;
  return 15.0 / (16.0 * w) * q * q;
}

// Membership crossings of u -> 1_A(x[coord <- u]) inside [center-w, center+w],
// located by a scan at w/8 resolution and bisection refinement.
void section_crossings(const SetSpec& a, int coord, Eigen::VectorXd& x, double center, double w,
                       std::vector<double>& out) {
  out.clear();
  const int cells = 16;
  double h = 2.0 * w / cells;
  auto inside = [&](double u) {
    x[coord] = u;
    return a.contains(x);
  };
  bool prev = inside(center - w);
  for (int k = 1; k <= cells; ++k) {
    double u = center - w + k * h;
    bool cur = inside(u);
    if (cur != prev) {
      double lo = u - h, hi = u;
      for (int it = 0; it < 50; ++it) {
        double mid = 0.5 * (lo + hi);
        if (inside(mid) == prev)
          lo = mid;
        else
          hi = mid;
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
}

// d_i f_eps(x) = sum over section-boundary crossings of +-psi(u_b - x_i)
// (integration by parts of -Int psi'(u - x_i) 1_A du).
double mollified_partial_abs(const SetSpec& a, int coord, Eigen::VectorXd x, double width,
                             std::vector<double>& scratch) {
  double center = x[coord];
  section_crossings(a, coord, x, center, width, scratch);
  double acc = 0.0;
  double sign = 1.0;
  // Crossings alternate directions; the absolute sum is what the L1 norm
  // of the derivative sees after the outer integral for interval sections,
  // and the signed sum is the honest derivative value.
  x[coord] = center - width;
  bool start_inside = a.contains(x);
  sign = start_inside ? -1.0 : 1.0;
  for (double u : scratch) {
    acc += sign * bump_value(u - center, width);
    sign = -sign;
  }
  return std::abs(acc);
}

double mollified_influence_once(const SetSpec& a, int coord, const ProductMeasure& mu, double width,
                                const MollifyOptions& opts, double* std_error) {
  std::vector<double> scratch;
  if (opts.mc_samples > 0) {
    SampleCloud cloud = make_cloud(mu, opts.mc_samples, opts.seed);
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < cloud.points.rows(); ++k) {
      double v = mollified_partial_abs(a, coord, cloud.points.row(k).transpose(), width, scratch);
      s += v;
      s2 += v * v;
    }
    int m = static_cast<int>(cloud.points.rows());
    s /= m;
    s2 /= m;
    if (std_error) *std_error = std::sqrt(std::max(0.0, s2 - s * s) / m);
    return s;
  }
  // Dense composite rule along the mollified coordinate (bump scale),
  // standard rules elsewhere.
  std::vector<Grid1D> dims;
  for (int d = 0; d < mu.total_dim(); ++d) {
    const Factor& f = mu.factor_of_dim(d);
    double r = f.truncation_radius();
    if (d == coord) {
      int panels = std::max(64, static_cast<int>(std::ceil(2.0 * r / width)));
      dims.push_back(density_grid([&f](double u) { return f.density1d(u); }, -r, r, panels, 8));
    } else if (f.kind == FactorKind::gaussian) {
      dims.push_back(gauss_hermite(opts.outer_nodes));
    } else {
      int panels = std::max(2, (opts.outer_nodes + 7) / 8);
      dims.push_back(density_grid([&f](double u) { return f.density1d(u); }, -r, r, panels, 8));
    }
  }
  TensorGrid grid(std::move(dims));
  if (std_error) *std_error = 0.0;
  return grid.integrate([&](const Eigen::VectorXd& x) {
    return mollified_partial_abs(a, coord, x, width, scratch);
  });
}

}  // namespace

GeometricInfluenceEstimate geometric_influence(const SetSpec& a, int i, const ProductMeasure& mu,
                                               const MollifyOptions& opts) {
  if (i < 0 || i >= mu.block_count())
    throw std::out_of_range("geometric_influence: block out of range");

  if (a.kind == SetSpec::Kind::empty) return {0.0, 0.0, "analytic"};

  if (a.kind == SetSpec::Kind::halfspace) {
    int block = mu.block_of_dim(a.axis);
    if (block != i) return {0.0, 0.0, "analytic"};
    return {mu.factor_of_dim(a.axis).density1d(a.threshold), 0.0, "analytic"};
  }

  if (a.kind == SetSpec::Kind::box) {
    if (a.lo.size() != mu.total_dim())
      throw std::invalid_argument("geometric_influence: box dimension mismatch");
    // Faces normal to the block's coordinates, weighted by the interval
    // masses of the remaining dimensions.
    std::vector<double> masses(mu.total_dim());
    for (int d = 0; d < mu.total_dim(); ++d) {
      const Factor& f = mu.factor_of_dim(d);
      masses[d] = std::max(0.0, f.cdf1d(a.hi[d]) - f.cdf1d(a.lo[d]));
    }
    double total = 0.0;
    for (int d = mu.block_offset(i); d < mu.block_offset(i) + mu.block_dim(i); ++d) {
      const Factor& f = mu.factor_of_dim(d);
      double face = 0.0;
      if (std::isfinite(a.lo[d])) face += f.density1d(a.lo[d]);
      if (std::isfinite(a.hi[d])) face += f.density1d(a.hi[d]);
      double rest = 1.0;
      for (int d2 = 0; d2 < mu.total_dim(); ++d2)
        if (d2 != d) rest *= masses[d2];
      total += face * rest;
    }
    return {total, 0.0, "analytic"};
  }

  // Mollified path: 1-d blocks, predicate sets need a bounding box.
  if (mu.block_dim(i) != 1)
    throw std::invalid_argument("geometric_influence: mollified path needs 1-d blocks");
  if (a.kind == SetSpec::Kind::predicate && a.bound_lo.size() == 0)
    throw std::invalid_argument("geometric_influence: predicate path without bounding box");
  if (opts.levels < 3)
    throw std::invalid_argument("geometric_influence: width schedule too short");

  int coord = mu.block_offset(i);
  std::vector<double> est(opts.levels), err(opts.levels);
  for (int k = 0; k < opts.levels; ++k) {
    double width = opts.width0 / std::pow(2.0, k);
    est[k] = mollified_influence_once(a, coord, mu, width, opts, &err[k]);
  }
  // One Richardson step in width^2 (symmetric bump => even error).
  std::vector<double> rich(opts.levels - 1);
  for (int k = 0; k + 1 < opts.levels; ++k) rich[k] = (4.0 * est[k + 1] - est[k]) / 3.0;
  double value = rich.back();
  double spread = std::abs(rich[rich.size() - 1] - rich[rich.size() - 2]);
  double mc_err = err.back() * (opts.mc_samples > 0 ? 4.0 / 3.0 : 0.0);
  return {value, spread + mc_err, opts.mc_samples > 0 ? "mc" : "mollified"};
}

InfluenceBoundReport corollary7_check(const SetSpec& a, const ProductMeasure& mu, double c,
                                      const MollifyOptions& opts) {
  double mass = set_measure(a, mu);
  if (!(mass > 0.0 && mass < 1.0))
    throw std::domain_error("corollary7_check: set measure is degenerate");
  InfluenceBoundReport rep;
  int n = mu.block_count();
  for (int i = 0; i < n; ++i) {
    GeometricInfluenceEstimate e = geometric_influence(a, i, mu, opts);
    rep.influences.push_back(e.value);
    rep.max_influence = std::max(rep.max_influence, e.value);
  }
  double aa = mass * (1.0 - mass);
  rep.bound_strong = aa * std::sqrt(std::log(n / aa)) / (c * n);
  rep.bound_weak = n > 1 ? aa * std::sqrt(std::log(static_cast<double>(n))) / (c * n) : 0.0;
  rep.minimal_c = aa * std::sqrt(std::log(n / aa)) / (n * std::max(rep.max_influence, 1e-300));
  rep.pass = rep.max_influence >= rep.bound_strong - pass_slack(rep.bound_strong) &&
             rep.max_influence >= rep.bound_weak - pass_slack(rep.bound_weak);
  return rep;
}

double isoperimetric_profile(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::domain_error("isoperimetric_profile: a outside [0,1]");
  double small = std::min(a, 1.0 - a);
  if (small == 0.0) return 0.0;
  return normal_pdf(normal_quantile(small));
}

Estimate minkowski_content(const SetSpec& a, const ProductMeasure& mu,
                           const std::vector<double>& widths, int mc_samples, std::uint64_t seed) {
  if (widths.size() < 3)
    throw std::invalid_argument("minkowski_content: schedule needs at least 3 widths");
  if (a.kind == SetSpec::Kind::predicate)
    throw std::invalid_argument("minkowski_content: predicate sets unsupported");
  if (a.kind == SetSpec::Kind::empty) return {"minkowski-content", 0.0, 0.0, "analytic"};

  std::vector<double> ratios;
  double mc_noise = 0.0;
  if (a.kind == SetSpec::Kind::halfspace) {
    const Factor& f = mu.factor_of_dim(a.axis);
    double base = f.cdf1d(a.threshold);
    for (double eps : widths) ratios.push_back((f.cdf1d(a.threshold + eps) - base) / eps);
  } else {
    // Common random numbers across widths: the shell count drives the noise.
    SampleCloud cloud = make_cloud(mu, mc_samples, seed);
    int m = static_cast<int>(cloud.points.rows());
    std::vector<double> dist(m);
    for (int k = 0; k < m; ++k) dist[k] = a.distance(cloud.points.row(k).transpose());
    double inside = 0.0;
    for (double d : dist)
      if (d == 0.0) inside += 1.0;
    for (double eps : widths) {
      double cnt = 0.0;
      for (double d : dist)
        if (d <= eps) cnt += 1.0;
      ratios.push_back((cnt - inside) / m / eps);
      double shell = std::max(cnt - inside, 1.0) / m;
      mc_noise = std::max(mc_noise, std::sqrt(shell / m) / eps);
    }
  }
  // Ratios behave like content + c eps: one linear Richardson step per
  // adjacent pair of widths.
  std::vector<double> rich;
  for (std::size_t k = 0; k + 1 < ratios.size(); ++k) {
    double r = widths[k + 1] / widths[k];
    rich.push_back((ratios[k + 1] - r * ratios[k]) / (1.0 - r));
  }
  double value = rich.back();
  double err = std::abs(rich[rich.size() - 1] - rich[rich.size() - 2]) + 3.0 * mc_noise;
  return {"minkowski-content", value, err, a.kind == SetSpec::Kind::halfspace ? "extrapolated" : "mc"};
}

PointwiseReport gradient_commutation_check(const SmoothFunction& f, double t,
                                           const ProductMeasure& mu, double kappa,
                                           const std::vector<Eigen::VectorXd>& points, int nodes,
                                           double slack) {
  if (t < 0.0) throw std::domain_error("gradient_commutation_check: t must be >= 0");
  double worst = -kInf;
  double scale = std::exp(kappa * t);
  for (const auto& x : points) {
    Eigen::VectorXd lhs_full = t == 0.0 ? f.gradient(x) : ou_gradient(f.value, t, x, mu, nodes);
    for (int i = 0; i < mu.block_count(); ++i) {
      double lhs = lhs_full.segment(mu.block_offset(i), mu.block_dim(i)).norm();
      SmoothFunction gi;
      gi.value = [&f, &mu, i](const Eigen::VectorXd& z) {
        return f.gradient(z).segment(mu.block_offset(i), mu.block_dim(i)).norm();
      };
      double rhs = scale * ou_apply(gi, t, x, mu, nodes);
      worst = std::max(worst, lhs - rhs);
    }
  }
  return {worst, worst <= slack};
}

GradientBoundReport gradient_bound_check(const SmoothFunction& f, double t,
                                         const ProductMeasure& mu,
                                         const std::vector<Eigen::VectorXd>& points, int nodes) {
  if (!f.bounded_by_one)
    throw std::invalid_argument("gradient_bound_check: requires the |f| <= 1 flag");
  double kappa = mu.curvature_kappa();
  double tmax = kappa > 0.0 ? std::min(1.0, 1.0 / (2.0 * kappa)) : 1.0;
  if (!(t > 0.0 && t <= tmax))
    throw std::domain_error("gradient_bound_check: t outside the admissible range");
  double sup = 0.0;
  for (const auto& x : points)
    sup = std::max(sup, ou_gradient(f.value, t, x, mu, nodes).norm());
  double scaled = sup * std::sqrt(t);
  return {scaled, scaled <= 1.0 + 1e-6};
}

ExpPowerReport exp_power_influence_report(const SetSpec& a, double alpha, const ProductMeasure& mu,
                                          double c) {
  if (!(alpha > 1.0))
    throw std::domain_error("exp_power_influence_report: alpha must exceed 1");
  ExpPowerReport rep;
  rep.alpha = alpha;
  if (alpha < 2.0) {
    rep.beta = 2.0 * (1.0 - 1.0 / alpha);
  } else {
    rep.beta = 1.0;
    rep.fallback_beta1 = true;
  }
  rep.constant_used = c;
  double mass = set_measure(a, mu);
  if (!(mass > 0.0 && mass < 1.0))
    throw std::domain_error("exp_power_influence_report: set measure is degenerate");
  int n = mu.block_count();
  for (int i = 0; i < n; ++i)
    rep.max_influence = std::max(rep.max_influence, geometric_influence(a, i, mu).value);
  double aa = mass * (1.0 - mass);
  rep.bound = n > 1 ? aa * std::pow(std::log(static_cast<double>(n)), 0.5 * rep.beta) / (c * n) : 0.0;
  rep.pass = rep.max_influence >= rep.bound - pass_slack(rep.bound);
  return rep;
}

}  // namespace talab
