#include "talab/cube.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "talab/numeric.hpp"
#include "talab/rng.hpp"

namespace talab {

int BiasedCube::popcount(std::uint32_t x) { return std::popcount(x); }

BiasedCube::BiasedCube(int dim, double p) : dim_(dim), p_(p) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("BiasedCube: dim outside [1,24]");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("BiasedCube: p outside (0,1)");
  weight_by_ones_.resize(dim + 1);
  for (int k = 0; k <= dim; ++k)
    weight_by_ones_[k] = std::pow(p, k) * std::pow(1.0 - p, dim - k);
}

CubeFunction::CubeFunction(BiasedCube c, Eigen::VectorXd v) : cube(c), values(std::move(v)) {
  if (static_cast<std::size_t>(values.size()) != cube.size())
    throw std::invalid_argument("CubeFunction: value count must be 2^N");
}

CubeFunction CubeFunction::constant(const BiasedCube& c, double value) {
  return {c, Eigen::VectorXd::Constant(c.size(), value)};
}

CubeFunction CubeFunction::coordinate(const BiasedCube& c, int i) {
  if (i < 0 || i >= c.dim()) throw std::out_of_range("coordinate: index out of range");
  Eigen::VectorXd v(c.size());
  for (std::uint32_t x = 0; x < c.size(); ++x) v[x] = (x >> i) & 1u ? 1.0 : -1.0;
  return {c, std::move(v)};
}

CubeFunction CubeFunction::parity(const BiasedCube& c) {
  Eigen::VectorXd v(c.size());
  for (std::uint32_t x = 0; x < c.size(); ++x)
    v[x] = BiasedCube::popcount(x) % 2 == c.dim() % 2 ? 1.0 : -1.0;
  return {c, std::move(v)};
}

CubeFunction CubeFunction::indicator(const BiasedCube& c,
                                     const std::function<bool(std::uint32_t)>& member) {
  Eigen::VectorXd v(c.size());
  for (std::uint32_t x = 0; x < c.size(); ++x) v[x] = member(x) ? 1.0 : 0.0;
  return {c, std::move(v)};
}

CubeFunction CubeFunction::dictator_set(const BiasedCube& c, int i) {
  if (i < 0 || i >= c.dim()) throw std::out_of_range("dictator_set: index out of range");
  return indicator(c, [i](std::uint32_t x) { return ((x >> i) & 1u) != 0; });
}

CubeFunction CubeFunction::majority_set(const BiasedCube& c) {
  if (c.dim() % 2 == 0) throw std::invalid_argument("majority_set: N must be odd");
  int n = c.dim();
  return indicator(c, [n](std::uint32_t x) { return 2 * BiasedCube::popcount(x) > n; });
}

bool CubeFunction::is_indicator() const {
  for (double v : values)
    if (v != 0.0 && v != 1.0) return false;
  return true;
}

double integral(const CubeFunction& f) {
  double s = 0.0;
  for (std::uint32_t x = 0; x < f.cube.size(); ++x) s += f.cube.weight(x) * f.values[x];
  return s;
}

double variance(const CubeFunction& f) {
  double m = 0.0, m2 = 0.0;
  for (std::uint32_t x = 0; x < f.cube.size(); ++x) {
    double w = f.cube.weight(x);
    m += w * f.values[x];
    m2 += w * f.values[x] * f.values[x];
  }
  return std::max(0.0, m2 - m * m);
}

double entropy(const CubeFunction& f) {
  double m = 0.0, s = 0.0;
  for (std::uint32_t x = 0; x < f.cube.size(); ++x) {
    double v = f.values[x];
    if (v < 0.0) throw std::domain_error("entropy: negative value");
    double w = f.cube.weight(x);
    m += w * v;
    if (v > 0.0) s += w * v * std::log(v);
  }
  if (m > 0.0) s -= m * std::log(m);
  return std::max(0.0, s);
}

double lp_norm(const CubeFunction& f, double r) {
  if (std::isinf(r) && r > 0) return f.values.cwiseAbs().maxCoeff();
  if (!(r >= 1.0)) throw std::domain_error("lp_norm: r must be >= 1");
  double s = 0.0;
  for (std::uint32_t x = 0; x < f.cube.size(); ++x)
    s += f.cube.weight(x) * std::pow(std::abs(f.values[x]), r);
  return std::pow(s, 1.0 / r);
}

CubeFunction discrete_derivative(const CubeFunction& f, int i) {
  if (i < 0 || i >= f.cube.dim()) throw std::out_of_range("discrete_derivative: index out of range");
  Eigen::VectorXd v(f.cube.size());
  std::uint32_t bit = 1u << i;
  for (std::uint32_t x = 0; x < f.cube.size(); ++x) v[x] = f.values[x ^ bit] - f.values[x];
  return {f.cube, std::move(v)};
}

CubeFunction coordinate_generator(const CubeFunction& f, int i) {
  if (i < 0 || i >= f.cube.dim()) throw std::out_of_range("coordinate_generator: index out of range");
  Eigen::VectorXd v(f.cube.size());
  std::uint32_t bit = 1u << i;
  double p = f.cube.p(), q = f.cube.q();
  for (std::uint32_t x = 0; x < f.cube.size(); ++x) {
    double mean = p * f.values[x | bit] + q * f.values[x & ~bit];
    v[x] = mean - f.values[x];
  }
  return {f.cube, std::move(v)};
}

double influence(const CubeFunction& a, int i) {
  if (i < 0 || i >= a.cube.dim()) throw std::out_of_range("influence: index out of range");
  if (!a.is_indicator()) throw std::invalid_argument("influence: function is not an indicator");
  std::uint32_t bit = 1u << i;
  double s = 0.0;
  for (std::uint32_t x = 0; x < a.cube.size(); ++x)
    if (a.values[x] == 1.0 && a.values[x ^ bit] == 0.0) s += a.cube.weight(x);
  return s;
}

InfluenceProfile influence_profile(const CubeFunction& a) {
  InfluenceProfile prof;
  prof.influence.resize(a.cube.dim());
  for (int i = 0; i < a.cube.dim(); ++i) prof.influence[i] = influence(a, i);
  return prof;
}

double two_point_log_sobolev(double p) {
  double q = 1.0 - p;
  if (std::abs(p - q) < 1e-12) return 1.0;
  return 2.0 * (p - q) / (std::log(p) - std::log(q));
}

double biased_prefactor(double p, double c) {
  if (!(c > 0.0)) throw std::domain_error("biased_prefactor: C must be positive");
  double q = 1.0 - p;
  return 4.0 * c * p * q / two_point_log_sobolev(p);
}

double talagrand_rhs(const CubeFunction& f, double c) {
  double p = f.cube.p(), q = f.cube.q();
  double scale = 2.0 * std::sqrt(p * q);
  double sum = 0.0;
  for (int i = 0; i < f.cube.dim(); ++i) {
    CubeFunction d = discrete_derivative(f, i);
    double n2 = lp_norm(d, 2.0);
    if (n2 == 0.0) continue;
    double n1 = lp_norm(d, 1.0);
    sum += n2 * n2 / (1.0 + std::log(n2 / (scale * n1)));
  }
  return biased_prefactor(p, c) * sum;
}

double kkl_bound(double a, int n, double c) {
  return a * (1.0 - a) * std::log(static_cast<double>(n)) / (8.0 * c * n);
}

KklResult kkl_extract(const CubeFunction& a, double c) {
  if (!a.is_indicator()) throw std::invalid_argument("kkl_extract: function is not an indicator");
  double mass = integral(a);
  if (!(mass > 0.0 && mass < 1.0)) throw std::domain_error("kkl_extract: set measure is 0 or 1");
  int n = a.cube.dim();
  InfluenceProfile prof = influence_profile(a);
  double threshold = std::sqrt(mass * (1.0 - mass) / n);
  for (int i = 0; i < n; ++i)
    if (prof.influence[i] > threshold) return {i, prof.influence[i], threshold};
  // All influences small: the summand maximizer carries the logarithmic bound.
  int best = 0;
  double best_summand = -1.0;
  for (int i = 0; i < n; ++i) {
    double ii = prof.influence[i];
    double summand = ii > 0.0 ? 2.0 * ii / (1.0 + std::log(1.0 / std::sqrt(2.0 * ii))) : 0.0;
    if (summand > best_summand) {
      best_summand = summand;
      best = i;
    }
  }
  return {best, prof.influence[best], kkl_bound(mass, n, c)};
}

double orlicz_phi(double x) {
  static const double slope = 1.0 / std::log(std::exp(1.0) + 1.0);
  if (x < 0.0) x = -x;
  if (x <= 1.0) return slope * x;
  return x * x / std::log(std::exp(1.0) + x);
}

double orlicz_norm(const CubeFunction& g) {
  double max_abs = g.values.cwiseAbs().maxCoeff();
  if (max_abs == 0.0) return 0.0;
  auto mean_phi = [&](double c) {
    double s = 0.0;
    for (std::uint32_t x = 0; x < g.cube.size(); ++x)
      s += g.cube.weight(x) * orlicz_phi(std::abs(g.values[x]) / c);
    return s - 1.0;
  };
  // mean_phi is decreasing in c; bracket the unit level set.
  double hi = max_abs;
  while (mean_phi(hi) > 0.0) hi *= 2.0;
  double lo = hi;
  while (mean_phi(lo) < 0.0) lo *= 0.5;
  return bisect(mean_phi, lo, hi, 1e-11);
}

Eigen::VectorXd walsh_spectrum(const CubeFunction& f) {
  if (std::abs(f.cube.p() - 0.5) > 1e-15)
    throw std::domain_error("walsh_spectrum: requires p = 1/2");
  Eigen::VectorXd w = f.values;
  std::size_t n = f.cube.size();
  for (std::size_t len = 1; len < n; len <<= 1)
    for (std::size_t i = 0; i < n; i += len << 1)
      for (std::size_t j = i; j < i + len; ++j) {
        double a = w[j], b = w[j + len];
        w[j] = a + b;
        w[j + len] = a - b;
      }
  // Convert the {0,1}-character transform to {-1,+1} characters: chi_S
  // picks up (-1)^{|S|} relative to bit parity, and the measure is 2^{-N}.
  double inv = 1.0 / static_cast<double>(n);
  for (std::uint32_t s = 0; s < n; ++s)
    w[s] *= BiasedCube::popcount(s) % 2 ? -inv : inv;
  return w;
}

void write_cube_function(std::ostream& os, const CubeFunction& f) {
  os.precision(17);
  os << "cube N=" << f.cube.dim() << " p=" << f.cube.p() << "\n";
  for (std::uint32_t x = 0; x < f.cube.size(); ++x) os << x << " " << f.values[x] << "\n";
}

CubeFunction read_cube_function(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("cube read: missing header");
  int n = 0;
  double p = 0.0;
  if (std::sscanf(header.c_str(), "cube N=%d p=%lf", &n, &p) != 2)
    throw std::runtime_error("cube read: malformed header: " + header);
  BiasedCube cube(n, p);
  Eigen::VectorXd v(cube.size());
  for (std::size_t k = 0; k < cube.size(); ++k) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("cube read: truncated value list");
    std::istringstream ls(line);
    std::size_t idx;
    double val;
    if (!(ls >> idx >> val) || idx != k)
      throw std::runtime_error("cube read: bad line for index " + std::to_string(k));
    v[k] = val;
  }
  return {cube, std::move(v)};
}

CubeFunction random_cube_function(const BiasedCube& c, Rng& rng, double lo, double hi) {
  Eigen::VectorXd v(c.size());
  for (std::uint32_t x = 0; x < c.size(); ++x) v[x] = rng.uniform(lo, hi);
  return {c, std::move(v)};
}

CubeFunction random_monotone_set(const BiasedCube& c, Rng& rng) {
  // Random weighted threshold set: monotone by construction. Resample the
  // threshold until the set is proper.
  int n = c.dim();
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = rng.uniform(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    double total = 0.0;
    for (double wi : w) total += wi;
    double theta = rng.uniform(-total, total);
    CubeFunction a = CubeFunction::indicator(c, [&](std::uint32_t x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += ((x >> i) & 1u) ? w[i] : -w[i];
      return s > theta;
    });
    double mass = integral(a);
    if (mass > 0.0 && mass < 1.0) return a;
  }
  return CubeFunction::dictator_set(c, 0);
}

CubeFunction tribes_set(const BiasedCube& c, int block) {
  if (block < 1) throw std::invalid_argument("tribes_set: block must be >= 1");
  int n = c.dim();
  return CubeFunction::indicator(c, [n, block](std::uint32_t x) {
    for (int start = 0; start + block <= n; start += block) {
      bool all = true;
      for (int j = 0; j < block; ++j)
        if (!((x >> (start + j)) & 1u)) {
          all = false;
          break;
        }
      if (all) return true;
    }
    return false;
  });
}

}  // namespace talab
