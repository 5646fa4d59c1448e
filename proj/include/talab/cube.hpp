#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace talab {

/// The biased discrete cube {-1,+1}^N carrying the product measure that
/// gives weight p to +1 in every coordinate. Points are indexed in
/// binary-counter order with bit i set iff x_i = +1; coordinates are
/// 0-based. Functions are stored densely, so N is capped at 24
/// (2^24 doubles = 128 MiB per function).
class BiasedCube {
 public:
  static constexpr int kMaxDim = 24;

  BiasedCube(int dim, double p);

  int dim() const { return dim_; }
  double p() const { return p_; }
  double q() const { return 1.0 - p_; }
  std::size_t size() const { return std::size_t{1} << dim_; }

  double weight(std::uint32_t x) const { return weight_by_ones_[popcount(x)]; }

  bool operator==(const BiasedCube& o) const { return dim_ == o.dim_ && p_ == o.p_; }

  static int popcount(std::uint32_t x);

 private:
  int dim_;
  double p_;
  std::vector<double> weight_by_ones_;  // p^k q^{N-k} indexed by #(+1) coordinates
};

/// A dense real-valued function on a BiasedCube.
struct CubeFunction {
  BiasedCube cube;
  Eigen::VectorXd values;  // length 2^N

  CubeFunction(BiasedCube c, Eigen::VectorXd v);

  static CubeFunction constant(const BiasedCube& c, double value);
  // The coordinate function x -> x_i, values in {-1,+1}.
  static CubeFunction coordinate(const BiasedCube& c, int i);
  // x -> x_0 x_1 ... x_{N-1}.
  static CubeFunction parity(const BiasedCube& c);
  // Indicator of {x : member(index) is true}, values in {0,1}.
  static CubeFunction indicator(const BiasedCube& c,
                                const std::function<bool(std::uint32_t)>& member);
  static CubeFunction dictator_set(const BiasedCube& c, int i);  // 1_{x_i = +1}
  static CubeFunction majority_set(const BiasedCube& c);         // 1_{#(+1) > N/2}, odd N

  bool is_indicator() const;
};

struct InfluenceProfile {
  std::vector<double> influence;  // length N, each in [0,1]
};

double integral(const CubeFunction& f);
double variance(const CubeFunction& f);

// Ent(f) = Int f log f - Int f log Int f. Requires f >= 0 (0 log 0 = 0);
// negative values are a domain error.
double entropy(const CubeFunction& f);

// (Int |f|^r dmu)^{1/r}; r may be +infinity. r < 1 is a domain error.
double lp_norm(const CubeFunction& f, double r);

// D_i f(x) = f(tau_i x) - f(x) where tau_i flips coordinate i.
CubeFunction discrete_derivative(const CubeFunction& f, int i);

// L_i f = E_i f - f, the one-coordinate projection generator; E_i averages
// coordinate i against its two-point factor measure.
CubeFunction coordinate_generator(const CubeFunction& f, int i);

// I_i(A) = mu({x in A : tau_i x not in A}) for an indicator A.
double influence(const CubeFunction& indicator_a, int i);
InfluenceProfile influence_profile(const CubeFunction& indicator_a);

// Prefactor of the biased-cube variance bound, normalized so that it
// equals C at p = 1/2; continuous across p = q via the two-point
// log-Sobolev constant.
double biased_prefactor(double p, double c);

// Two-point log-Sobolev constant 2(p-q)/(log p - log q), = 1 at p = q.
double two_point_log_sobolev(double p);

// Right side of the biased-cube Talagrand bound: biased_prefactor(p,C) *
// sum_i ||D_i f||_2^2 / (1 + log(||D_i f||_2 / 2 sqrt(pq) ||D_i f||_1));
// zero directions contribute 0.
double talagrand_rhs(const CubeFunction& f, double c);

struct KklResult {
  int coordinate;
  double influence;
  double bound;  // the lower bound the returned influence certifies
};

// Influence extraction: if some I_i exceeds sqrt(a(1-a)/N) return it with
// that threshold; otherwise return the maximizer of the summand
// 2I/(1+log(1/sqrt(2I))) together with the bound a(1-a) log N / (8CN).
KklResult kkl_extract(const CubeFunction& indicator_a, double c);

double kkl_bound(double a, int n, double c);

// phi(x) = x^2/log(e+x) for x >= 1, linear through the origin below 1.
double orlicz_phi(double x);

// Luxemburg norm inf{c>0 : Int phi(|g|/c) dmu <= 1}; 0 for g = 0.
double orlicz_norm(const CubeFunction& g);

// Character coefficients indexed by subset mask (p = 1/2 only). Parseval:
// sum of squares equals ||f||_2^2; the empty-set coefficient is Int f.
Eigen::VectorXd walsh_spectrum(const CubeFunction& f);

// Flat text format: header "cube N=<int> p=<decimal>", then 2^N lines
// "index value" in binary-counter order.
void write_cube_function(std::ostream& os, const CubeFunction& f);
CubeFunction read_cube_function(std::istream& is);

class Rng;

// Random dense function with values uniform in [lo,hi].
CubeFunction random_cube_function(const BiasedCube& c, Rng& rng, double lo = -1.0, double hi = 1.0);
CubeFunction random_monotone_set(const BiasedCube& c, Rng& rng);
CubeFunction tribes_set(const BiasedCube& c, int block);

}  // namespace talab
