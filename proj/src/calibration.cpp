#include "talab/calibration.hpp"

#include <cmath>
#include <stdexcept>

#include "talab/cube.hpp"
#include "talab/gauss.hpp"
#include "talab/geom.hpp"
#include "talab/rng.hpp"
#include "talab/talagrand.hpp"

namespace talab {

namespace {

// Norm-comparison constant of the Orlicz variance bound:
// sup Int_1^2 ||g||_v^2 dv / ||g||_phi^2 over a mixed cube corpus.
double calibrate_eq17_cphi(std::uint64_t seed) {
  Rng rng(seed);
  double sup = 0.0;
  for (int k = 0; k < 2000; ++k) {
    int n = 2 + k % 7;  // N <= 8
    ProductChain pc = cube_product_chain(n, 0.5);
    Eigen::VectorXd g;
    switch (k % 4) {
      case 0:
        g = random_chain_function(pc.chain, rng);
        break;
      case 1: {
        Eigen::VectorXd f = random_chain_function(pc.chain, rng);
        g = pc.decomposition.directions[k % n](f);
        break;
      }
      case 2: {
        g.resize(pc.chain.size());
        for (int x = 0; x < pc.chain.size(); ++x) g[x] = rng.uniform() < 0.3 ? 1.0 : 0.0;
        break;
      }
      default: {
        g.resize(pc.chain.size());
        for (int x = 0; x < pc.chain.size(); ++x) g[x] = std::exp(1.5 * rng.uniform(-1.0, 1.0));
        break;
      }
    }
    double on = orlicz_norm(pc.chain, g);
    if (on == 0.0) continue;
    sup = std::max(sup, interpolation_integral(g, pc.chain.measure()) / (on * on));
  }
  return sup;
}

struct GaussCorpusItem {
  SmoothFunction f;
  ProductMeasure mu;
  TensorGrid grid;
};

// Bounded smooth functions on small Gaussian products: mollified
// half-space ramps across three widths plus tanh ramps.
std::vector<GaussCorpusItem> bounded_gauss_corpus(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GaussCorpusItem> corpus;
  for (int n : {1, 2, 3}) {
    ProductMeasure mu = ProductMeasure::standard_gaussian(n);
    for (double w : {0.3, 0.1, 0.03}) {
      double threshold = rng.uniform(-0.5, 0.5);
      int axis = static_cast<int>(rng.next_u64() % n);
      corpus.push_back({SmoothFunction::erf_ramp(n, axis, threshold, w), mu,
                        make_grid_dense_axis(mu, 16, axis, w / 4.0)});
    }
    Polynomial sum = Polynomial::constant(n, rng.uniform(-0.3, 0.3));
    for (int d = 0; d < n; ++d)
      sum = sum + Polynomial::variable(n, d) * rng.uniform(0.4, 1.0);
    corpus.push_back({SmoothFunction::tanh_of(sum, 1.0), mu, make_grid(mu, 48)});
    corpus.push_back({SmoothFunction::tanh_of(sum, 3.0), mu, make_grid(mu, 64)});
  }
  return corpus;
}

double calibrate_thm6_c0(std::uint64_t seed) {
  double sup = 0.0;
  for (const auto& item : bounded_gauss_corpus(seed)) {
    double var = variance_grid(item.f, item.grid);
    double sum = 0.0;
    for (int i = 0; i < item.mu.block_count(); ++i)
      sum += l1_summand(gradient_block_norm(item.f, item.mu, i, 1.0, item.grid).value);
    if (sum <= 0.0) continue;
    double rho = item.mu.rho();
    double t = std::min(1.0, 1.0 / (2.0 * rho));
    sup = std::max(sup, var * std::pow(rho, 1.5) * t / sum);
  }
  return sup;
}

double calibrate_qinterp(std::uint64_t seed) {
  double sup = 0.0;
  for (const auto& item : bounded_gauss_corpus(seed)) {
    for (double q : {1.0, 1.25, 1.5, 1.75, 2.0}) {
      double var = variance_grid(item.f, item.grid);
      double sum = 0.0;
      for (int i = 0; i < item.mu.block_count(); ++i) {
        double nq = gradient_block_norm(item.f, item.mu, i, q, item.grid).value;
        double n1 = gradient_block_norm(item.f, item.mu, i, 1.0, item.grid).value;
        sum += q_summand(q, nq, n1);
      }
      if (sum > 0.0) sup = std::max(sup, var / sum);
    }
  }
  return sup;
}

std::vector<SmoothFunction> sphere_corpus(int n, std::uint64_t seed) {
  Rng rng(seed + n);
  std::vector<SmoothFunction> corpus;
  for (double scale : {5.0, 8.0})
    for (double cap : {0.0, 0.4}) {
      Polynomial shifted = Polynomial::variable(n, 0) + Polynomial::constant(n, -cap);
      corpus.push_back(SmoothFunction::tanh_of(shifted, scale));
    }
  Polynomial mix(n);
  for (int d = 0; d < n; ++d) mix = mix + Polynomial::variable(n, d) * rng.uniform(0.3, 1.0);
  corpus.push_back(SmoothFunction::tanh_of(mix, 2.0));
  return corpus;
}

double calibrate_thm8(std::uint64_t seed) {
  double sup = 0.0;
  for (int n : {3, 4}) {
    SphereModel model{n, seed, 100'000};
    for (const auto& f : sphere_corpus(n, seed)) {
      McInequalityReport probe = theorem8_report(f, model, 1.0);
      if (probe.report.rhs > 0.0) sup = std::max(sup, probe.report.lhs / probe.report.rhs);
    }
  }
  return sup;
}

double calibrate_prop9(std::uint64_t seed) {
  Rng rng(seed);
  double sup = 0.0;
  for (int n : {2, 3}) {
    ProductMeasure mu = ProductMeasure::gaussian_block(n);
    std::vector<SubspaceDecomposition> decomps;
    decomps.push_back(coordinate_decomposition(n));
    decomps.push_back(loomis_whitney(n));
    // Each item carries a grid matched to its sharpest feature.
    std::vector<std::pair<SmoothFunction, TensorGrid>> fs;
    Polynomial sum(n);
    for (int d = 0; d < n; ++d) sum = sum + Polynomial::variable(n, d) * rng.uniform(0.5, 1.0);
    fs.emplace_back(SmoothFunction::tanh_of(sum, 1.0), make_grid(mu, 48));
    fs.emplace_back(SmoothFunction::tanh_of(Polynomial::variable(n, 0), 4.0),
                    make_grid_dense_axis(mu, 24, 0, 0.05));
    fs.emplace_back(SmoothFunction::erf_ramp(n, 0, 0.1, 0.1),
                    make_grid_dense_axis(mu, 24, 0, 0.025));
    for (const auto& d : decomps)
      for (const auto& [f, grid] : fs) {
        InequalityReport probe = proposition9_report(f, d, grid, 1.0);
        if (probe.rhs > 0.0) sup = std::max(sup, probe.lhs / probe.rhs);
      }
  }
  return sup;
}

double calibrate_exp_power(std::uint64_t seed) {
  Rng rng(seed);
  double sup = 0.0;
  for (double alpha : {1.2, 1.5, 1.8}) {
    for (int n : {2, 4}) {
      std::vector<Factor> fs(n, Factor::exp_power_factor(alpha));
      ProductMeasure mu(fs);
      for (int k = 0; k < 3; ++k) {
        double threshold = rng.uniform(-0.5, 0.5);
        ExpPowerReport r =
            exp_power_influence_report(SetSpec::halfspace(0, threshold), alpha, mu, 1.0);
        if (r.max_influence > 0.0 && r.bound > 0.0)
          sup = std::max(sup, r.bound / r.max_influence);
      }
    }
  }
  return std::max(sup, 1.0);
}

double calibrate_eq28(std::uint64_t seed) {
  Rng rng(seed);
  double sup = 0.0;
  ProductMeasure mu2 = ProductMeasure::standard_gaussian(2);
  ProductMeasure mu3 = ProductMeasure::standard_gaussian(3);
  for (int k = 0; k < 6; ++k) {
    double t = rng.uniform(-1.0, 1.0);
    SectionBoundaryReport r = section_boundary_check(SetSpec::halfspace(0, t), 1, mu3, 1.0);
    if (r.averaged_boundary > 0.0) sup = std::max(sup, r.bound / r.averaged_boundary);
  }
  for (int k = 0; k < 4; ++k) {
    Eigen::VectorXd lo(2), hi(2);
    lo << rng.uniform(-1.5, -0.5), rng.uniform(-1.5, -0.5);
    hi << rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5);
    SectionBoundaryReport r = section_boundary_check(SetSpec::box(lo, hi), 0, mu2, 1.0);
    if (r.averaged_boundary > 0.0) sup = std::max(sup, r.bound / r.averaged_boundary);
  }
  return std::max(sup, 1.0);
}

}  // namespace

const std::vector<CalibratedConstant>& calibrated_constants() {
  static const std::vector<CalibratedConstant> table = {
      {"eq17-cphi", 1.3565948178164133, 0x0c0ffee1ull,
       "Orlicz norm comparison sup over the cube corpus"},
      {"thm6-c0", 0.39909424796150261, 0x0c0ffee2ull,
       "L1 variance bound scalar c0 (Gaussian products)"},
      {"qinterp-c", 0.80187931028927184, 0x0c0ffee3ull,
       "interpolated q-family constant (q grid, same corpus)"},
      {"thm8-c", 0.44737532338713326, 0x0c0ffee4ull,
       "sphere L1 variance bound constant (caps corpus)"},
      {"prop9-c", 0.72813036399066511, 0x0c0ffee5ull,
       "Brascamp-Lieb L1 variance bound constant"},
      {"exp-power-c", 1.0, 0x0c0ffee6ull, "exp-power influence bound constant"},
      {"eq28-c", 1.2580709432331136, 0x0c0ffee7ull, "sectional boundary bound constant"},
  };
  return table;
}

const CalibratedConstant& calibrated(const std::string& id) {
  for (const auto& c : calibrated_constants())
    if (c.id == id) return c;
  throw std::invalid_argument("calibrated: unknown constant id " + id);
}

double recalibrate(const std::string& id, std::uint64_t corpus_seed) {
  if (id == "eq17-cphi") return calibrate_eq17_cphi(corpus_seed);
  if (id == "thm6-c0") return calibrate_thm6_c0(corpus_seed);
  if (id == "qinterp-c") return calibrate_qinterp(corpus_seed);
  if (id == "thm8-c") return calibrate_thm8(corpus_seed);
  if (id == "prop9-c") return calibrate_prop9(corpus_seed);
  if (id == "exp-power-c") return calibrate_exp_power(corpus_seed);
  if (id == "eq28-c") return calibrate_eq28(corpus_seed);
  throw std::invalid_argument("recalibrate: unknown constant id " + id);
}

}  // namespace talab
