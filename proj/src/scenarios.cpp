#include "talab/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "talab/calibration.hpp"
#include "talab/cayley.hpp"
#include "talab/chain.hpp"
#include "talab/cube.hpp"
#include "talab/gauss.hpp"
#include "talab/geom.hpp"
#include "talab/numeric.hpp"
#include "talab/polynomial.hpp"
#include "talab/rng.hpp"
#include "talab/talagrand.hpp"
#include "talab/version.hpp"

namespace talab {

namespace {

const double kE = std::exp(1.0);

int param_int(const ParamMap& params, const std::string& key) {
  return std::stoi(params.at(key));
}

double param_double(const ParamMap& params, const std::string& key) {
  return std::stod(params.at(key));
}

std::vector<double> param_list(const ParamMap& params, const std::string& key) {
  std::vector<double> out;
  std::istringstream in(params.at(key));
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<int> param_int_list(const ParamMap& params, const std::string& key) {
  std::vector<int> out;
  for (double v : param_list(params, key)) out.push_back(static_cast<int>(v));
  return out;
}

InequalityReport tolerance_report(std::string id, std::string model, double deviation,
                                  double tolerance) {
  return make_report(std::move(id), std::move(model), deviation, tolerance, tolerance);
}

// --- cube/chain suites ---------------------------------------------------

ScenarioOutput run_logsob_two_point(const ParamMap& p, std::uint64_t) {
  ScenarioOutput out;
  for (double pv : param_list(p, "p_values")) {
    FiniteChain c = two_point_chain(pv);
    double exact = logsob_constant(c, LogSobMode::exact_two_point);
    double numeric = logsob_constant(c, LogSobMode::numeric);
    std::ostringstream model;
    model << "two-point p=" << pv;
    out.estimates.push_back({"logsob-exact " + model.str(), exact, 0.0, "analytic"});
    out.estimates.push_back({"logsob-numeric " + model.str(), numeric, 0.0, "optimizer"});
    out.reports.push_back(
        tolerance_report("logsob-two-point", model.str(), std::abs(numeric - exact), 0.01 * exact));
  }
  return out;
}

ScenarioOutput run_chain_spectra(const ParamMap&, std::uint64_t) {
  ScenarioOutput out;
  for (int n : {3, 4}) {
    PermutationGroup g = symmetric_group(n);
    CayleyChain c = build_cayley_chain(g.table, g.transpositions);
    double gap = spectral_gap(c.chain);
    double expect = 2.0 / (n - 1);
    std::ostringstream model;
    model << "S_" << n << " transposition walk";
    out.estimates.push_back({"spectral-gap " + model.str(), gap, 0.0, "eigensolve"});
    out.reports.push_back(
        tolerance_report("symmetric-group-gap", model.str(), std::abs(gap - expect), 1e-9));
  }
  std::vector<FiniteChain> fs{two_point_chain(0.5), two_point_chain(0.9)};
  ProductChain pc = product_chain(fs);
  double expect = logsob_constant(fs[1], LogSobMode::exact_two_point);
  double numeric = logsob_constant(pc.chain, LogSobMode::numeric);
  out.reports.push_back(tolerance_report("product-logsob-min", "two-point 0.5 x 0.9",
                                         std::abs(numeric - expect), 0.01 * expect));
  return out;
}

ScenarioOutput run_theorem1_product_cube(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  int functions = param_int(p, "functions");
  double c_scale = param_double(p, "C");  // 1.0 keeps the theorem constant
  double max_ratio = 0.0;
  for (int n : param_int_list(p, "n_values")) {
    for (double pv : param_list(p, "p_values")) {
      ProductChain pc = cube_product_chain(n, pv);
      double rho = two_point_log_sobolev(pv);
      std::ostringstream model;
      model << "product cube N=" << n << " p=" << pv;
      for (int k = 0; k < functions; ++k) {
        Eigen::VectorXd f = random_chain_function(pc.chain, rng);
        InequalityReport r = theorem1_report(pc.chain, pc.decomposition, rho, f, model.str());
        if (c_scale != 1.0) {
          r = make_report(r.id, r.model, r.lhs, r.rhs * c_scale, r.constant_used * c_scale);
        }
        max_ratio = std::max(max_ratio, r.ratio);
        if (!r.pass || k < 3) out.reports.push_back(r);  // all failures, a few samples
      }
    }
  }
  out.estimates.push_back({"theorem1-max-ratio", max_ratio, 0.0, "scan"});
  out.reports.push_back(tolerance_report("theorem1-max-ratio", "all models", max_ratio, 1.0));
  return out;
}

ScenarioOutput run_talagrand_cube(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  int n = param_int(p, "n");
  double pv = param_double(p, "p");
  double c = p.at("C") == "default" ? 4.0 * kE / two_point_log_sobolev(pv) : param_double(p, "C");
  BiasedCube cube(n, pv);
  std::vector<std::pair<std::string, CubeFunction>> corpus;
  corpus.emplace_back("dictator", CubeFunction::coordinate(cube, 0));
  corpus.emplace_back("parity", CubeFunction::parity(cube));
  if (n % 2 == 1) corpus.emplace_back("majority", CubeFunction::majority_set(cube));
  corpus.emplace_back("tribes", tribes_set(cube, std::max(2, n / 3)));
  int functions = param_int(p, "functions");
  for (int k = 0; k < functions; ++k)
    corpus.emplace_back("random-" + std::to_string(k), random_cube_function(cube, rng));
  std::ostringstream model;
  model << "cube N=" << n << " p=" << pv;
  for (const auto& [name, f] : corpus) {
    double rhs = talagrand_rhs(f, c);
    InequalityReport r = make_report("talagrand-cube", model.str() + " f=" + name, variance(f),
                                     rhs, c);
    if (!r.pass || corpus.size() <= 16 || name.rfind("random", 0) != 0) out.reports.push_back(r);
  }
  return out;
}

ScenarioOutput run_kkl_cube(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  double c = param_double(p, "C");
  int max_n = param_int(p, "max_n");
  int sets = param_int(p, "sets");

  auto push = [&](const std::string& name, const CubeFunction& a, int n) {
    double mass = integral(a);
    if (!(mass > 0.0 && mass < 1.0)) return;
    KklResult r = kkl_extract(a, c);
    std::ostringstream model;
    model << "cube N=" << n << " A=" << name;
    out.reports.push_back(make_report("kkl-influence", model.str(), kkl_bound(mass, n, c),
                                      r.influence, c));
  };

  for (int n : {3, 7, std::min(max_n, 12)}) {
    BiasedCube cube(n, 0.5);
    push("dictator", CubeFunction::dictator_set(cube, 0), n);
    if (n % 2 == 1) push("majority", CubeFunction::majority_set(cube), n);
    push("parity-set", CubeFunction::indicator(cube, [n](std::uint32_t x) {
           return BiasedCube::popcount(x) % 2 == 0;
         }),
         n);
  }
  for (int k = 0; k < sets; ++k) {
    int n = 2 + static_cast<int>(rng.next_u64() % (max_n - 1));
    BiasedCube cube(n, 0.5);
    push("monotone-" + std::to_string(k), random_monotone_set(cube, rng), n);
  }
  return out;
}

ScenarioOutput run_orlicz_variance(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  int n = param_int(p, "n");
  double pv = param_double(p, "p");
  double c_phi = p.at("C_phi") == "calibrated" ? calibrated("eq17-cphi").value
                                               : param_double(p, "C_phi");
  ProductChain pc = cube_product_chain(n, pv);
  double rho = two_point_log_sobolev(pv);
  std::ostringstream model;
  model << "product cube N=" << n << " p=" << pv;
  int functions = param_int(p, "functions");
  for (int k = 0; k < functions; ++k) {
    Eigen::VectorXd f = random_chain_function(pc.chain, rng);
    InequalityReport r = orlicz_variance_report(pc.chain, pc.decomposition, rho, f, c_phi,
                                                model.str());
    if (!r.pass || k < 8) out.reports.push_back(r);
  }
  return out;
}

ScenarioOutput run_interpolation_cube(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  int n = param_int(p, "n");
  double pv = param_double(p, "p");
  ProductChain pc = cube_product_chain(n, pv);
  double rho = two_point_log_sobolev(pv);
  std::ostringstream model;
  model << "product cube N=" << n << " p=" << pv;
  int functions = param_int(p, "functions");
  for (int k = 0; k < functions; ++k) {
    Eigen::VectorXd f = random_chain_function(pc.chain, rng);
    InequalityReport r =
        interpolation_variance_report(pc.chain, pc.decomposition, rho, f, model.str());
    if (!r.pass || k < 8) out.reports.push_back(r);
  }
  return out;
}

ScenarioOutput run_hypercontractivity(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  int n = param_int(p, "n");
  double pv = param_double(p, "p");
  int pairs = param_int(p, "pairs");
  ProductChain pc = cube_product_chain(n, pv);
  double rho = two_point_log_sobolev(pv);
  for (int k = 0; k < pairs; ++k) {
    Eigen::VectorXd f = random_chain_function(pc.chain, rng, 0.05, 2.0);
    double t = rng.uniform(0.05, 2.0);
    InequalityReport r = hypercontractivity_check(pc.chain, rho, t, f);
    if (!r.pass || k < 8) out.reports.push_back(r);
  }
  return out;
}

ScenarioOutput run_variance_decay(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  int pairs = param_int(p, "pairs");
  ProductChain pc = cube_product_chain(param_int(p, "n"), param_double(p, "p"));
  for (int k = 0; k < pairs; ++k) {
    Eigen::VectorXd f = random_chain_function(pc.chain, rng);
    double t = rng.uniform(0.05, 3.0);
    InequalityReport r = variance_decay_check(pc.chain, spectral_gap(pc.chain), t, f);
    if (!r.pass || k < 8) out.reports.push_back(r);
  }
  PermutationGroup s3 = symmetric_group(3);
  CayleyChain c3 = build_cayley_chain(s3.table, s3.transpositions);
  double lam = spectral_gap(c3.chain);
  for (int k = 0; k < pairs; ++k) {
    Eigen::VectorXd f = random_chain_function(c3.chain, rng);
    double t = rng.uniform(0.05, 3.0);
    InequalityReport r = variance_decay_check(c3.chain, lam, t, f);
    if (!r.pass || k < 8) out.reports.push_back(r);
  }
  return out;
}

ScenarioOutput run_corollary2(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  int functions = param_int(p, "functions");
  for (int n : param_int_list(p, "n_values")) {
    PermutationGroup g = symmetric_group(n);
    CayleyChain c = build_cayley_chain(g.table, g.transpositions);
    double rho = logsob_constant(c.chain, LogSobMode::numeric);
    out.estimates.push_back(
        {"logsob-numeric S_" + std::to_string(n), rho, 0.0, "optimizer"});
    for (int k = 0; k < functions; ++k) {
      Eigen::VectorXd f = random_chain_function(c.chain, rng);
      InequalityReport r = corollary2_report(c, f, rho);
      if (!r.pass || k < 8) out.reports.push_back(r);
    }
  }
  return out;
}

ScenarioOutput run_influence_bound_cayley(const ParamMap& p, std::uint64_t) {
  ScenarioOutput out;
  double c = param_double(p, "C");
  PermutationGroup g = symmetric_group(3);
  CayleyChain chain = build_cayley_chain(g.table, g.transpositions);
  double rho = logsob_constant(chain.chain, LogSobMode::numeric);
  for (int mask = 1; mask < 63; ++mask) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(6);
    for (int q = 0; q < 6; ++q)
      if (mask & (1 << q)) a[q] = 1.0;
    double mass = a.sum() / 6.0;
    double best = 0.0;
    for (int s : chain.gens.elements) best = std::max(best, influence_s(chain, a, s));
    std::ostringstream model;
    model << "S_3 subset mask=" << mask;
    out.reports.push_back(make_report("cayley-influence-bound", model.str(),
                                      influence_bound_extract(mass, rho, c), best, c));
  }
  return out;
}

// --- gaussian suites -------------------------------------------------------

ScenarioOutput run_corollary3(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  int functions = param_int(p, "functions");
  int nodes = param_int(p, "nodes");
  for (int n : param_int_list(p, "n_values")) {
    ProductMeasure mu = ProductMeasure::standard_gaussian(n);
    TensorGrid grid = make_grid(mu, nodes);
    for (int k = 0; k < functions; ++k) {
      SmoothFunction f = SmoothFunction::from_polynomial(random_polynomial(n, 3, rng));
      InequalityReport r = corollary3_report(f, mu, grid);
      if (!r.pass || k < 4) out.reports.push_back(r);
    }
  }
  return out;
}

ScenarioOutput run_corollary5(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  int n = param_int(p, "n");
  int functions = param_int(p, "functions");
  ProductMeasure mu = ProductMeasure::gaussian_block(n);
  TensorGrid grid = make_grid(mu, param_int(p, "nodes"));
  std::vector<std::pair<std::string, SubspaceDecomposition>> decomps;
  decomps.emplace_back("coordinate", coordinate_decomposition(n));
  decomps.emplace_back("loomis-whitney", loomis_whitney(n));
  for (const auto& [name, d] : decomps) {
    for (int k = 0; k < functions; ++k) {
      SmoothFunction f = SmoothFunction::from_polynomial(random_polynomial(n, 3, rng));
      InequalityReport r = corollary5_report(f, d, grid);
      r.model += " decomposition=" + name;
      if (!r.pass || k < 4) out.reports.push_back(r);
    }
  }
  return out;
}

ScenarioOutput run_theorem6(const ParamMap& p, std::uint64_t) {
  ScenarioOutput out;
  double c0 = p.at("c0") == "calibrated" ? calibrated("thm6-c0").value : param_double(p, "c0");
  std::uint64_t corpus_seed = calibrated("thm6-c0").corpus_seed;
  // The frozen corpus: same construction as the calibration sweep.
  Rng rng(corpus_seed);
  for (int n : {1, 2, 3}) {
    ProductMeasure mu = ProductMeasure::standard_gaussian(n);
    for (double w : {0.3, 0.1, 0.03}) {
      double threshold = rng.uniform(-0.5, 0.5);
      int axis = static_cast<int>(rng.next_u64() % n);
      SmoothFunction f = SmoothFunction::erf_ramp(n, axis, threshold, w);
      TensorGrid grid = make_grid_dense_axis(mu, 16, axis, w / 4.0);
      InequalityReport r = theorem6_report(f, mu, grid, c0);
      r.model += " ramp width=" + std::to_string(w);
      out.reports.push_back(r);
    }
    Polynomial sum = Polynomial::constant(n, rng.uniform(-0.3, 0.3));
    for (int d = 0; d < n; ++d)
      sum = sum + Polynomial::variable(n, d) * rng.uniform(0.4, 1.0);
    out.reports.push_back(theorem6_report(SmoothFunction::tanh_of(sum, 1.0), mu,
                                          make_grid(mu, 48), c0));
    out.reports.push_back(theorem6_report(SmoothFunction::tanh_of(sum, 3.0), mu,
                                          make_grid(mu, 64), c0));
  }
  return out;
}

ScenarioOutput run_interpolated_q(const ParamMap& p, std::uint64_t) {
  ScenarioOutput out;
  double c = p.at("C") == "calibrated" ? calibrated("qinterp-c").value : param_double(p, "C");
  std::uint64_t corpus_seed = calibrated("qinterp-c").corpus_seed;
  Rng rng(corpus_seed);
  for (int n : {1, 2}) {
    ProductMeasure mu = ProductMeasure::standard_gaussian(n);
    for (double w : {0.3, 0.1}) {
      double threshold = rng.uniform(-0.5, 0.5);
      int axis = static_cast<int>(rng.next_u64() % n);
      SmoothFunction f = SmoothFunction::erf_ramp(n, axis, threshold, w);
      TensorGrid grid = make_grid_dense_axis(mu, 16, axis, w / 4.0);
      for (double q : param_list(p, "q_values")) {
        InequalityReport r = interpolated_q_report(f, mu, q, grid, c);
        out.reports.push_back(r);
      }
    }
  }
  return out;
}

ScenarioOutput run_geometric_influence(const ParamMap& p, std::uint64_t) {
  ScenarioOutput out;
  double c = param_double(p, "C");
  // Mollified estimator against the analytic half-space value.
  ProductMeasure mu1 = ProductMeasure::standard_gaussian(1);
  double threshold = param_double(p, "threshold");
  Eigen::VectorXd blo = Eigen::VectorXd::Constant(1, -10.0);
  Eigen::VectorXd bhi = Eigen::VectorXd::Constant(1, 10.0);
  SetSpec pred = SetSpec::predicate(
      [threshold](const Eigen::VectorXd& x) { return x[0] <= threshold; }, blo, bhi);
  GeometricInfluenceEstimate mollified = geometric_influence(pred, 0, mu1);
  double analytic = normal_pdf(threshold);
  out.estimates.push_back({"geometric-influence-mollified", mollified.value, mollified.std_error,
                           mollified.method});
  out.estimates.push_back({"geometric-influence-analytic", analytic, 0.0, "analytic"});
  out.reports.push_back(tolerance_report("mollified-convergence", "halfspace",
                                         std::abs(mollified.value - analytic), 0.005 * analytic));
  // Influence lower bound across dimensions at C.
  for (int n : param_int_list(p, "n_values")) {
    ProductMeasure mu = ProductMeasure::standard_gaussian(n);
    InfluenceBoundReport rep = corollary7_check(SetSpec::halfspace(0, threshold), mu, c);
    std::ostringstream model;
    model << "halfspace N=" << n;
    out.reports.push_back(make_report("corollary7", model.str(), rep.bound_strong,
                                      rep.max_influence, c));
    out.estimates.push_back({"corollary7-minimal-C N=" + std::to_string(n), rep.minimal_c, 0.0,
                             "analytic"});
  }
  return out;
}

ScenarioOutput run_isoperimetric_profile(const ParamMap& p, std::uint64_t) {
  ScenarioOutput out;
  for (double a : param_list(p, "a_values")) {
    double profile = isoperimetric_profile(a);
    out.estimates.push_back({"profile a=" + std::to_string(a), profile, 0.0, "analytic"});
    double aa = a * (1.0 - a);
    double ratio = profile / (aa * std::sqrt(std::log(1.0 / aa)));
    out.reports.push_back(make_report("profile-ratio-upper", "a=" + std::to_string(a), ratio, 1.5,
                                      1.5));
    out.reports.push_back(make_report("profile-ratio-lower", "a=" + std::to_string(a), 0.9, ratio,
                                      0.9));
  }
  return out;
}

ScenarioOutput run_minkowski(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  std::vector<double> widths = param_list(p, "widths");
  ProductMeasure mu1 = ProductMeasure::standard_gaussian(1);
  for (double a : param_list(p, "a_values")) {
    double t = normal_quantile(a);
    Estimate mc = minkowski_content(SetSpec::halfspace(0, t), mu1, widths);
    double targets = isoperimetric_profile(a);
    out.estimates.push_back({"minkowski halfspace a=" + std::to_string(a), mc.value, mc.std_error,
                             mc.method});
    out.reports.push_back(tolerance_report("minkowski-matches-profile", "a=" + std::to_string(a),
                                           std::abs(mc.value - targets), 0.01 * targets));
  }
  // Quantitative lower bound on a small shape family.
  ProductMeasure mu2 = ProductMeasure::standard_gaussian(2);
  std::vector<std::pair<std::string, SetSpec>> shapes;
  shapes.emplace_back("halfspace", SetSpec::halfspace(0, -0.4));
  shapes.emplace_back("ball", SetSpec::ball(Eigen::VectorXd::Zero(2), 1.1));
  {
    Eigen::VectorXd lo(2), hi(2);
    lo << -1.0, -0.8;
    hi << 0.9, 1.2;
    shapes.emplace_back("box", SetSpec::box(lo, hi));
  }
  double minimal_c = 0.0;
  for (const auto& [name, spec] : shapes) {
    const ProductMeasure& mu = name == "halfspace" ? mu1 : mu2;
    double mass = set_measure(spec, mu);
    Estimate mc = minkowski_content(spec, mu, widths, 400'000, seed);
    double aa = mass * (1.0 - mass);
    double bound = aa * std::sqrt(std::log(1.0 / aa));
    minimal_c = std::max(minimal_c, bound / std::max(mc.value, 1e-12));
    out.estimates.push_back({"minkowski " + name, mc.value, mc.std_error, mc.method});
  }
  out.estimates.push_back({"quantitative-isoperimetry-minimal-C", minimal_c, 0.0, "mc"});
  return out;
}

ScenarioOutput run_gradient_bound(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  ProductMeasure mu = ProductMeasure::standard_gaussian(1);
  std::vector<Eigen::VectorXd> pts;
  for (int k = 0; k < 24; ++k) {
    Eigen::VectorXd x(1);
    x << rng.normal();
    pts.push_back(x);
  }
  pts.push_back(Eigen::VectorXd::Zero(1));

  std::vector<std::pair<std::string, SmoothFunction>> corpus;
  corpus.emplace_back("tanh-10x", SmoothFunction::tanh_of(Polynomial::variable(1, 0), 10.0));
  corpus.emplace_back("tanh-2x", SmoothFunction::tanh_of(Polynomial::variable(1, 0), 2.0));
  corpus.emplace_back("erf-ramp", SmoothFunction::erf_ramp(1, 0, 0.0, 0.01));
  for (const auto& [name, f] : corpus) {
    for (double t : param_list(p, "t_values")) {
      GradientBoundReport r = gradient_bound_check(f, t, mu, pts, 128);
      std::ostringstream model;
      model << "f=" << name << " t=" << t;
      out.reports.push_back(
          make_report("gradient-bound", model.str(), r.sup_scaled, 1.0, 1.0));
    }
  }
  // Small-time probe of the mollified sign (value reported; the closed
  // form tends to 1/sqrt(pi)).
  SmoothFunction probe = SmoothFunction::erf_ramp(1, 0, 0.0, 1e-4);
  GradientBoundReport fine =
      gradient_bound_check(probe, param_double(p, "probe_t"), mu, {Eigen::VectorXd::Zero(1)}, 512);
  out.estimates.push_back({"sign-probe-scaled-sup", fine.sup_scaled, 0.0, "grid"});
  return out;
}

ScenarioOutput run_gradient_commutation(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  ProductMeasure mu = ProductMeasure::standard_gaussian(2);
  std::vector<Eigen::VectorXd> pts;
  for (int k = 0; k < 6; ++k) {
    Eigen::VectorXd x(2);
    x << rng.normal(), rng.normal();
    pts.push_back(x);
  }
  for (int k = 0; k < 6; ++k) {
    SmoothFunction f = SmoothFunction::from_polynomial(random_polynomial(2, 3, rng));
    for (double t : param_list(p, "t_values")) {
      PointwiseReport r = gradient_commutation_check(f, t, mu, -1.0, pts);
      std::ostringstream model;
      model << "poly-" << k << " t=" << t;
      out.reports.push_back(
          make_report("gradient-commutation", model.str(), r.max_violation, 0.0, -1.0));
    }
  }
  return out;
}

ScenarioOutput run_ou_spectral(const ParamMap& p, std::uint64_t) {
  ScenarioOutput out;
  ProductMeasure mu = ProductMeasure::standard_gaussian(1);
  int nodes = param_int(p, "nodes");
  for (int k = 1; k <= 4; ++k) {
    double worst = 0.0;
    SmoothFunction hk;
    hk.value = [k](const Eigen::VectorXd& x) { return hermite_h(k, x[0]); };
    for (double t : {0.25, 1.0})
      for (double x : {-1.3, 0.2, 2.1}) {
        Eigen::VectorXd xx(1);
        xx << x;
        double expect = std::exp(-k * t) * hermite_h(k, x);
        worst = std::max(worst, std::abs(ou_apply(hk, t, xx, mu, nodes) - expect));
      }
    out.reports.push_back(tolerance_report("ou-hermite-eigenfunction",
                                           "h_" + std::to_string(k), worst, 1e-8));
  }
  return out;
}

ScenarioOutput run_exp_power(const ParamMap& p, std::uint64_t) {
  ScenarioOutput out;
  double c = p.at("C") == "calibrated" ? calibrated("exp-power-c").value : param_double(p, "C");
  std::uint64_t corpus_seed = calibrated("exp-power-c").corpus_seed;
  Rng rng(corpus_seed);
  for (double alpha : param_list(p, "alpha_values")) {
    for (int n : {2, 4}) {
      std::vector<Factor> fs(n, Factor::exp_power_factor(alpha));
      ProductMeasure mu(fs);
      for (int k = 0; k < 3; ++k) {
        double threshold = rng.uniform(-0.5, 0.5);
        ExpPowerReport r =
            exp_power_influence_report(SetSpec::halfspace(0, threshold), alpha, mu, c);
        std::ostringstream model;
        model << "exp-power alpha=" << alpha << " N=" << n
              << (r.fallback_beta1 ? " (beta=1 fallback)" : "");
        out.reports.push_back(
            make_report("exp-power-influence", model.str(), r.bound, r.max_influence, c));
      }
    }
  }
  return out;
}

// --- sphere / decomposition suites ----------------------------------------

ScenarioOutput run_corollary4(const ParamMap& p, std::uint64_t seed) {
  ScenarioOutput out;
  Rng rng(seed);
  int samples = param_int(p, "samples");
  int functions = param_int(p, "functions");
  for (int n : param_int_list(p, "n_values")) {
    SphereModel model{n, seed + static_cast<std::uint64_t>(n), samples};
    for (int k = 0; k < functions; ++k) {
      Polynomial h(n);
      for (int i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 1;
        h.add_term(e, rng.uniform(-1.0, 1.0));
      }
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          std::vector<int> e(n, 0);
          e[i] = 1;
          e[j] = 1;
          h.add_term(e, rng.uniform(-1.0, 1.0));
        }
      McInequalityReport r = corollary4_report(SmoothFunction::from_polynomial(h), model);
      if (!r.report.pass || k < 4) out.reports.push_back(r.report);
    }
  }
  return out;
}

ScenarioOutput run_theorem8(const ParamMap& p, std::uint64_t) {
  ScenarioOutput out;
  double c = p.at("C") == "calibrated" ? calibrated("thm8-c").value : param_double(p, "C");
  std::uint64_t corpus_seed = calibrated("thm8-c").corpus_seed;
  for (int n : {3, 4}) {
    SphereModel model{n, corpus_seed, 100'000};
    Rng rng(corpus_seed + n);
    std::vector<SmoothFunction> corpus;
    for (double scale : {5.0, 8.0})
      for (double cap : {0.0, 0.4}) {
        Polynomial shifted = Polynomial::variable(n, 0) + Polynomial::constant(n, -cap);
        corpus.push_back(SmoothFunction::tanh_of(shifted, scale));
      }
    Polynomial mix(n);
    for (int d = 0; d < n; ++d) mix = mix + Polynomial::variable(n, d) * rng.uniform(0.3, 1.0);
    corpus.push_back(SmoothFunction::tanh_of(mix, 2.0));
    for (const auto& f : corpus) out.reports.push_back(theorem8_report(f, model, c).report);
  }
  return out;
}

ScenarioOutput run_proposition9(const ParamMap& p, std::uint64_t) {
  ScenarioOutput out;
  double c = p.at("C") == "calibrated" ? calibrated("prop9-c").value : param_double(p, "C");
  std::uint64_t corpus_seed = calibrated("prop9-c").corpus_seed;
  Rng rng(corpus_seed);
  for (int n : {2, 3}) {
    ProductMeasure mu = ProductMeasure::gaussian_block(n);
    std::vector<std::pair<std::string, SubspaceDecomposition>> decomps;
    decomps.emplace_back("coordinate", coordinate_decomposition(n));
    decomps.emplace_back("loomis-whitney", loomis_whitney(n));
    std::vector<std::pair<SmoothFunction, TensorGrid>> fs;
    Polynomial sum(n);
    for (int d = 0; d < n; ++d) sum = sum + Polynomial::variable(n, d) * rng.uniform(0.5, 1.0);
    fs.emplace_back(SmoothFunction::tanh_of(sum, 1.0), make_grid(mu, 48));
    fs.emplace_back(SmoothFunction::tanh_of(Polynomial::variable(n, 0), 4.0),
                    make_grid_dense_axis(mu, 24, 0, 0.05));
    fs.emplace_back(SmoothFunction::erf_ramp(n, 0, 0.1, 0.1),
                    make_grid_dense_axis(mu, 24, 0, 0.025));
    for (const auto& [name, d] : decomps)
      for (const auto& [f, grid] : fs) {
        InequalityReport r = proposition9_report(f, d, grid, c);
        r.model += " decomposition=" + name;
        out.reports.push_back(r);
      }
  }
  return out;
}

ScenarioOutput run_section_boundary(const ParamMap& p, std::uint64_t) {
  ScenarioOutput out;
  double c = p.at("C") == "calibrated" ? calibrated("eq28-c").value : param_double(p, "C");
  std::uint64_t corpus_seed = calibrated("eq28-c").corpus_seed;
  Rng rng(corpus_seed);
  ProductMeasure mu2 = ProductMeasure::standard_gaussian(2);
  ProductMeasure mu3 = ProductMeasure::standard_gaussian(3);
  for (int k = 0; k < 6; ++k) {
    double t = rng.uniform(-1.0, 1.0);
    SectionBoundaryReport r = section_boundary_check(SetSpec::halfspace(0, t), 1, mu3, c);
    std::ostringstream model;
    model << "halfspace t=" << t << " section along e_2";
    out.reports.push_back(
        make_report("section-boundary", model.str(), r.bound, r.averaged_boundary, c));
  }
  for (int k = 0; k < 4; ++k) {
    Eigen::VectorXd lo(2), hi(2);
    lo << rng.uniform(-1.5, -0.5), rng.uniform(-1.5, -0.5);
    hi << rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5);
    SectionBoundaryReport r = section_boundary_check(SetSpec::box(lo, hi), 0, mu2, c);
    out.reports.push_back(
        make_report("section-boundary", "box section along e_1", r.bound, r.averaged_boundary, c));
  }
  return out;
}

}  // namespace

const std::vector<BuiltinScenario>& builtin_scenarios() {
  static const std::vector<BuiltinScenario> table = {
      {"logsob-two-point",
       "Eq (12): numeric log-Sobolev minimizer vs the exact two-point constant",
       {{"p_values", "0.5,0.6,0.7,0.8,0.9"}},
       run_logsob_two_point},
      {"chain-spectra",
       "spectral gaps of the S_n transposition walks and the product log-Sobolev minimum rule",
       {},
       run_chain_spectra},
      {"theorem1-product-cube",
       "Theorem 1 variance bound with C(rho,kappa) on product two-point chains",
       {{"n_values", "4,6,8,10"}, {"p_values", "0.5,0.7"}, {"functions", "250"}, {"C", "1.0"}},
       run_theorem1_product_cube},
      {"talagrand-cube",
       "Eq (1)/(13) cube variance bound over named and random functions",
       {{"n", "8"}, {"p", "0.5"}, {"functions", "200"}, {"C", "default"}},
       run_talagrand_cube},
      {"kkl-cube",
       "Eq (5) influence extraction (KKL) on dictator/majority/parity and monotone sets",
       {{"C", "10.87312731383618"}, {"max_n", "12"}, {"sets", "200"}},
       run_kkl_cube},
      {"orlicz-variance-cube",
       "Eq (18) Orlicz-norm variance bound with the calibrated Eq (17) constant",
       {{"n", "6"}, {"p", "0.5"}, {"functions", "100"}, {"C_phi", "calibrated"}},
       run_orlicz_variance},
      {"interpolation-cube",
       "Eq (16) interpolation-integral variance bound on product cubes",
       {{"n", "6"}, {"p", "0.5"}, {"functions", "100"}},
       run_interpolation_cube},
      {"hypercontractivity-cube",
       "Eq (11) hypercontractive norm contraction at the exact rho",
       {{"n", "6"}, {"p", "0.5"}, {"pairs", "500"}},
       run_hypercontractivity},
      {"variance-decay",
       "Eq (10) variance decay along the semigroup on cube products and S_3",
       {{"n", "6"}, {"p", "0.5"}, {"pairs", "500"}},
       run_variance_decay},
      {"corollary2-symmetric-group",
       "Corollary 2 Cayley-graph variance bound on S_3/S_4 with numeric rho",
       {{"n_values", "3,4"}, {"functions", "250"}},
       run_corollary2},
      {"influence-bound-cayley",
       "Eq (20) guaranteed max-influence lower bound, exhaustive over S_3 subsets",
       {{"C", "21.74625462767236"}},
       run_influence_bound_cayley},
      {"corollary3-gaussian",
       "Corollary 3 Gaussian L2 variance bound with constant 4",
       {{"n_values", "1,2,3"}, {"functions", "70"}, {"nodes", "16"}},
       run_corollary3},
      {"corollary5-brascamp-lieb",
       "Corollary 5 Brascamp-Lieb variance bound with constant 4",
       {{"n", "3"}, {"functions", "100"}, {"nodes", "16"}},
       run_corollary5},
      {"theorem6-gaussian",
       "Theorem 6 L1 variance bound with the frozen calibrated constant",
       {{"c0", "calibrated"}},
       run_theorem6},
      {"interpolated-q-gaussian",
       "interpolated q-family between Corollary 3 and Theorem 6",
       {{"q_values", "1,1.25,1.5,1.75,2"}, {"C", "calibrated"}},
       run_interpolated_q},
      {"geometric-influence-gaussian",
       "Corollary 7 geometric-influence lower bound and the mollified estimator",
       {{"C", "1.0"}, {"threshold", "0.0"}, {"n_values", "1,2,4,8,16,32,64"}},
       run_geometric_influence},
      {"isoperimetric-profile",
       "Gaussian isoperimetric profile and its quantitative ratio band",
       {{"a_values", "0.0001,0.001,0.01,0.1,0.3,0.5"}},
       run_isoperimetric_profile},
      {"minkowski-content",
       "Minkowski content vs the isoperimetric profile, plus the quantitative form",
       {{"a_values", "0.1,0.3,0.5"}, {"widths", "0.08,0.04,0.02,0.01"}},
       run_minkowski},
      {"gradient-bound-gaussian",
       "Eq (25) semigroup gradient bound sup |grad P_t f| sqrt(t) <= 1",
       {{"t_values", "0.01,0.1,0.5,1.0"}, {"probe_t", "0.002"}},
       run_gradient_bound},
      {"gradient-commutation-gaussian",
       "Eq (21)/(22) gradient commutation at rate -1",
       {{"t_values", "0.1,0.5,1.0"}},
       run_gradient_commutation},
      {"ou-spectral-action",
       "Eq (23) Ornstein-Uhlenbeck action on Hermite eigenfunctions",
       {{"nodes", "20"}},
       run_ou_spectral},
      {"exp-power-influence",
       "Eq (27)-shaped influence bound for exp-power products",
       {{"alpha_values", "1.2,1.5,1.8,3"}, {"C", "calibrated"}},
       run_exp_power},
      {"corollary4-sphere",
       "Corollary 4 sphere variance bound with constant 4e/n",
       {{"n_values", "3,4"}, {"samples", "100000"}, {"functions", "10"}},
       run_corollary4},
      {"theorem8-sphere",
       "Theorem 8 sphere L1 variance bound with the frozen calibrated constant",
       {{"C", "calibrated"}},
       run_theorem8},
      {"proposition9-brascamp-lieb",
       "Proposition 9 L1 Brascamp-Lieb variance bound with the frozen constant",
       {{"C", "calibrated"}},
       run_proposition9},
      {"section-boundary-gaussian",
       "Eq (28) averaged sectional boundary bound for half-spaces and boxes",
       {{"C", "calibrated"}},
       run_section_boundary},
  };
  return table;
}

const BuiltinScenario* find_scenario(const std::string& id) {
  for (const auto& s : builtin_scenarios())
    if (s.id == id) return &s;
  return nullptr;
}

void list_scenarios(std::ostream& os) {
  for (const auto& s : builtin_scenarios())
    os << s.id << " - " << s.description << "\n";
}

std::uint64_t scenario_stream_seed(std::uint64_t global_seed, const std::string& scenario_id) {
  return hash_u64(global_seed ^ hash_string(scenario_id));
}

namespace {

struct ScenarioResult {
  ScenarioSpec spec;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  ScenarioOutput output;
  std::string error;
};

ScenarioResult execute(const ScenarioSpec& spec, std::uint64_t global_seed) {
  ScenarioResult result;
  result.spec = spec;
  const BuiltinScenario* builtin = find_scenario(spec.target);
  result.seed = spec.seed ? *spec.seed : scenario_stream_seed(global_seed, spec.id);
  auto start = std::chrono::steady_clock::now();
  try {
    ParamMap params = builtin->defaults;
    for (const auto& [k, v] : spec.params) params[k] = v;
    result.output = builtin->run(params, result.seed);
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

int run_config(const Config& cfg, const RunOptions& options, std::ostream& diagnostics) {
  if (cfg.scenarios.empty()) {
    diagnostics << "config error: no scenarios\n";
    return 2;
  }
  // Validate targets and parameter keys before running anything.
  for (const auto& spec : cfg.scenarios) {
    const BuiltinScenario* builtin = find_scenario(spec.target);
    if (!builtin) {
      diagnostics << "config error: scenario '" << spec.id << "' references unknown target '"
                  << spec.target << "'\n";
      return 2;
    }
    for (const auto& [k, v] : spec.params)
      if (!builtin->defaults.count(k)) {
        diagnostics << "config error: scenario '" << spec.id << "' has unknown parameter '" << k
                    << "'\n";
        return 2;
      }
  }

  std::uint64_t global_seed = options.seed ? *options.seed : 0;
  if (!options.seed && cfg.global.count("seed"))
    global_seed = std::stoull(cfg.global.at("seed"));

  std::vector<ScenarioResult> results(cfg.scenarios.size());
  int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    for (std::size_t k = 0; k < cfg.scenarios.size(); ++k)
      results[k] = execute(cfg.scenarios[k], global_seed);
  } else {
    std::vector<std::future<ScenarioResult>> futures;
    for (const auto& spec : cfg.scenarios)
      futures.push_back(
          std::async(std::launch::async, [&spec, global_seed] { return execute(spec, global_seed); }));
    for (std::size_t k = 0; k < futures.size(); ++k) results[k] = futures[k].get();
  }

  bool any_fail = false;
  bool any_error = false;
  nlohmann::json run;
  run["version"] = kVersion;
  run["seed"] = global_seed;
  run["scenarios"] = nlohmann::json::array();
  std::vector<InequalityReport> all_reports;
  std::vector<Estimate> all_estimates;

  for (const auto& r : results) {
    nlohmann::json js;
    js["id"] = r.spec.id;
    js["target"] = r.spec.target;
    js["seed"] = r.seed;
    js["wall_time_s"] = r.wall_time_s;
    js["reports"] = nlohmann::json::array();
    js["estimates"] = nlohmann::json::array();
    if (!r.error.empty()) {
      js["error"] = r.error;
      any_error = true;
      diagnostics << "scenario '" << r.spec.id << "' failed to run: " << r.error << "\n";
    }
    int fails = 0;
    for (const auto& rep : r.output.reports) {
      js["reports"].push_back(nlohmann::json::parse(report_to_json(rep)));
      all_reports.push_back(rep);
      if (!rep.pass) {
        any_fail = true;
        ++fails;
      }
    }
    for (const auto& est : r.output.estimates) {
      nlohmann::json je;
      je["quantity"] = est.quantity;
      je["value"] = est.value;
      je["std_error"] = est.std_error;
      je["method"] = est.method;
      js["estimates"].push_back(je);
      all_estimates.push_back(est);
    }
    diagnostics << r.spec.id << ": " << r.output.reports.size() << " verdicts, " << fails
                << " failing, " << r.output.estimates.size() << " estimates ("
                << r.wall_time_s << " s)\n";
    run["scenarios"].push_back(js);
  }

  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    std::ofstream js(options.out_dir + "/run_report.json");
    js << run.dump(2) << "\n";
    std::ofstream rc(options.out_dir + "/reports.csv");
    write_reports_csv(rc, all_reports);
    std::ofstream ec(options.out_dir + "/estimates.csv");
    write_estimates_csv(ec, all_estimates);
  }

  if (any_error) return 2;
  return any_fail ? 1 : 0;
}

}  // namespace talab
