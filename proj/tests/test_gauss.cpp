#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "talab/gauss.hpp"
#include "talab/numeric.hpp"
#include "talab/polynomial.hpp"
#include "talab/rng.hpp"

using namespace talab;

namespace {
const double kSqrt2OverPi = std::sqrt(2.0 / M_PI);

std::vector<Eigen::VectorXd> sample_points(int dim, int count, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> pts;
  Rng rng(seed);
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd x(dim);
    for (int d = 0; d < dim; ++d) x[d] = rng.normal();
    pts.push_back(x);
  }
  return pts;
}
}  // namespace

TEST_CASE("gaussian quadrature moments") {
  Grid1D g = gauss_hermite(20);
  CHECK(g.weights.sum() == doctest::Approx(1.0).epsilon(1e-13));
  // E x^{2k} = (2k-1)!! exactly up to the rule's degree.
  for (int k = 1; k <= 9; ++k) {
    double m = 0.0;
    for (int i = 0; i < g.nodes.size(); ++i) m += g.weights[i] * std::pow(g.nodes[i], 2 * k);
    CHECK(m == doctest::Approx(odd_double_factorial(k)).epsilon(1e-11));
  }

  ProductMeasure mu3 = ProductMeasure::standard_gaussian(3);
  TensorGrid grid = make_grid(mu3, 12);
  CHECK(grid.integrate([](const Eigen::VectorXd&) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(grid.integrate([](const Eigen::VectorXd& x) { return x[0] * x[0] * x[1] * x[1]; }) ==
        doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("product measures") {
  ProductMeasure gauss = ProductMeasure::standard_gaussian(2);
  CHECK(gauss.rho() == doctest::Approx(1.0));
  CHECK(gauss.commutation_rate() == doctest::Approx(-1.0));
  CHECK(gauss.curvature_kappa() == doctest::Approx(0.0));
  CHECK(gauss.all_gaussian());

  ProductMeasure ep({Factor::exp_power_factor(1.5)});
  CHECK_FALSE(ep.all_gaussian());
  Factor f15 = Factor::exp_power_factor(1.5);
  CHECK(f15.cdf1d(0.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(f15.cdf1d(f15.truncation_radius()) == doctest::Approx(1.0).epsilon(1e-10));

  // A custom factor with a non-normalized density is rejected.
  CHECK_THROWS(ProductMeasure(
      {Factor::custom_factor([](double x) { return x * x; }, 1.0, 0.0, 0.0)}));

  // The standard Gaussian expressed as a custom potential passes.
  CHECK_NOTHROW(ProductMeasure({Factor::custom_factor(
      [](double x) { return 0.5 * x * x + 0.5 * std::log(2.0 * M_PI); }, 1.0, 0.0, -1.0)}));
}

TEST_CASE("sample clouds") {
  ProductMeasure mu = ProductMeasure::standard_gaussian(2);
  SampleCloud a = make_cloud(mu, 40'000, 99);
  SampleCloud b = make_cloud(mu, 40'000, 99);
  CHECK((a.points - b.points).cwiseAbs().maxCoeff() == 0.0);

  for (int d = 0; d < 2; ++d)
    CHECK(std::abs(a.points.col(d).mean()) < 4.0 / std::sqrt(40'000.0));

  // Exp-power sampling matches the quadrature CDF.
  ProductMeasure ep({Factor::exp_power_factor(1.5)});
  SampleCloud c = make_cloud(ep, 60'000, 7);
  Factor f = Factor::exp_power_factor(1.5);
  for (double q : {-1.0, -0.25, 0.5, 1.5}) {
    double emp = 0.0;
    for (int k = 0; k < c.points.rows(); ++k)
      if (c.points(k, 0) <= q) emp += 1.0;
    emp /= c.points.rows();
    CHECK(emp == doctest::Approx(f.cdf1d(q)).epsilon(0.02));
  }
}

TEST_CASE("ornstein-uhlenbeck semigroup") {
  ProductMeasure mu = ProductMeasure::standard_gaussian(1);
  SmoothFunction x1 = SmoothFunction::from_polynomial(Polynomial::variable(1, 0));

  Eigen::VectorXd at(1);
  at << 0.8;
  CHECK(ou_apply(x1, 0.0, at, mu) == doctest::Approx(0.8));
  for (double t : {0.1, 0.5, 2.0})
    CHECK(ou_apply(x1, t, at, mu) == doctest::Approx(std::exp(-t) * 0.8).epsilon(1e-12));

  // Hermite eigenfunctions: P_t h_k = e^{-kt} h_k on a 20-node grid.
  for (int k = 1; k <= 4; ++k) {
    SmoothFunction hk;
    hk.value = [k](const Eigen::VectorXd& x) { return hermite_h(k, x[0]); };
    for (double t : {0.25, 1.0}) {
      for (double p : {-1.3, 0.2, 2.1}) {
        Eigen::VectorXd xx(1);
        xx << p;
        double expect = std::exp(-k * t) * hermite_h(k, p);
        CHECK(ou_apply(hk, t, xx, mu, 20) == doctest::Approx(expect).epsilon(1e-8));
      }
    }
  }

  // Semigroup property (exact on polynomials) and sup-norm contraction.
  SmoothFunction poly;
  poly.value = [](const Eigen::VectorXd& x) {
    return 0.3 * hermite_h(3, x[0]) - 1.2 * hermite_h(1, x[0]) + 0.4;
  };
  SmoothFunction bounded;
  bounded.value = [](const Eigen::VectorXd& x) { return std::tanh(0.6 * x[0] + 0.2); };
  for (double p : {-0.7, 0.4}) {
    Eigen::VectorXd xx(1);
    xx << p;
    SmoothFunction inner;
    inner.value = [&](const Eigen::VectorXd& z) { return ou_apply(poly, 0.3, z, mu, 24); };
    double two_step = ou_apply(inner, 0.5, xx, mu, 24);
    CHECK(two_step == doctest::Approx(ou_apply(poly, 0.8, xx, mu, 24)).epsilon(1e-10));

    SmoothFunction inner_b;
    inner_b.value = [&](const Eigen::VectorXd& z) { return ou_apply(bounded, 0.3, z, mu, 96); };
    double two_step_b = ou_apply(inner_b, 0.5, xx, mu, 96);
    CHECK(two_step_b == doctest::Approx(ou_apply(bounded, 0.8, xx, mu, 96)).epsilon(1e-8));
    CHECK(std::abs(ou_apply(bounded, 0.8, xx, mu, 96)) <= 1.0);
  }
}

TEST_CASE("gradient norms") {
  ProductMeasure mu = ProductMeasure::standard_gaussian(1);
  TensorGrid grid = make_grid(mu, 24);

  SmoothFunction x1 = SmoothFunction::from_polynomial(Polynomial::variable(1, 0));
  CHECK(gradient_block_norm(x1, mu, 0, 1.0, grid).value == doctest::Approx(1.0));
  CHECK(gradient_block_norm(x1, mu, 0, 2.0, grid).value == doctest::Approx(1.0));

  SmoothFunction xsq =
      SmoothFunction::from_polynomial(Polynomial::variable(1, 0) * Polynomial::variable(1, 0));
  CHECK(gradient_block_norm(xsq, mu, 0, 2.0, grid).value == doctest::Approx(2.0).epsilon(1e-12));
  // |2x| has a kink at 0: a panel-based rule handles the L1 norm.
  TensorGrid dense = make_grid_dense_axis(mu, 20, 0, 0.02);
  CHECK(gradient_block_norm(xsq, mu, 0, 1.0, dense).value ==
        doctest::Approx(2.0 * kSqrt2OverPi).epsilon(1e-4));

  // Cloud and grid agree within 3 standard errors on random polynomials.
  ProductMeasure mu2 = ProductMeasure::standard_gaussian(2);
  TensorGrid grid2 = make_grid(mu2, 24);
  SampleCloud cloud = make_cloud(mu2, 60'000, 5);
  Rng rng(12);
  for (int k = 0; k < 5; ++k) {
    SmoothFunction f = SmoothFunction::from_polynomial(random_polynomial(2, 3, rng));
    for (int block : {0, 1}) {
      Estimate g = gradient_block_norm(f, mu2, block, 2.0, grid2);
      Estimate m = gradient_block_norm(f, mu2, block, 2.0, cloud);
      CHECK(std::abs(g.value - m.value) <= 3.0 * m.std_error + 1e-6);
    }
  }
}

TEST_CASE("corollary 3") {
  ProductMeasure mu1 = ProductMeasure::standard_gaussian(1);
  TensorGrid grid1 = make_grid(mu1, 24);

  SmoothFunction cst = SmoothFunction::from_polynomial(Polynomial::constant(1, 2.0));
  InequalityReport rc = corollary3_report(cst, mu1, grid1);
  CHECK(rc.pass);

  SmoothFunction x1 = SmoothFunction::from_polynomial(Polynomial::variable(1, 0));
  InequalityReport r = corollary3_report(x1, mu1, grid1);
  CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.rhs == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(r.constant_used == doctest::Approx(4.0));
  CHECK(r.pass);

  ProductMeasure mu3 = ProductMeasure::standard_gaussian(3);
  TensorGrid grid3 = make_grid(mu3, 16);
  Rng rng(300);
  for (int k = 0; k < 60; ++k) {
    SmoothFunction f = SmoothFunction::from_polynomial(random_polynomial(3, 3, rng));
    CHECK(corollary3_report(f, mu3, grid3).pass);
  }
}

TEST_CASE("theorem 6 and the interpolated family") {
  ProductMeasure mu1 = ProductMeasure::standard_gaussian(1);
  ProductMeasure mu2 = ProductMeasure::standard_gaussian(2);

  // Local calibration corpus: mollified half-spaces and tanh ramps.
  struct Item {
    SmoothFunction f;
    const ProductMeasure* mu;
    TensorGrid grid;
  };
  std::vector<Item> corpus;
  for (double w : {0.3, 0.1, 0.03})
    corpus.push_back({SmoothFunction::erf_ramp(1, 0, 0.2, w), &mu1,
                      make_grid_dense_axis(mu1, 20, 0, w / 4.0)});
  corpus.push_back({SmoothFunction::tanh_of(Polynomial::variable(1, 0)), &mu1, make_grid(mu1, 64)});
  {
    Polynomial sum2 = Polynomial::variable(2, 0) + Polynomial::variable(2, 1);
    corpus.push_back({SmoothFunction::tanh_of(sum2), &mu2, make_grid(mu2, 32)});
    corpus.push_back({SmoothFunction::erf_ramp(2, 1, -0.4, 0.1), &mu2,
                      make_grid_dense_axis(mu2, 20, 1, 0.025)});
  }

  double c0 = 0.0;
  for (const auto& item : corpus) {
    double var = variance_grid(item.f, item.grid);
    double sum = 0.0;
    for (int i = 0; i < item.mu->block_count(); ++i)
      sum += l1_summand(gradient_block_norm(item.f, *item.mu, i, 1.0, item.grid).value);
    double t = std::min(1.0, 1.0 / (2.0 * item.mu->rho()));
    c0 = std::max(c0, var * std::pow(item.mu->rho(), 1.5) * t / sum);
  }
  CHECK(c0 > 0.0);
  CHECK(std::isfinite(c0));

  for (const auto& item : corpus) {
    InequalityReport r = theorem6_report(item.f, *item.mu, item.grid, c0 * 1.0000001);
    CHECK(r.pass);
  }

  // The constant assembly: T = 1/2 at rho = 1, kappa = 0.
  CHECK(theorem6_constant(1.0, 0.0, 1.0) == doctest::Approx(2.0));
  CHECK(theorem6_constant(1.0, 2.0, 1.0) == doctest::Approx(4.0));

  // Bounded flag is mandatory.
  SmoothFunction unbounded = SmoothFunction::from_polynomial(Polynomial::variable(1, 0));
  CHECK_THROWS(theorem6_report(unbounded, mu1, corpus[0].grid, 1.0));

  // q = 1 reduces to the theorem-6 summand, q = 2 to the corollary-3 shape
  // up to bounded factors.
  for (double b : {0.05, 0.4, 1.0, 3.0}) {
    CHECK(q_summand(1.0, b, b) == doctest::Approx(l1_summand(b)).epsilon(1e-12));
    double n2 = 2.0 * b, n1 = b;  // any pair with n2 >= n1
    double cor3 = n2 * n2 / (1.0 + std::log(n2 / n1));
    double q2 = q_summand(2.0, n2, n1);
    CHECK(q2 >= 0.5 * cor3);
    CHECK(q2 <= 4.0 * cor3);
  }

  // q = 1.5 passes with a locally calibrated constant on the same corpus.
  double cq = 0.0;
  for (const auto& item : corpus) {
    double var = variance_grid(item.f, item.grid);
    double sum = 0.0;
    for (int i = 0; i < item.mu->block_count(); ++i) {
      double nq = gradient_block_norm(item.f, *item.mu, i, 1.5, item.grid).value;
      double n1 = gradient_block_norm(item.f, *item.mu, i, 1.0, item.grid).value;
      sum += q_summand(1.5, nq, n1);
    }
    cq = std::max(cq, var / sum);
  }
  for (const auto& item : corpus)
    CHECK(interpolated_q_report(item.f, *item.mu, 1.5, item.grid, cq * 1.0000001).pass);

  CHECK_THROWS(interpolated_q_report(corpus[0].f, mu1, 2.5, corpus[0].grid, 1.0));
}

TEST_CASE("geometric influence") {
  ProductMeasure mu2 = ProductMeasure::standard_gaussian(2);

  // Half-space: exact density at the threshold on its axis, zero elsewhere.
  SetSpec hs = SetSpec::halfspace(0, 0.7);
  GeometricInfluenceEstimate e0 = geometric_influence(hs, 0, mu2);
  CHECK(e0.method == "analytic");
  CHECK(e0.value == doctest::Approx(normal_pdf(0.7)).epsilon(1e-14));
  CHECK(geometric_influence(hs, 1, mu2).value == 0.0);

  // Slab |x_0| <= t: two boundary points.
  Eigen::VectorXd lo(2), hi(2);
  lo << -0.9, -INFINITY;
  hi << 0.9, INFINITY;
  SetSpec slab = SetSpec::box(lo, hi);
  CHECK(geometric_influence(slab, 0, mu2).value ==
        doctest::Approx(2.0 * normal_pdf(0.9)).epsilon(1e-12));
  CHECK(geometric_influence(slab, 1, mu2).value == 0.0);

  // Mollified estimator converges to the analytic half-space value within
  // 0.5%: exercise it through a predicate wrapper.
  ProductMeasure mu1 = ProductMeasure::standard_gaussian(1);
  Eigen::VectorXd blo(1), bhi(1);
  blo << -10.0;
  bhi << 10.0;
  SetSpec pred = SetSpec::predicate([](const Eigen::VectorXd& x) { return x[0] <= 0.3; }, blo, bhi);
  MollifyOptions opts;
  opts.width0 = 0.2;
  opts.levels = 4;
  GeometricInfluenceEstimate em = geometric_influence(pred, 0, mu1, opts);
  CHECK(em.method == "mollified");
  CHECK(std::abs(em.value - normal_pdf(0.3)) / normal_pdf(0.3) < 0.005);
  CHECK(std::abs(em.value - normal_pdf(0.3)) <= em.std_error + 0.005 * normal_pdf(0.3));

  // Monte Carlo outer integral agrees within its error bar.
  MollifyOptions mc_opts;
  mc_opts.width0 = 0.2;
  mc_opts.levels = 3;
  mc_opts.mc_samples = 60'000;
  GeometricInfluenceEstimate emc = geometric_influence(pred, 0, mu1, mc_opts);
  CHECK(emc.method == "mc");
  CHECK(std::abs(emc.value - normal_pdf(0.3)) <= 3.0 * emc.std_error + 0.01);

  // Predicate path requires a bounding box.
  SetSpec nobox;
  nobox.kind = SetSpec::Kind::predicate;
  nobox.member = [](const Eigen::VectorXd& x) { return x[0] <= 0.0; };
  CHECK_THROWS(geometric_influence(nobox, 0, mu1, opts));
}

TEST_CASE("corollary 7") {
  // Half-space of mass 1/2: influence is N-independent while the bound
  // decays, so C = 1 works for every N.
  for (int n : {1, 2, 4, 16, 64}) {
    ProductMeasure mu = ProductMeasure::standard_gaussian(n);
    InfluenceBoundReport rep = corollary7_check(SetSpec::halfspace(0, 0.0), mu, 1.0);
    CHECK(rep.pass);
    CHECK(rep.max_influence == doctest::Approx(normal_pdf(0.0)));
    CHECK(rep.minimal_c <= 1.0);
  }

  // Symmetric product box with per-coordinate mass a^{1/N}.
  double target = 0.3;
  for (int n : {2, 4, 8}) {
    ProductMeasure mu = ProductMeasure::standard_gaussian(n);
    double per = std::pow(target, 1.0 / n);
    double s = -normal_quantile(0.5 * (1.0 - per));
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -s);
    Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, s);
    InfluenceBoundReport rep = corollary7_check(SetSpec::box(lo, hi), mu, 1.0);
    CHECK(rep.pass);
    CHECK(std::isfinite(rep.minimal_c));
  }

  // Extreme half-spaces: the influence tracks the isoperimetric profile.
  ProductMeasure mu1 = ProductMeasure::standard_gaussian(1);
  for (double a : {1e-2, 1e-3}) {
    double t = normal_quantile(a);
    InfluenceBoundReport rep = corollary7_check(SetSpec::halfspace(0, t), mu1, 1.0);
    CHECK(rep.max_influence == doctest::Approx(isoperimetric_profile(a)).epsilon(1e-10));
  }

  ProductMeasure mu2 = ProductMeasure::standard_gaussian(2);
  CHECK_THROWS(corollary7_check(SetSpec::empty_set(), mu2, 1.0));
}

TEST_CASE("isoperimetric profile") {
  CHECK(isoperimetric_profile(0.0) == 0.0);
  CHECK(isoperimetric_profile(1.0) == 0.0);
  CHECK(isoperimetric_profile(0.5) == doctest::Approx(0.3989422804).epsilon(1e-9));
  // Bit-exact symmetry whenever 1-a is exactly representable.
  for (double a : {0.25, 0.375, 0.0625, 0.5})
    CHECK(isoperimetric_profile(a) == isoperimetric_profile(1.0 - a));
  for (double a : {0.1, 0.37, 1e-4})
    CHECK(isoperimetric_profile(a) ==
          doctest::Approx(isoperimetric_profile(1.0 - a)).epsilon(1e-14));
  double a = 1e-3;
  double ratio = isoperimetric_profile(a) / (a * std::sqrt(2.0 * std::log(1.0 / a)));
  CHECK(ratio > 0.8);
  CHECK(ratio < 1.2);
}

TEST_CASE("minkowski content") {
  ProductMeasure mu1 = ProductMeasure::standard_gaussian(1);
  std::vector<double> widths = {0.08, 0.04, 0.02, 0.01};

  Estimate half = minkowski_content(SetSpec::halfspace(0, 0.0), mu1, widths);
  CHECK(std::abs(half.value - normal_pdf(0.0)) / normal_pdf(0.0) < 0.01);

  CHECK(minkowski_content(SetSpec::empty_set(), mu1, widths).value == 0.0);
  CHECK_THROWS(minkowski_content(SetSpec::halfspace(0, 0.0), mu1, {0.1, 0.05}));

  // Quantitative isoperimetric form on a small shape family: the minimal
  // admissible C stays close to 1.
  ProductMeasure mu2 = ProductMeasure::standard_gaussian(2);
  Eigen::VectorXd c0 = Eigen::VectorXd::Zero(2);
  struct Shape {
    SetSpec spec;
    const ProductMeasure* mu;
  };
  std::vector<Shape> shapes;
  shapes.push_back({SetSpec::halfspace(0, -0.4), &mu1});
  shapes.push_back({SetSpec::ball(c0, 1.1), &mu2});
  {
    Eigen::VectorXd lo(2), hi(2);
    lo << -1.0, -0.8;
    hi << 0.9, 1.2;
    shapes.push_back({SetSpec::box(lo, hi), &mu2});
  }
  double worst_c = 0.0;
  for (const auto& s : shapes) {
    double mass = set_measure(s.spec, *s.mu);
    Estimate mc = minkowski_content(s.spec, *s.mu, widths, 400'000);
    double aa = mass * (1.0 - mass);
    double needed = aa * std::sqrt(std::log(1.0 / aa)) / std::max(mc.value, 1e-12);
    worst_c = std::max(worst_c, needed);
  }
  CHECK(worst_c < 1.2);  // half-spaces are extremal; C modestly above the profile ratio
}

TEST_CASE("gradient commutation") {
  ProductMeasure mu2 = ProductMeasure::standard_gaussian(2);
  auto pts = sample_points(2, 6, 42);

  // Linear functions: equality at rate -1.
  Polynomial lin = Polynomial::variable(2, 0) * 2.0 + Polynomial::variable(2, 1) * (-0.5);
  SmoothFunction flin = SmoothFunction::from_polynomial(lin);
  for (double t : {0.2, 0.8}) {
    PointwiseReport r = gradient_commutation_check(flin, t, mu2, -1.0, pts);
    CHECK(r.pass);
    CHECK(std::abs(r.max_violation) < 1e-8);  // equality case
  }

  // Cubic: holds at kappa = -1, fails at the adversarial kappa = -2.
  Polynomial cub = Polynomial::variable(2, 0) * Polynomial::variable(2, 0) *
                   Polynomial::variable(2, 0);
  SmoothFunction fcub = SmoothFunction::from_polynomial(cub);
  for (double t : {0.1, 1.0}) CHECK(gradient_commutation_check(fcub, t, mu2, -1.0, pts).pass);
  bool violated = false;
  for (double t : {0.1, 0.5, 1.0})
    violated = violated || !gradient_commutation_check(flin, t, mu2, -2.0, pts).pass;
  CHECK(violated);
}

TEST_CASE("gradient bound") {
  ProductMeasure mu1 = ProductMeasure::standard_gaussian(1);
  auto pts = sample_points(1, 40, 17);
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(1);
  pts.push_back(origin);

  SmoothFunction steep = SmoothFunction::tanh_of(Polynomial::variable(1, 0), 10.0);
  for (double t : {0.01, 0.1, 1.0}) {
    GradientBoundReport r = gradient_bound_check(steep, t, mu1, pts, 96);
    CHECK(r.pass);
    CHECK(r.sup_scaled <= 1.0 + 1e-6);
  }

  SmoothFunction cst;
  cst.value = [](const Eigen::VectorXd&) { return 0.5; };
  cst.bounded_by_one = true;
  CHECK(gradient_bound_check(cst, 0.3, mu1, pts).sup_scaled < 1e-10);

  // Sharp probe: for the mollified sign, the closed form of the smoothed
  // gradient gives sup |grad P_t f| sqrt(t) ->
  // sqrt(2/pi) e^{-t} sqrt(t/(1-e^{-2t})) -> 1/sqrt(pi) as t -> 0.
  SmoothFunction sign_probe = SmoothFunction::erf_ramp(1, 0, 0.0, 1e-4);
  double limit = 1.0 / std::sqrt(M_PI);
  for (double t : {0.02, 0.005}) {
    GradientBoundReport r = gradient_bound_check(sign_probe, t, mu1, {origin}, 256);
    double closed = kSqrt2OverPi * std::exp(-t) * std::sqrt(t / (1.0 - std::exp(-2.0 * t)));
    CHECK(r.sup_scaled == doctest::Approx(closed).epsilon(2e-3));
  }
  GradientBoundReport fine = gradient_bound_check(sign_probe, 0.002, mu1, {origin}, 512);
  CHECK(fine.sup_scaled == doctest::Approx(limit).epsilon(5e-3));

  CHECK_THROWS(gradient_bound_check(steep, 1.5, mu1, pts));
  CHECK_THROWS(gradient_bound_check(steep, 0.0, mu1, pts));
  SmoothFunction unflagged = SmoothFunction::from_polynomial(Polynomial::variable(1, 0));
  CHECK_THROWS(gradient_bound_check(unflagged, 0.5, mu1, pts));
}

TEST_CASE("exp-power influences") {
  // beta = 2(1 - 1/alpha) approaches the Gaussian exponent 1/2 as alpha -> 2.
  ExpPowerReport near2 = exp_power_influence_report(
      SetSpec::halfspace(0, 0.0), 1.999,
      ProductMeasure({Factor::exp_power_factor(1.999), Factor::exp_power_factor(1.999)}), 1.0);
  CHECK(0.5 * near2.beta == doctest::Approx(0.5).epsilon(1e-3));
  CHECK_FALSE(near2.fallback_beta1);

  // alpha = 1.5 half-space family with a locally calibrated constant.
  double alpha = 1.5;
  double c_cal = 0.0;
  std::vector<int> ns = {1, 2, 4};
  for (int n : ns) {
    std::vector<Factor> fs(n, Factor::exp_power_factor(alpha));
    ProductMeasure mu(fs);
    ExpPowerReport r = exp_power_influence_report(SetSpec::halfspace(0, 0.2), alpha, mu, 1.0);
    if (r.bound > 0.0) c_cal = std::max(c_cal, r.bound / r.max_influence);
  }
  double c_used = std::max(1.0, c_cal * 1.0000001);
  for (int n : ns) {
    std::vector<Factor> fs(n, Factor::exp_power_factor(alpha));
    ProductMeasure mu(fs);
    CHECK(exp_power_influence_report(SetSpec::halfspace(0, 0.2), alpha, mu, c_used).pass);
  }

  // alpha = 3: valid report, flagged beta = 1 fallback.
  std::vector<Factor> f3(2, Factor::exp_power_factor(3.0));
  ProductMeasure mu3(f3);
  ExpPowerReport r3 = exp_power_influence_report(SetSpec::halfspace(0, 0.0), 3.0, mu3, 2.0);
  CHECK(r3.fallback_beta1);
  CHECK(r3.beta == doctest::Approx(1.0));

  CHECK_THROWS(exp_power_influence_report(SetSpec::halfspace(0, 0.0), 1.0, mu3, 1.0));
}

TEST_CASE("smooth function finite differences") {
  Rng rng(2718);
  auto pts = sample_points(3, 10, 7);
  for (int k = 0; k < 5; ++k) {
    SmoothFunction f = SmoothFunction::from_polynomial(random_polynomial(3, 3, rng));
    CHECK(max_gradient_fd_error(f, pts) < 1e-6);
  }
  SmoothFunction ramp = SmoothFunction::erf_ramp(2, 0, 0.5, 0.25);
  auto pts2 = sample_points(2, 10, 9);
  CHECK(max_gradient_fd_error(ramp, pts2) < 1e-6);
}

TEST_CASE("set specs") {
  SetSpec hs = parse_set_spec("halfspace axis=1 threshold=-0.25");
  CHECK(hs.kind == SetSpec::Kind::halfspace);
  CHECK(hs.axis == 1);
  CHECK(hs.threshold == doctest::Approx(-0.25));

  SetSpec bx = parse_set_spec("box lo=-1,-inf hi=0.5,2");
  CHECK(bx.kind == SetSpec::Kind::box);
  CHECK(bx.lo[1] == -INFINITY);

  SetSpec bl = parse_set_spec("ball center=0,0 radius=1.5");
  Eigen::VectorXd x(2);
  x << 1.0, 1.0;
  CHECK(bl.contains(x));
  x << 2.0, 2.0;
  CHECK_FALSE(bl.contains(x));
  CHECK(bl.distance(x) == doctest::Approx(2.0 * std::sqrt(2.0) - 1.5));

  CHECK_THROWS(parse_set_spec("cone axis=1"));

  ProductMeasure mu2 = ProductMeasure::standard_gaussian(2);
  CHECK(set_measure(parse_set_spec("halfspace axis=0 threshold=0"), mu2) == doctest::Approx(0.5));
  CHECK(set_measure(bx, mu2) ==
        doctest::Approx((normal_cdf(0.5) - normal_cdf(-1.0)) * normal_cdf(2.0)).epsilon(1e-10));
}
