#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "talab/cube.hpp"
#include "talab/numeric.hpp"
#include "talab/rng.hpp"
#include "talab/talagrand.hpp"

using namespace talab;

namespace {

const double kE = std::exp(1.0);

// Composite Simpson with a fixed panel count, independent of the adaptive
// integrator under test.
double simpson_oracle(const std::function<double(double)>& f, double a, double b, int panels) {
  double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("report conventions") {
  InequalityReport ok = make_report("x", "m", 1.0, 2.0, 3.0);
  CHECK(ok.pass);
  CHECK(ok.ratio == doctest::Approx(0.5));

  InequalityReport zero = make_report("x", "m", 0.0, 0.0, 1.0);
  CHECK(zero.pass);
  CHECK(zero.ratio == 0.0);

  InequalityReport fail = make_report("x", "m", 2.0, 1.0, 1.0);
  CHECK_FALSE(fail.pass);
  CHECK(fail.ratio == doctest::Approx(2.0));

  // Slack absorbs roundoff at the boundary.
  CHECK(make_report("x", "m", 1.0 + 1e-12, 1.0, 1.0).pass);

  CHECK(talagrand_summand(0.0, 0.0) == 0.0);
  CHECK_THROWS(talagrand_summand(1.0, 0.0));
}

TEST_CASE("theorem 1 on product chains") {
  CHECK(theorem1_constant(1.0, 0.0) == doctest::Approx(4.0 * kE));
  CHECK(theorem1_constant(1.0, -1.0) == doctest::Approx(4.0));
  CHECK(theorem1_constant(0.5, 0.0) == doctest::Approx(8.0 * kE));

  // Constant function: 0 <= 0.
  ProductChain single = cube_product_chain(1, 0.5);
  Eigen::VectorXd cst = Eigen::VectorXd::Constant(2, 5.0);
  InequalityReport rc = theorem1_report(single.chain, single.decomposition, 1.0, cst);
  CHECK(rc.pass);
  CHECK(rc.ratio == 0.0);

  // f = x_1 on the uniform two-point mean chain: Var = 1, RHS = 4e.
  Eigen::VectorXd coord(2);
  coord << -1.0, 1.0;
  InequalityReport r = theorem1_report(single.chain, single.decomposition, 1.0, coord);
  CHECK(r.lhs == doctest::Approx(1.0));
  CHECK(r.rhs == doctest::Approx(4.0 * kE));
  CHECK(r.pass);

  // Random corpus on the product cube N = 8: never fails, and the bound is
  // affine-invariant.
  ProductChain pc = cube_product_chain(8, 0.5);
  Rng rng(881);
  double max_ratio = 0.0;
  for (int k = 0; k < 200; ++k) {
    Eigen::VectorXd f = random_chain_function(pc.chain, rng);
    InequalityReport rep = theorem1_report(pc.chain, pc.decomposition, 1.0, f);
    CHECK(rep.pass);
    max_ratio = std::max(max_ratio, rep.ratio);

    if (k % 50 == 0) {
      InequalityReport shifted = theorem1_report(pc.chain, pc.decomposition, 1.0,
                                                 (f.array() + 3.25).matrix());
      CHECK(shifted.rhs == doctest::Approx(rep.rhs).epsilon(1e-9));
      InequalityReport scaled =
          theorem1_report(pc.chain, pc.decomposition, 1.0, (-2.0 * f.array()).matrix());
      CHECK(scaled.rhs == doctest::Approx(4.0 * rep.rhs).epsilon(1e-9));
      CHECK(scaled.ratio == doctest::Approx(rep.ratio).epsilon(1e-9));
    }
  }
  CHECK(max_ratio > 0.0);
  CHECK(max_ratio <= 1.0);

  // Biased product with exact rho from the two-point formula.
  ProductChain pb = cube_product_chain(6, 0.7);
  double rho = two_point_log_sobolev(0.7);
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd f = random_chain_function(pb.chain, rng);
    CHECK(theorem1_report(pb.chain, pb.decomposition, rho, f).pass);
  }
}

TEST_CASE("interpolation integral") {
  CHECK(interpolation_theta(1.0) == doctest::Approx(1.0));
  CHECK(interpolation_theta(2.0) == doctest::Approx(0.0));
  CHECK(interpolation_theta(4.0 / 3.0) == doctest::Approx(0.5));

  FiniteChain tp = two_point_chain(0.5);
  CHECK(interpolation_integral(Eigen::VectorXd::Ones(2), tp.measure()) == doctest::Approx(1.0));

  // Indicator of mass m: ||g||_v^2 = m^{2/v}; closed form by an
  // independent composite-Simpson oracle.
  ProductChain pc = cube_product_chain(3, 0.5);
  Eigen::VectorXd ind = Eigen::VectorXd::Zero(8);
  ind[0] = ind[3] = ind[5] = 1.0;  // mass 3/8
  double m = 3.0 / 8.0;
  double oracle = simpson_oracle([m](double v) { return std::pow(m, 2.0 / v); }, 1.0, 2.0, 4096);
  CHECK(interpolation_integral(ind, pc.chain.measure()) == doctest::Approx(oracle).epsilon(1e-8));

  // Upper bound 2 ||g||_2^2 / (1 + log(1/b)).
  Rng rng(19);
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd g = random_chain_function(pc.chain, rng);
    double n1 = lp_norm(pc.chain, g, 1.0);
    double n2 = lp_norm(pc.chain, g, 2.0);
    if (n2 == 0.0) continue;
    double b = n1 / n2;
    double bound = 2.0 * n2 * n2 / (1.0 + std::log(1.0 / b));
    CHECK(interpolation_integral(g, pc.chain.measure()) <= bound + 1e-10);
  }

  // The intermediate variance bound holds and implies the theorem-1 form.
  ProductChain p6 = cube_product_chain(6, 0.5);
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd f = random_chain_function(p6.chain, rng);
    InequalityReport rep = interpolation_variance_report(p6.chain, p6.decomposition, 1.0, f);
    CHECK(rep.pass);
    InequalityReport t1 = theorem1_report(p6.chain, p6.decomposition, 1.0, f);
    CHECK(rep.rhs <= t1.rhs + pass_slack(t1.rhs));
  }
}

TEST_CASE("orlicz variance bound") {
  ProductChain pc = cube_product_chain(5, 0.5);
  Rng rng(23);

  // Calibrate the norm-comparison constant over a local corpus, then the
  // variance bound must hold on that corpus.
  std::vector<Eigen::VectorXd> corpus;
  for (int k = 0; k < 120; ++k) corpus.push_back(random_chain_function(pc.chain, rng));

  double c_phi = 0.0;
  for (const auto& f : corpus)
    for (const auto& gamma : pc.decomposition.directions) {
      Eigen::VectorXd g = gamma(f);
      double on = orlicz_norm(pc.chain, g);
      if (on == 0.0) continue;
      double ratio = interpolation_integral(g, pc.chain.measure()) / (on * on);
      CHECK(std::isfinite(ratio));
      c_phi = std::max(c_phi, ratio);
    }
  CHECK(c_phi > 0.0);
  CHECK(c_phi < 10.0);

  Eigen::VectorXd cst = Eigen::VectorXd::Constant(32, 2.0);
  CHECK(orlicz_variance_report(pc.chain, pc.decomposition, 1.0, cst, c_phi).pass);
  for (const auto& f : corpus)
    CHECK(orlicz_variance_report(pc.chain, pc.decomposition, 1.0, f, c_phi).pass);

  CHECK_THROWS(orlicz_variance_report(pc.chain, pc.decomposition, 1.0, cst, 0.0));
}

TEST_CASE("corollary 2 on symmetric groups") {
  PermutationGroup s3 = symmetric_group(3);
  CayleyChain c3 = build_cayley_chain(s3.table, s3.transpositions);
  double rho3 = logsob_constant(c3.chain, LogSobMode::numeric);

  Eigen::VectorXd cst = Eigen::VectorXd::Constant(6, 1.0);
  CHECK(corollary2_report(c3, cst, rho3).pass);

  Eigen::VectorXd f = Eigen::VectorXd::Constant(6, -1.0 / 6.0);
  f[c3.group.identity()] += 1.0;
  InequalityReport r = corollary2_report(c3, f, rho3);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(variance(c3.chain, f)));

  PermutationGroup s4 = symmetric_group(4);
  CayleyChain c4 = build_cayley_chain(s4.table, s4.transpositions);
  double rho4 = logsob_constant(c4.chain, LogSobMode::numeric);
  Rng rng(404);
  for (int k = 0; k < 500; ++k) {
    Eigen::VectorXd g = random_chain_function(c4.chain, rng);
    CHECK(corollary2_report(c4, g, rho4).pass);
  }

  // (12),(13) generate S_3 but are not conjugacy-closed: rejected.
  GeneratorSet partial;
  partial.elements = {s3.transpositions.elements[0], s3.transpositions.elements[1]};
  CayleyChain cpart = build_cayley_chain(s3.table, partial);
  CHECK_THROWS(corollary2_report(cpart, f, rho3));
}

TEST_CASE("influence bound extraction") {
  CHECK(influence_bound_extract(0.5, 1.0, 1.0) == doctest::Approx(0.25 * std::log(5.0)));
  CHECK(influence_bound_extract(1e-9, 1.0, 1.0) < 1e-7);

  double prev = influence_bound_extract(0.3, 0.8, 1.0);
  for (double c : {2.0, 4.0, 8.0, 16.0}) {
    double cur = influence_bound_extract(0.3, 0.8, c);
    CHECK(cur < prev);
    prev = cur;
  }

  // Second inequality of the extraction bound.
  Rng rng(55);
  for (int k = 0; k < 100; ++k) {
    double a = rng.uniform(0.01, 0.99);
    double rho = rng.uniform(0.05, 1.5);
    double c = rng.uniform(1.0, 20.0);
    double weak = a * (1.0 - a) * rho / c * std::log1p(1.0 / (c * rho));
    CHECK(influence_bound_extract(a, rho, c) >= weak - 1e-12);
  }

  CHECK_THROWS_AS(influence_bound_extract(0.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(influence_bound_extract(1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(influence_bound_extract(0.5, 1.0, 0.5), std::domain_error);
}
