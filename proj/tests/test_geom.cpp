#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "talab/geom.hpp"
#include "talab/numeric.hpp"
#include "talab/polynomial.hpp"
#include "talab/rng.hpp"

using namespace talab;

namespace {

// Closed-form moments of monomials over S^{n-1}: for even exponents a_i,
// E prod x_i^{a_i} = prod (a_i - 1)!! / (n (n+2) ... (n + 2(|a|/2 - 1))).
double sphere_monomial_moment(const std::vector<int>& a, int n) {
  int total = 0;
  for (int e : a) {
    if (e % 2 == 1) return 0.0;
    total += e;
  }
  double num = 1.0;
  for (int e : a) num *= odd_double_factorial(e / 2);
  double den = 1.0;
  for (int k = 0; k < total / 2; ++k) den *= n + 2 * k;
  return num / den;
}

// Degree-<=2 spherical harmonics; coefficients drawn uniformly.
SmoothFunction random_harmonic(int n, Rng& rng) {
  Polynomial p(n);
  for (int i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 1;
    p.add_term(e, rng.uniform(-1.0, 1.0));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<int> e(n, 0);
      e[i] = 1;
      e[j] = 1;
      p.add_term(e, rng.uniform(-1.0, 1.0));
    }
  for (int i = 0; i + 1 < n; ++i) {
    double c = rng.uniform(-1.0, 1.0);
    std::vector<int> e1(n, 0), e2(n, 0);
    e1[i] = 2;
    e2[i + 1] = 2;
    p.add_term(e1, c);
    p.add_term(e2, -c);
  }
  return SmoothFunction::from_polynomial(p);
}

}  // namespace

TEST_CASE("sphere sampler") {
  SphereModel model{4, 21, 40'000};
  Eigen::MatrixXd pts = sphere_points(model);
  CHECK(pts.rows() == 40'000);
  for (int k = 0; k < pts.rows(); ++k)
    CHECK(std::abs(pts.row(k).norm() - 1.0) < 1e-12);

  double bound = 4.0 / std::sqrt(40'000.0);
  for (int d = 0; d < 4; ++d) {
    CHECK(std::abs(pts.col(d).mean()) < bound);  // exactly 0 by antithetics
    CHECK(std::abs(pts.col(d).array().square().mean() - 0.25) < bound);
  }

  CHECK_THROWS(sphere_points(SphereModel{1, 0, 100}));
  CHECK_THROWS(sphere_points(SphereModel{3, 0, 101}));
}

TEST_CASE("tangential derivatives") {
  SmoothFunction x1 = SmoothFunction::from_polynomial(Polynomial::variable(3, 0));
  Eigen::VectorXd p(3);
  p << 0.6, 0.8, 0.0;

  CHECK(dij_derivative(x1, 0, 1, p) == doctest::Approx(-0.8));
  CHECK(dij_derivative(x1, 0, 2, p) == doctest::Approx(0.0));
  CHECK(dij_derivative(x1, 1, 2, p) == doctest::Approx(0.0));

  // Antisymmetry and vanishing on constants and radial functions.
  SmoothFunction cst = SmoothFunction::from_polynomial(Polynomial::constant(3, 3.0));
  Polynomial r2 = Polynomial::variable(3, 0) * Polynomial::variable(3, 0) +
                  Polynomial::variable(3, 1) * Polynomial::variable(3, 1) +
                  Polynomial::variable(3, 2) * Polynomial::variable(3, 2);
  SmoothFunction radial = SmoothFunction::from_polynomial(r2);
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd v(3);
    for (int d = 0; d < 3; ++d) v[d] = rng.normal();
    v /= v.norm();
    SmoothFunction f = random_harmonic(3, rng);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        CHECK(dij_derivative(f, i, j, v) == doctest::Approx(-dij_derivative(f, j, i, v)));
        CHECK(dij_derivative(cst, i, j, v) == doctest::Approx(0.0));
        CHECK(dij_derivative(radial, i, j, v) == doctest::Approx(0.0).epsilon(1e-12));
      }
  }

  Eigen::VectorXd off(3);
  off << 1.0, 1.0, 1.0;
  CHECK_THROWS(dij_derivative(x1, 0, 1, off));
}

TEST_CASE("sphere dirichlet identity") {
  // f = x_1: both sides equal (n-1)/n.
  for (int n : {3, 4}) {
    SphereModel model{n, 33, 60'000};
    SmoothFunction x1 = SmoothFunction::from_polynomial(Polynomial::variable(n, 0));
    IdentityCheck c = sphere_dirichlet_identity_check(x1, model);
    CHECK(c.pass);
    CHECK(c.lhs == doctest::Approx((n - 1.0) / n).epsilon(0.02));
    CHECK(c.rhs == doctest::Approx((n - 1.0) / n).epsilon(0.02));
  }

  SphereModel m3{3, 90, 60'000};
  SmoothFunction cst = SmoothFunction::from_polynomial(Polynomial::constant(3, 1.0));
  IdentityCheck cc = sphere_dirichlet_identity_check(cst, m3);
  CHECK(cc.pass);
  CHECK(std::abs(cc.lhs) < 1e-12);

  Polynomial x1x2 = Polynomial::variable(3, 0) * Polynomial::variable(3, 1);
  CHECK(sphere_dirichlet_identity_check(SmoothFunction::from_polynomial(x1x2), m3).pass);

  Rng rng(44);
  for (int k = 0; k < 5; ++k)
    CHECK(sphere_dirichlet_identity_check(random_harmonic(3, rng), m3).pass);
}

TEST_CASE("corollary 4 on the sphere") {
  SphereModel m3{3, 7, 100'000};

  SmoothFunction cst = SmoothFunction::from_polynomial(Polynomial::constant(3, 2.0));
  CHECK(corollary4_report(cst, m3).report.pass);

  // f = x_1, n = 3: Var = 1/3; the closed-form pair norms fix the bound.
  SmoothFunction x1 = SmoothFunction::from_polynomial(Polynomial::variable(3, 0));
  McInequalityReport r = corollary4_report(x1, m3);
  CHECK(r.report.pass);
  CHECK(r.report.lhs == doctest::Approx(1.0 / 3.0).epsilon(0.02));
  // ||D_ij x_1||_2^2 = E x^2 = 1/3 for the two live pairs; ||.||_1 = E|x| = 1/2
  // (the n = 3 coordinate is uniform on [-1,1]).
  double summand = (1.0 / 3.0) / (1.0 + std::log(std::sqrt(1.0 / 3.0) / 0.5));
  double expect_rhs = 4.0 * std::exp(1.0) / 3.0 * 2.0 * 2.0 * summand;
  CHECK(r.report.rhs == doctest::Approx(expect_rhs).epsilon(0.02));

  Rng rng(606);
  for (int n : {3, 4}) {
    SphereModel m{n, 13, 100'000};
    for (int k = 0; k < 10; ++k) {
      McInequalityReport rep = corollary4_report(random_harmonic(n, rng), m);
      CHECK(rep.report.pass);
    }
  }
}

TEST_CASE("theorem 8 on the sphere") {
  SphereModel m3{3, 29, 60'000};
  SmoothFunction cst;
  cst.value = [](const Eigen::VectorXd&) { return 0.25; };
  cst.gradient = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()).eval(); };
  cst.bounded_by_one = true;
  CHECK(theorem8_report(cst, m3, 1.0).report.pass);

  // Local calibration over caps and a steep plateau, then verification.
  std::vector<SmoothFunction> corpus;
  corpus.push_back(SmoothFunction::tanh_of(Polynomial::variable(3, 0), 5.0));
  for (double cap : {0.0, 0.4}) {
    Polynomial shifted = Polynomial::variable(3, 0) + Polynomial::constant(3, -cap);
    corpus.push_back(SmoothFunction::tanh_of(shifted, 8.0));
  }
  double c_cal = 0.0;
  for (const auto& f : corpus) {
    McInequalityReport probe = theorem8_report(f, m3, 1.0);
    c_cal = std::max(c_cal, probe.report.lhs / probe.report.rhs);
  }
  double c_used = c_cal * 1.05;  // headroom over the Monte Carlo noise
  for (const auto& f : corpus) CHECK(theorem8_report(f, m3, c_used).report.pass);

  SmoothFunction unflagged = SmoothFunction::from_polynomial(Polynomial::variable(3, 0));
  CHECK_THROWS(theorem8_report(unflagged, m3, 1.0));
}

TEST_CASE("subspace decompositions") {
  SubspaceDecomposition coord = coordinate_decomposition(3);
  CHECK(coord.terms.size() == 3);

  SubspaceDecomposition lw = loomis_whitney(3);
  CHECK(lw.terms.size() == 3);
  CHECK(lw.terms[0].weight == doctest::Approx(0.5));

  // Wrong weights are rejected (trace pre-filter).
  std::vector<SubspaceDecomposition::Term> bad;
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  for (int i = 0; i < 3; ++i) bad.push_back({0.7, id.col(i)});
  CHECK_THROWS(validate_decomposition(bad, 3));

  // Orthonormal but not resolving the identity.
  std::vector<SubspaceDecomposition::Term> skew;
  skew.push_back({1.5, id.col(0)});
  skew.push_back({1.0, id.col(1)});
  skew.push_back({0.5, id.col(2)});
  CHECK_THROWS(validate_decomposition(skew, 3));

  // Parsing round trip.
  SubspaceDecomposition parsed = parse_decomposition(
      {"term c=1 basis=1,0", "term c=1 basis=0,1"}, 2);
  CHECK(parsed.terms.size() == 2);
  CHECK_THROWS(parse_decomposition({"term c=1 basis=1,0"}, 2));
}

TEST_CASE("corollary 5") {
  ProductMeasure mu3 = ProductMeasure::gaussian_block(3);
  TensorGrid grid = make_grid(mu3, 16);

  SmoothFunction cst = SmoothFunction::from_polynomial(Polynomial::constant(3, 1.0));
  CHECK(corollary5_report(cst, loomis_whitney(3), grid).pass);

  // Coordinate decomposition on f = x_1 reduces to the corollary-3 numbers.
  SmoothFunction x1 = SmoothFunction::from_polynomial(Polynomial::variable(3, 0));
  InequalityReport r = corollary5_report(x1, coordinate_decomposition(3), grid);
  CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.rhs == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(r.pass);

  InequalityReport c3 = corollary3_report(x1, ProductMeasure::standard_gaussian(3),
                                          make_grid(ProductMeasure::standard_gaussian(3), 16));
  CHECK(r.rhs == doctest::Approx(c3.rhs).epsilon(1e-9));

  Rng rng(31);
  for (int k = 0; k < 25; ++k) {
    SmoothFunction f = SmoothFunction::from_polynomial(random_polynomial(3, 3, rng));
    CHECK(corollary5_report(f, loomis_whitney(3), grid).pass);
    CHECK(corollary5_report(f, coordinate_decomposition(3), grid).pass);
  }
}

TEST_CASE("projection commutation") {
  SubspaceDecomposition lw = loomis_whitney(3);
  Rng rng(77);
  std::vector<Eigen::VectorXd> pts;
  for (int k = 0; k < 4; ++k) {
    Eigen::VectorXd x(3);
    for (int d = 0; d < 3; ++d) x[d] = rng.normal();
    pts.push_back(x);
  }
  for (int k = 0; k < 5; ++k) {
    SmoothFunction f = SmoothFunction::from_polynomial(random_polynomial(3, 3, rng));
    for (double t : {0.3, 1.0})
      CHECK(projection_commutation_check(f, lw, t, pts).pass);
  }
}

TEST_CASE("proposition 9") {
  ProductMeasure mu3 = ProductMeasure::gaussian_block(3);
  TensorGrid grid = make_grid(mu3, 16);
  SubspaceDecomposition lw = loomis_whitney(3);

  SmoothFunction cst;
  cst.value = [](const Eigen::VectorXd&) { return -0.3; };
  cst.gradient = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()).eval(); };
  cst.bounded_by_one = true;
  CHECK(proposition9_report(cst, lw, grid, 1.0).pass);

  // Clamped tanh(x_1 + x_2) under Loomis-Whitney with local calibration.
  Polynomial s12 = Polynomial::variable(3, 0) + Polynomial::variable(3, 1);
  SmoothFunction f = SmoothFunction::tanh_of(s12);
  InequalityReport probe = proposition9_report(f, lw, grid, 1.0);
  double c_cal = probe.lhs / probe.rhs * 1.0000001;
  CHECK(proposition9_report(f, lw, grid, std::max(1.0, c_cal)).pass);

  // Coordinate decomposition on a one-axis ramp matches the theorem-6
  // right-hand side built from the same norms.
  ProductMeasure mu2 = ProductMeasure::gaussian_block(2);
  TensorGrid dense = make_grid_dense_axis(mu2, 20, 0, 0.03);
  SmoothFunction ramp = SmoothFunction::erf_ramp(2, 0, 0.1, 0.1);
  InequalityReport p9 = proposition9_report(ramp, coordinate_decomposition(2), dense, 2.0);
  ProductMeasure mu2f = ProductMeasure::standard_gaussian(2);
  double sum = 0.0;
  for (int i = 0; i < 2; ++i)
    sum += l1_summand(gradient_block_norm(ramp, mu2f, i, 1.0, dense).value);
  CHECK(p9.rhs == doctest::Approx(2.0 * sum).epsilon(1e-9));

  SmoothFunction unflagged = SmoothFunction::from_polynomial(Polynomial::variable(3, 0));
  CHECK_THROWS(proposition9_report(unflagged, lw, grid, 1.0));
}

TEST_CASE("section boundary") {
  ProductMeasure mu3 = ProductMeasure::standard_gaussian(3);

  // Half-space along e_1, sections along e_2: every section is the same
  // half-space; the boundary equals the isoperimetric value.
  SectionBoundaryReport hs = section_boundary_check(SetSpec::halfspace(0, 0.0), 1, mu3, 2.0);
  CHECK(hs.averaged_boundary == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  CHECK(hs.halfspace_section_isoperimetric);
  CHECK(hs.pass);

  // 2-d box: sectional average from 1-d quadrature-backed marginals.
  ProductMeasure mu2 = ProductMeasure::standard_gaussian(2);
  Eigen::VectorXd lo(2), hi(2);
  lo << -0.8, -1.1;
  hi << 0.9, 0.7;
  SectionBoundaryReport bx = section_boundary_check(SetSpec::box(lo, hi), 0, mu2, 6.0);
  double m0 = normal_cdf(0.9) - normal_cdf(-0.8);
  double m1 = normal_cdf(0.7) - normal_cdf(-1.1);
  double expect = (normal_pdf(-1.1) + normal_pdf(0.7)) * m0;
  CHECK(bx.averaged_boundary == doctest::Approx(expect).epsilon(1e-9));
  CHECK(bx.pass);
  (void)m1;

  // Degenerate sets are rejected.
  CHECK_THROWS(section_boundary_check(SetSpec::halfspace(0, 100.0), 1, mu3, 2.0));
}
