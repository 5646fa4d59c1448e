#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace talab {

// Additive slack used by every inequality verdict.
inline double pass_slack(double rhs) { return 1e-9 * std::max(1.0, std::abs(rhs)); }

// Standard normal density and distribution function.
inline double normal_pdf(double x) { return 0.3989422804014326779399461 * std::exp(-0.5 * x * x); }
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244008444); }

// Inverse of normal_cdf, accurate to ~1e-15 (rational initial guess plus
// two Halley refinements).
double normal_quantile(double p);

// Adaptive Simpson quadrature on [a,b] with relative tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-9, int max_depth = 40);

// Bisection for a monotone root of f on [lo,hi]; f(lo), f(hi) must bracket.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double rel_tol = 1e-12, int max_iter = 200);

// (2k-1)!! with (-1)!! = 1.
double odd_double_factorial(int k);

}  // namespace talab
