#pragma once

#include "randflight/error.hpp"

namespace randflight::specfun {

// Truncation policy shared by the series evaluations in this header.
struct SeriesControl {
  double abs_tol = 1e-300;
  double rel_tol = 5e-15;
  int max_terms = 10000;
};

// Natural log of the gamma function, x > 0. Lanczos approximation with
// reflection below 0.5; relative accuracy ~1e-13 over [1e-3, 1e3].
double log_gamma(double x);

// Regularized incomplete beta I_x(a, b), 0 <= x <= 1, a > 0, b > 0.
// Continued fraction (modified Lentz) with the usual symmetry flip at
// x > (a+1)/(a+b+2).
double regularized_incomplete_beta(double x, double a, double b);

// Bessel function of the first kind, real order >= -1/2, x >= 0.
// Ascending series where it is numerically safe, large-argument asymptotic
// expansion for small orders, otherwise backward (Miller) recurrence with
// Neumann-series normalization. Absolute accuracy ~1e-10 on
// x in [0, 200], order in [-1/2, 60].
double bessel_j(double order, double x, const SeriesControl& ctl = {});

// Gamma(order+1) * (2/x)^order * J_order(x), the value-1-at-zero normalization
// of the Bessel ratio (equals 0F1(; order+1; -x^2/4)). Stable where the plain
// ratio under/overflows at large order and small argument.
double bessel_j_scaled(double order, double x, const SeriesControl& ctl = {});

// Gauss hypergeometric 2F1(alpha, beta; gamma; z) for gamma > beta > 0 and
// 0 <= z < 1: power series for small z or polynomial cases, Euler integral
// with endpoint-flattening quadrature otherwise. Relative accuracy ~1e-10.
double gauss_2f1(double alpha, double beta, double gamma, double z,
                 const SeriesControl& ctl = {});

// Two-parameter Mittag-Leffler function E_{alpha,beta}(x), alpha > 0,
// beta > 0, x >= 0. Compensated direct summation; throws numeric_error when
// the term budget is exhausted before convergence.
double mittag_leffler(double alpha, double beta, double x,
                      const SeriesControl& ctl = {});

}  // namespace randflight::specfun
