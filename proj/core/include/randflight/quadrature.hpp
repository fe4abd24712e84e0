#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "randflight/error.hpp"

// Small self-contained quadrature toolkit used by the density evaluators.

namespace randflight::quad {

namespace detail {

// Gauss-Legendre 15-point rule on [-1, 1] (positive half; rule is symmetric).
inline constexpr double kGl15Nodes[8] = {
    0.0000000000000000, 0.2011940939974345, 0.3941513470775634,
    0.5709721726085388, 0.7244177313601701, 0.8482065834104272,
    0.9372733924007060, 0.9879925180204854};
inline constexpr double kGl15Weights[8] = {
    0.2025782419255613, 0.1984314853271116, 0.1861610000155622,
    0.1662692058169939, 0.1395706779261543, 0.1071592204671719,
    0.0703660474881081, 0.0307532419961173};

}  // namespace detail

// 15-point Gauss-Legendre on [a, b]; exact for degree <= 29 polynomials.
template <class F>
double gauss_legendre_15(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double s = detail::kGl15Weights[0] * f(mid);
  for (int k = 1; k < 8; ++k) {
    const double dx = hw * detail::kGl15Nodes[k];
    s += detail::kGl15Weights[k] * (f(mid + dx) + f(mid - dx));
  }
  return s * hw;
}

namespace detail {

template <class F>
double adaptive_gl_rec(F& f, double a, double b, double whole, double tol,
                       int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss_legendre_15(f, a, m);
  const double right = gauss_legendre_15(f, m, b);
  const double delta = left + right - whole;
  if (std::abs(delta) <= tol || depth >= 48) return left + right;
  return adaptive_gl_rec(f, a, m, left, 0.5 * tol, depth + 1) +
         adaptive_gl_rec(f, m, b, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

// Adaptive bisected Gauss-Legendre for integrands smooth up to isolated kinks.
template <class F>
double adaptive_gauss_legendre(F&& f, double a, double b, double abs_tol) {
  if (!(b > a)) return 0.0;
  const double whole = gauss_legendre_15(f, a, b);
  return detail::adaptive_gl_rec(f, a, b, whole, abs_tol, 0);
}

// Tanh-sinh (double-exponential) quadrature on (a, b).
//
// The integrand is called as f(x, da, db) where da = x - a and db = b - x are
// maintained without cancellation, so integrable endpoint singularities such
// as (b - x)^p with p > -1 can be written in terms of db and evaluated
// accurately arbitrarily close to the endpoint.
template <class F>
double tanh_sinh(F&& f, double a, double b, double abs_tol = 1e-12,
                 double rel_tol = 1e-10, int max_level = 12) {
  if (!(b > a)) return 0.0;
  const double hw = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  constexpr double kHalfPi = 1.5707963267948966;
  constexpr double kTMax = 6.11;  // weight underflows past this

  // Evaluates the transformed integrand at t (both +t and -t for t > 0).
  auto node_pair = [&](double t) -> double {
    const double u = kHalfPi * std::sinh(t);
    const double ch = std::cosh(u);
    const double w = kHalfPi * std::cosh(t) / (ch * ch);
    if (!(w > 0.0)) return 0.0;
    // 1 - tanh(u) = 2 / (1 + exp(2u)); exact distance to the near endpoint.
    const double dnear = hw * 2.0 / (1.0 + std::exp(2.0 * std::abs(u)));
    if (!(dnear > 0.0)) return 0.0;
    if (t == 0.0) return w * f(mid, hw, hw);
    const double dfar = (b - a) - dnear;
    const double xp = b - dnear;  // node toward b
    const double xm = a + dnear;  // node toward a
    return w * (f(xp, dfar, dnear) + f(xm, dnear, dfar));
  };

  double h = 1.0;
  double sum = node_pair(0.0);
  for (int k = 1; k * h <= kTMax; ++k) sum += node_pair(k * h);
  double estimate = hw * h * sum;

  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    // Add the new midpoints (odd multiples of h).
    for (int k = 1; k * h <= kTMax; k += 2) sum += node_pair(k * h);
    const double next = hw * h * sum;
    const double diff = std::abs(next - estimate);
    estimate = next;
    if (level >= 3 &&
        diff <= abs_tol + rel_tol * std::abs(estimate))
      return estimate;
  }
  throw numeric_error("tanh_sinh: no convergence within level budget");
}

// Convenience wrapper for integrands that do not need endpoint distances.
template <class F>
double tanh_sinh_plain(F&& f, double a, double b, double abs_tol = 1e-12,
                       double rel_tol = 1e-10, int max_level = 12) {
  return tanh_sinh([&](double x, double, double) { return f(x); }, a, b,
                   abs_tol, rel_tol, max_level);
}

// Wynn epsilon extrapolation of a sequence of partial sums. Accelerates
// alternating tails (including the bounded oscillations that arise from
// Hankel-type inversions, where the extrapolated value is the Abel sum).
class WynnEpsilon {
 public:
  void add(double s) {
    diag_.push_back(s);
    double below = 0.0;  // epsilon_{k-1} entry one row down, two columns back
    for (int j = static_cast<int>(diag_.size()) - 1; j > 0; --j) {
      const double prev = diag_[j - 1];
      const double diff = diag_[j] - prev;
      if (std::abs(diff) > 1e-300)
        diag_[j - 1] = below + 1.0 / diff;
      else
        diag_[j - 1] = 1e300;
      below = prev;
    }
    prev_value_ = value_;
    // Even-order columns hold the estimates; skip entries currently pinned
    // at the singular-rule guard (they self-heal on the next add, and the
    // shallower even columns already carry the converged value).
    std::size_t j = (diag_.size() - 1) % 2;
    while (j + 2 < diag_.size() &&
           (!std::isfinite(diag_[j]) || std::abs(diag_[j]) >= 1e299))
      j += 2;
    value_ = diag_[j];
  }

  double value() const { return value_; }
  double last_delta() const { return std::abs(value_ - prev_value_); }
  std::size_t count() const { return diag_.size(); }

 private:
  std::vector<double> diag_;
  double value_ = std::numeric_limits<double>::quiet_NaN();
  double prev_value_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace randflight::quad
