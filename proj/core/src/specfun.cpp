#include "randflight/specfun.hpp"

#include "randflight/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

namespace randflight::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Lanczos g = 7, n = 9.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

struct KahanSum {
  double s = 0.0;
  double c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

// Ascending series sum_k (-1)^k (x/2)^{2k+nu} / (k! Gamma(k+nu+1)).
// Numerically safe when x is moderate or when the first term dominates.
double bessel_series(double nu, double x, const SeriesControl& ctl) {
  const double q = 0.25 * x * x;
  double term = std::exp(nu * std::log(0.5 * x) - log_gamma(nu + 1.0));
  KahanSum sum;
  sum.add(term);
  for (int k = 1; k <= ctl.max_terms; ++k) {
    term *= -q / (k * (nu + k));
    sum.add(term);
    // Terms decrease once k(nu+k) > q; only then is the remainder bounded
    // by the last term.
    if (k * (nu + k) > q &&
        std::abs(term) <= ctl.abs_tol + ctl.rel_tol * std::abs(sum.s))
      return sum.s;
  }
  throw numeric_error("bessel_j: ascending series did not converge");
}

// Large-argument Hankel expansion, truncated at the smallest term. The term
// recurrence c_k = c_{k-1} (mu - (2k-1)^2) / (8 k x) terminates exactly for
// half-integer orders; usable only where the first ratio is < 1 (mu <= 2x).
double bessel_hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double ck = 1.0;
  double p = 1.0;
  double q = 0.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k <= 64; ++k) {
    const double f = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
    ck *= f;
    if (ck == 0.0) break;              // exact termination (2nu odd integer)
    if (std::abs(ck) >= prev) break;   // asymptotic tail started to grow
    prev = std::abs(ck);
    // Signs follow cos/sin expansions: P = 1 - c2 + c4 - ..., Q = c1 - c3 + ...
    const int m = k % 4;
    if (m == 1)
      q += ck;
    else if (m == 2)
      p -= ck;
    else if (m == 3)
      q -= ck;
    else
      p += ck;
    if (std::abs(ck) < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// Backward (Miller) recurrence from well inside the decay region, normalized
// by the Neumann sum (x/2)^mu = sum_m (mu+2m) Gamma(mu+m)/m! J_{mu+2m}(x)
// for non-integer mu, or 1 = J_0 + 2 sum J_{2m} for integer orders.
double bessel_miller(double nu, double x) {
  const int nint = static_cast<int>(std::floor(nu));
  const double mu = nu - nint;  // in [0, 1)
  const double top = std::max(nu, x);
  const int start =
      static_cast<int>(top + 12.0 * std::cbrt(top + 1.0) + 50.0);

  double jp = 0.0;       // order mu + k + 1
  double jc = 1e-280;    // order mu + k
  double target = 0.0;
  KahanSum norm;
  double coef_scale = 1.0;  // tracks rescaling applied to the running values

  const bool integer_order = (mu == 0.0);
  // Neumann coefficients at even offsets: w_m = (mu+2m) Gamma(mu+m) / m!.
  // Walked downward: w_{m} from w_{m+1} via the ratio below.
  std::vector<double> even_coef;
  if (!integer_order) {
    const int m_top = start / 2;
    even_coef.resize(m_top + 1);
    // Build upward in log space to avoid overflow, then normalize relative
    // to w_0 = Gamma(mu+1); absolute scale cancels in target/norm.
    double lw = log_gamma(mu + 1.0);
    for (int m = 0; m <= m_top; ++m) {
      even_coef[m] = lw + std::log(mu + 2.0 * m) - std::log(mu);
      if (m < m_top) lw += std::log(mu + m) - std::log1p(m);
    }
    // stored as logs; converted below
  }

  for (int k = start; k >= 0; --k) {
    const double jm = (2.0 * (mu + k + 1.0) / x) * jc - jp;
    jp = jc;
    jc = jm;
    // After the step, jc holds order mu + k, jp holds mu + k + 1.
    if (k == nint) target = jc;
    if (integer_order) {
      if (k % 2 == 0) norm.add((k == 0 ? 1.0 : 2.0) * jc);
    } else if (k % 2 == 0) {
      norm.add(std::exp(even_coef[k / 2]) * jc);
    }
    if (std::abs(jc) > 1e250) {
      jp *= 1e-250;
      jc *= 1e-250;
      target *= 1e-250;
      norm.s *= 1e-250;
      norm.c *= 1e-250;
      coef_scale *= 1.0;  // coefficients untouched; values carry the scale
    }
  }
  (void)coef_scale;

  double scale;
  if (integer_order) {
    scale = 1.0 / norm.s;
  } else {
    // True sum is (x/2)^mu; with w_0 = Gamma(mu+1) folded into even_coef.
    scale = std::exp(mu * std::log(0.5 * x)) / norm.s;
  }
  return target * scale;
}

bool series_safe(double nu, double x) {
  return x <= 12.0 || 0.25 * x * x <= nu + 1.0;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
  if (x < 0.5)
    return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  const double z = x - 1.0;
  double acc = kLanczos[0];
  for (int k = 1; k < 9; ++k) acc += kLanczos[k] / (z + k);
  const double t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t +
         std::log(acc);
}

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("regularized_incomplete_beta: requires a, b > 0");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("regularized_incomplete_beta: requires x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  // I_x(a,b) = front * cf / a with the continued fraction evaluated on
  // whichever of (x; a,b), (1-x; b,a) converges fast.
  const bool flip = x > (a + 1.0) / (a + b + 2.0);
  const double xx = flip ? 1.0 - x : x;
  const double aa = flip ? b : a;
  const double bb = flip ? a : b;

  const double lfront = aa * std::log(xx) + bb * std::log1p(-xx) -
                        (log_gamma(aa) + log_gamma(bb) - log_gamma(aa + bb));

  // Modified Lentz.
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  double c = 1.0;
  double d = 1.0 - (aa + bb) * xx / (aa + 1.0);
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  bool converged = false;
  for (int m = 1; m <= 400; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (bb - m) * xx / ((aa + m2 - 1.0) * (aa + m2));
    d = 1.0 + num * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(aa + m) * (aa + bb + m) * xx / ((aa + m2) * (aa + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + num / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw numeric_error("regularized_incomplete_beta: continued fraction stalled");
  const double result = std::exp(lfront) * h / aa;
  const double value = flip ? 1.0 - result : result;
  return value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value);
}

double bessel_j(double order, double x, const SeriesControl& ctl) {
  if (!(order >= -0.5)) throw std::domain_error("bessel_j: requires order >= -1/2");
  if (!(x >= 0.0)) throw std::domain_error("bessel_j: requires x >= 0");
  if (x == 0.0) {
    if (order == 0.0) return 1.0;
    return order > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (order < 0.0) {
    // One stable downward step from the two next-higher orders.
    const double j1 = bessel_j(order + 1.0, x, ctl);
    const double j2 = bessel_j(order + 2.0, x, ctl);
    return (2.0 * (order + 1.0) / x) * j1 - j2;
  }
  // Exact spherical reductions (used heavily by the density kernels).
  if (x >= 0.5) {
    if (order == 0.5) return std::sqrt(2.0 / (kPi * x)) * std::sin(x);
    if (order == 1.5)
      return std::sqrt(2.0 / (kPi * x)) * (std::sin(x) / x - std::cos(x));
  }
  if (series_safe(order, x)) return bessel_series(order, x, ctl);
  if (4.0 * order * order <= 2.0 * x && x >= 12.0) return bessel_hankel(order, x);
  return bessel_miller(order, x);
}

double bessel_j_scaled(double order, double x, const SeriesControl& ctl) {
  if (!(order >= -0.5))
    throw std::domain_error("bessel_j_scaled: requires order >= -1/2");
  if (!(x >= 0.0)) throw std::domain_error("bessel_j_scaled: requires x >= 0");
  if (x == 0.0) return 1.0;
  if (x >= 0.5) {
    // Exact low half-integer reductions.
    if (order == 0.5) return std::sin(x) / x;
    if (order == 1.5) {
      const double x2 = x * x;
      return 3.0 * (std::sin(x) / x - std::cos(x)) / x2;
    }
  }
  if (series_safe(order, x)) {
    // 0F1(; order+1; -x^2/4), direct term recurrence.
    const double q = 0.25 * x * x;
    double term = 1.0;
    KahanSum sum;
    sum.add(term);
    for (int k = 1; k <= ctl.max_terms; ++k) {
      term *= -q / (k * (order + k));
      sum.add(term);
      if (k * (order + k) > q &&
          std::abs(term) <= ctl.abs_tol + ctl.rel_tol * std::abs(sum.s))
        return sum.s;
    }
    throw numeric_error("bessel_j_scaled: series did not converge");
  }
  const double j = bessel_j(order, x, ctl);
  if (j == 0.0) return 0.0;
  const double lpre =
      log_gamma(order + 1.0) + order * (std::log(2.0) - std::log(x));
  return std::copysign(std::exp(lpre + std::log(std::abs(j))), j);
}

double gauss_2f1(double alpha, double beta, double gamma, double z,
                 const SeriesControl& ctl) {
  if (!(gamma > beta && beta > 0.0))
    throw std::domain_error("gauss_2f1: requires gamma > beta > 0");
  if (!(z >= 0.0 && z < 1.0))
    throw std::domain_error("gauss_2f1: requires 0 <= z < 1");
  if (z == 0.0) return 1.0;

  const double nearest = std::nearbyint(alpha);
  const bool polynomial = alpha <= 0.0 && std::abs(alpha - nearest) < 1e-12;

  if (z <= 0.5 || polynomial) {
    double term = 1.0;
    KahanSum sum;
    sum.add(term);
    for (int k = 0; k < ctl.max_terms; ++k) {
      term *= (alpha + k) * (beta + k) / ((gamma + k) * (k + 1.0)) * z;
      sum.add(term);
      if (term == 0.0) return sum.s;  // polynomial terminated
      if (k >= 1 && std::abs(term) <= ctl.abs_tol + ctl.rel_tol * std::abs(sum.s))
        return sum.s;
    }
    throw numeric_error("gauss_2f1: series did not converge");
  }

  // Euler integral: Gamma(gamma)/(Gamma(beta)Gamma(gamma-beta)) *
  // int_0^1 u^{beta-1} (1-u)^{gamma-beta-1} (1-z u)^{-alpha} du.
  // The endpoint powers use the exact endpoint distances the integrator
  // maintains; 1 - z u is computed as (1-z) + z (1-u) to stay accurate
  // near u = 1 when z is close to 1.
  const double lpref =
      log_gamma(gamma) - log_gamma(beta) - log_gamma(gamma - beta);
  const double omz = 1.0 - z;
  const double integral = quad::tanh_sinh(
      [&](double /*u*/, double du0, double du1) {
        const double base = omz + z * du1;
        return std::pow(du0, beta - 1.0) * std::pow(du1, gamma - beta - 1.0) *
               std::pow(base, -alpha);
      },
      0.0, 1.0, std::max(ctl.abs_tol, 1e-15), std::max(ctl.rel_tol, 1e-13));
  return std::exp(lpref) * integral;
}

double mittag_leffler(double alpha, double beta, double x,
                      const SeriesControl& ctl) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::domain_error("mittag_leffler: requires alpha, beta > 0");
  if (!(x >= 0.0)) throw std::domain_error("mittag_leffler: requires x >= 0");
  if (x == 0.0) return std::exp(-log_gamma(beta));

  const double lx = std::log(x);
  KahanSum sum;
  double prev_term = 0.0;
  for (int k = 0; k <= ctl.max_terms; ++k) {
    const double lt = k * lx - log_gamma(alpha * k + beta);
    const double term = std::exp(lt);
    if (!std::isfinite(term) || !std::isfinite(sum.s))
      throw numeric_error("mittag_leffler: overflow in series");
    sum.add(term);
    // Term ratios x / (Gamma(a(k+1)+b)/Gamma(ak+b)) decrease monotonically
    // (log-convexity), so once terms shrink the tail is bounded by the
    // geometric series with the current ratio.
    if (k >= 1 && term < prev_term) {
      const double r = term / prev_term;
      if (term * r / (1.0 - r) <= ctl.abs_tol + ctl.rel_tol * sum.s)
        return sum.s;
    }
    prev_term = term;
  }
  throw numeric_error("mittag_leffler: truncation budget exceeded");
}

}  // namespace randflight::specfun
