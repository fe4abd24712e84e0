#include "randflight/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "randflight/quadrature.hpp"
#include "randflight/specfun.hpp"

namespace randflight {

namespace {

constexpr double kPi = 3.14159265358979323846;

using specfun::bessel_j_scaled;
using specfun::log_gamma;
using specfun::regularized_incomplete_beta;

double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

// c^2 t^2 - r^2 without cancellation near the boundary.
double ball_gap(double ct, double r) { return (ct - r) * (ct + r); }

void check_radius(const FlightConfig& cfg, double r, const char* who) {
  if (!(r >= 0.0) || !(r < cfg.ct()))
    throw std::domain_error(std::string(who) + ": requires 0 <= r < c t");
}

// All solvable laws share the radial structure R^2/(ct)^2 ~ Beta(d/2, q);
// the position density is Gamma(q+d/2)/Gamma(q) (c^2t^2-r^2)^{q-1} /
// (pi^{d/2} (ct)^{2q+d-2}).
double beta_kernel_density(int d, double q, const FlightConfig& cfg, double r) {
  const double ct = cfg.ct();
  const double lv = log_gamma(q + 0.5 * d) - log_gamma(q) -
                    0.5 * d * std::log(kPi) +
                    (q - 1.0) * std::log(ball_gap(ct, r)) -
                    (2.0 * q + d - 2.0) * std::log(ct);
  return std::exp(lv);
}

double beta_kernel_cdf(int d, double q, const FlightConfig& cfg, double z) {
  const double ct = cfg.ct();
  if (z <= 0.0) return 0.0;
  if (z >= ct) return 1.0;
  const double u = (z / ct) * (z / ct);
  return regularized_incomplete_beta(u, 0.5 * d, q);
}

// Beta shape q of the radial law for each solvable family.
double q_first(int d, int n, int j) {
  return 0.5 * (n * (d - 2.0) + std::min(j, n));
}
double q_second(int h, int d, int n) { return 0.5 * n * (d - h); }

void check_first(int d, int n, int j) {
  if (d < 3) throw std::invalid_argument("first type: requires d >= 3");
  if (n < 1) throw std::invalid_argument("first type: requires n >= 1");
  if (j < 1) throw std::invalid_argument("first type: requires j >= 1");
}

void check_second(int h, int d, int n) {
  if (h != 1 && h != 2)
    throw std::invalid_argument("second type: requires h in {1,2}");
  if (n < 1) throw std::invalid_argument("second type: requires n >= 1");
  if (d < (h == 1 ? 2 : 3))
    throw std::invalid_argument("second type: requires d >= 2 (h=1) or d >= 3 (h=2)");
}

// Sum of GL15 panels sized so each carries at most ~pi of oscillation phase.
template <class F>
double panel_gl(F&& f, double a, double b, double omega) {
  const double span = b - a;
  int panels = 4;
  if (omega * span > 4.0 * kPi)
    panels = static_cast<int>(std::ceil(omega * span / kPi));
  panels = std::min(panels, 1 << 14);
  double sum = 0.0;
  const double h = span / panels;
  for (int i = 0; i < panels; ++i)
    sum += quad::gauss_legendre_15(f, a + i * h, a + (i + 1) * h);
  return sum;
}

}  // namespace

double sphere_measure(int d) {
  if (d < 1) throw std::invalid_argument("sphere_measure: requires d >= 1");
  return std::exp(std::log(2.0) + 0.5 * d * std::log(kPi) -
                  log_gamma(0.5 * d));
}

// ---- radial law wrapper ----

namespace {

// Cached CDF table in theta-space (r = ct sin(theta)). Interior panels are
// interpolated with cubic Hermite from the panel quadratures and the exact
// integrand slopes; the final panel (where the integrand may be singular at
// theta = pi/2) is integrated directly on demand.
struct CdfTable {
  static constexpr int kPanels = 1024;

  int d = 0;
  double ct = 0.0;
  double h = 0.0;
  double sphere = 0.0;
  std::vector<double> cum;    // size kPanels+1
  std::vector<double> slope;  // size kPanels (knots 0..kPanels-1)
  std::function<double(double)> posdens;

  double radial_density(double r) const {
    if (!(r >= 0.0) || r >= ct) return 0.0;
    return sphere * std::pow(r, d - 1) * posdens(r);
  }

  double integrand(double theta) const {
    const double r = ct * std::sin(theta);
    return radial_density(r) * ct * std::cos(theta);
  }

  void build() {
    h = 0.5 * kPi / kPanels;
    cum.assign(kPanels + 1, 0.0);
    slope.assign(kPanels, 0.0);
    for (int i = 0; i < kPanels; ++i) {
      slope[i] = integrand(i * h);
      cum[i + 1] = cum[i] + quad::gauss_legendre_15(
                                [this](double th) { return integrand(th); },
                                i * h, (i + 1) * h);
    }
  }

  double cdf(double z) const {
    if (!(z > 0.0)) return 0.0;
    if (z >= ct) return cum[kPanels];
    const double theta = std::asin(std::min(z / ct, 1.0));
    int i = static_cast<int>(theta / h);
    i = std::min(i, kPanels - 1);
    const double t0 = i * h;
    if (i == kPanels - 1) {
      return cum[i] + quad::gauss_legendre_15(
                          [this](double th) { return integrand(th); }, t0,
                          theta);
    }
    const double s = (theta - t0) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    const double v = h00 * cum[i] + h * h10 * slope[i] + h01 * cum[i + 1] +
                     h * h11 * slope[i + 1];
    return std::min(std::max(v, 0.0), cum[kPanels]);
  }
};

}  // namespace

RadialLaw radial_law(std::function<double(double)> position_density, int d,
                     const FlightConfig& cfg, double atom) {
  if (d != cfg.d) throw std::invalid_argument("radial_law: d must match cfg.d");
  if (!(atom >= 0.0 && atom < 1.0))
    throw std::invalid_argument("radial_law: atom must lie in [0, 1)");
  auto tab = std::make_shared<CdfTable>();
  tab->d = d;
  tab->ct = cfg.ct();
  tab->sphere = sphere_measure(d);
  tab->posdens = std::move(position_density);
  tab->build();

  RadialLaw law;
  law.ct = cfg.ct();
  law.atom_at_ct = atom;
  law.density_at = [tab](double r) { return tab->radial_density(r); };
  law.cdf_at = [tab](double z) { return tab->cdf(z); };
  return law;
}

// ---- two-step (n = 1) laws ----

double density_two_step(int d, double a1, double b1, const FlightConfig& cfg,
                        double r) {
  if (d < 2) throw std::invalid_argument("density_two_step: requires d >= 2");
  if (!(a1 > 0.0) || !(b1 > 0.0))
    throw std::invalid_argument("density_two_step: requires a1, b1 > 0");
  check_radius(cfg, r, "density_two_step");

  const double ct = cfg.ct();
  const double rr = r / ct;
  // Rescaled integrand is O(1); all magnitude lives in the log prefactor.
  const double integral = quad::tanh_sinh(
      [&](double z, double da, double db) {
        return std::pow(1.0 + rr * z, a1 - d + 1.0) *
               std::pow(1.0 - rr * z, b1 - d + 1.0) *
               std::pow(da * db, 0.5 * (d - 3.0));
      },
      -1.0, 1.0, 1e-13, 1e-11);

  const double lpref =
      -(d - 2.0) * std::log(2.0) - 0.5 * (d + 1.0) * std::log(kPi) +
      2.0 * log_gamma(0.5 * d) - log_gamma(0.5 * (d - 1.0)) -
      log_beta(a1, b1) - (a1 + b1 - 1.0) * std::log(cfg.t) +
      0.5 * (d - 3.0) * std::log(ball_gap(ct, r)) -
      (2.0 * d - 4.0) * std::log(cfg.c) -
      (a1 + b1 - 2.0 * d + 3.0) * std::log(2.0 * cfg.c) +
      (a1 + b1 - 2.0 * d + 2.0) * std::log(ct);
  return std::exp(lpref) * integral;
}

double density_two_step_equal(int d, double a, const FlightConfig& cfg,
                              double r) {
  if (d < 2)
    throw std::invalid_argument("density_two_step_equal: requires d >= 2");
  if (!(a > 0.0))
    throw std::invalid_argument("density_two_step_equal: requires a > 0");
  check_radius(cfg, r, "density_two_step_equal");

  const double ct = cfg.ct();
  const double z = (r / ct) * (r / ct);
  const double f = specfun::gauss_2f1(d - 1.0 - a, 0.5, 0.5 * d, z);
  const double lpref = -(2.0 * a - d + 1.0) * std::log(2.0) -
                       0.5 * d * std::log(kPi) + log_gamma(0.5 * d) +
                       log_gamma(2.0 * a) - 2.0 * log_gamma(a) +
                       0.5 * (d - 3.0) * std::log(ball_gap(ct, r)) -
                       (2.0 * d - 3.0) * std::log(ct);
  return std::exp(lpref) * f;
}

namespace {

// r -> 0 limit of the d = 3 two-step density: 2^{1-a-b}/(pi c^3 t^3 B(a,b)).
double d3_two_step_origin(double a1, double b1, const FlightConfig& cfg) {
  const double lv = (1.0 - a1 - b1) * std::log(2.0) - std::log(kPi) -
                    3.0 * std::log(cfg.ct()) - log_beta(a1, b1);
  return std::exp(lv);
}

bool near_integer(double x) { return std::abs(x - std::nearbyint(x)) < 1e-9; }

double d3_incomplete_beta(double a1, double b1, const FlightConfig& cfg,
                          double r) {
  const double ct = cfg.ct();
  const double xp = 0.5 + 0.5 * r / ct;
  const double xm = 0.5 - 0.5 * r / ct;
  const double diff = regularized_incomplete_beta(xp, a1 - 1.0, b1 - 1.0) -
                      regularized_incomplete_beta(xm, a1 - 1.0, b1 - 1.0);
  const double lratio = log_beta(a1 - 1.0, b1 - 1.0) - log_beta(a1, b1);
  return std::exp(lratio) * diff / (8.0 * kPi * ct * ct * r);
}

double d3_binomial_sum(double a1, double b1, const FlightConfig& cfg,
                       double r) {
  const double ct = cfg.ct();
  const int m = static_cast<int>(std::nearbyint(a1 + b1)) - 3;
  const int kmin = static_cast<int>(std::nearbyint(a1)) - 1;
  const double lo = (ct - r) / (2.0 * ct);
  const double hi = (ct + r) / (2.0 * ct);
  // Work with x+- = (ct +- r)/(2ct) so the powers stay O(1) for any scale.
  double binom = 1.0;
  for (int q = 0; q < kmin; ++q) binom *= static_cast<double>(m - q) / (q + 1);
  double sum = 0.0;
  for (int k = kmin; k <= m; ++k) {
    sum += binom * (std::pow(hi, k) * std::pow(lo, m - k) -
                    std::pow(lo, k) * std::pow(hi, m - k));
    binom *= static_cast<double>(m - k) / (k + 1);
  }
  const double cst =
      (a1 + b1 - 1.0) * (a1 + b1 - 2.0) / ((a1 - 1.0) * (b1 - 1.0));
  return cst * sum / (8.0 * kPi * ct * ct * r);
}

double d3_quadrature(double a1, double b1, const FlightConfig& cfg, double r) {
  const double t = cfg.t;
  const double lo = 0.5 * t - 0.5 * r / cfg.c;
  const double hi = 0.5 * t + 0.5 * r / cfg.c;
  const auto f = [&](double tau) {
    return std::pow(tau, a1 - 2.0) * std::pow(t - tau, b1 - 2.0);
  };
  const double probe = quad::gauss_legendre_15(f, lo, hi);
  const double integral =
      quad::adaptive_gauss_legendre(f, lo, hi, 1e-12 * std::abs(probe) + 1e-300);
  const double lpref = -log_beta(a1, b1) - (a1 + b1 - 1.0) * std::log(t);
  return std::exp(lpref) * integral / (8.0 * kPi * cfg.c * cfg.c * r);
}

}  // namespace

double density_d3_two_step(double a1, double b1, const FlightConfig& cfg,
                           double r, D3TwoStepMethod method) {
  if (cfg.d != 3)
    throw std::invalid_argument("density_d3_two_step: requires cfg.d == 3");
  if (!(a1 > 0.0) || !(b1 > 0.0))
    throw std::invalid_argument("density_d3_two_step: requires a1, b1 > 0");
  check_radius(cfg, r, "density_d3_two_step");
  if (r < 1e-8 * cfg.ct()) return d3_two_step_origin(a1, b1, cfg);

  const bool integer_params = a1 >= 2.0 && b1 >= 2.0 && near_integer(a1) &&
                              near_integer(b1);
  switch (method) {
    case D3TwoStepMethod::auto_select:
      if (integer_params) return d3_binomial_sum(a1, b1, cfg, r);
      if (a1 > 1.0 && b1 > 1.0) return d3_incomplete_beta(a1, b1, cfg, r);
      return d3_quadrature(a1, b1, cfg, r);
    case D3TwoStepMethod::incomplete_beta:
      if (!(a1 > 1.0) || !(b1 > 1.0))
        throw std::invalid_argument(
            "density_d3_two_step: incomplete-beta form requires a1, b1 > 1");
      return d3_incomplete_beta(a1, b1, cfg, r);
    case D3TwoStepMethod::binomial_sum:
      if (!integer_params)
        throw std::invalid_argument(
            "density_d3_two_step: binomial form requires integer a1, b1 >= 2");
      return d3_binomial_sum(a1, b1, cfg, r);
    case D3TwoStepMethod::quadrature:
      return d3_quadrature(a1, b1, cfg, r);
  }
  throw std::invalid_argument("density_d3_two_step: unknown method");
}

// ---- solvable families ----

double density_solvable_first(int d, int n, int j, const FlightConfig& cfg,
                              double r) {
  check_first(d, n, j);
  check_radius(cfg, r, "density_solvable_first");
  return beta_kernel_density(d, q_first(d, n, j), cfg, r);
}

double cdf_solvable_first(int d, int n, int j, const FlightConfig& cfg,
                          double z) {
  check_first(d, n, j);
  return beta_kernel_cdf(d, q_first(d, n, j), cfg, z);
}

double density_solvable_second(int h, int d, int n, const FlightConfig& cfg,
                               double r) {
  check_second(h, d, n);
  check_radius(cfg, r, "density_solvable_second");
  return beta_kernel_density(d, q_second(h, d, n), cfg, r);
}

double cdf_solvable_second(int h, int d, int n, const FlightConfig& cfg,
                           double z) {
  check_second(h, d, n);
  return beta_kernel_cdf(d, q_second(h, d, n), cfg, z);
}

double cf_conditional(const SolvableModel& m, int d, int n, double norm_alpha,
                      const FlightConfig& cfg) {
  if (!(norm_alpha >= 0.0))
    throw std::domain_error("cf_conditional: requires |alpha| >= 0");
  double q = 0.0;
  switch (m.family) {
    case SolvableFamily::first_type:
      check_first(d, n, m.j);
      q = q_first(d, n, m.j);
      break;
    case SolvableFamily::second_type_y:
    case SolvableFamily::second_type_z:
      check_second(m.h, d, n);
      q = q_second(m.h, d, n);
      break;
  }
  // Beta mixing lifts the kernel order: mu = (d/2 - 1) + q.
  return bessel_j_scaled(0.5 * d - 1.0 + q, cfg.ct() * norm_alpha);
}

// ---- general-parameter numerics ----

double cf_general_numeric(int d, const GDParams& p, double norm_alpha,
                          const FlightConfig& cfg) {
  if (d < 2) throw std::invalid_argument("cf_general_numeric: requires d >= 2");
  if (p.n() > 2)
    throw std::invalid_argument("cf_general_numeric: requires n <= 2");
  if (p.horizon != cfg.t)
    throw std::invalid_argument("cf_general_numeric: p.horizon must equal cfg.t");
  if (!(norm_alpha >= 0.0))
    throw std::domain_error("cf_general_numeric: requires |alpha| >= 0");
  if (norm_alpha == 0.0) return 1.0;

  const double nu = 0.5 * d - 1.0;
  const double c = cfg.c;
  const double t = cfg.t;
  const double rho = norm_alpha;
  const auto kern = [&](double s) { return bessel_j_scaled(nu, c * s * rho); };
  const double lc = detail::gd_log_constant(p);
  const double omega = 2.0 * c * rho;  // fastest phase rate in tau

  if (p.n() == 1) {
    const double a = p.a[0];
    const double b = p.b[0];
    if (a >= 1.0 && b >= 1.0) {
      return panel_gl(
          [&](double tau) {
            const double db = t - tau;
            return std::exp(lc) * std::pow(tau, a - 1.0) *
                   std::pow(db, b - 1.0) * kern(tau) * kern(db);
          },
          0.0, t, omega);
    }
    return quad::tanh_sinh(
        [&](double /*tau*/, double da, double db) {
          return std::exp(lc + (a - 1.0) * std::log(da) +
                          (b - 1.0) * std::log(db)) *
                 kern(da) * kern(db);
        },
        0.0, t, 1e-12, 1e-9);
  }

  const double a1 = p.a[0], b1 = p.b[0];
  const double a2 = p.a[1], b2 = p.b[1];
  // Inner simplex layer: int_0^R s^{a2-1} (R-s)^{b2-1} K(s) K(R-s) ds.
  const auto inner = [&](double R) {
    if (R <= 0.0) return 0.0;
    if (a2 >= 1.0 && b2 >= 1.0) {
      return panel_gl(
          [&](double s) {
            const double ds = R - s;
            return std::pow(s, a2 - 1.0) * std::pow(ds, b2 - 1.0) * kern(s) *
                   kern(ds);
          },
          0.0, R, omega);
    }
    return quad::tanh_sinh(
        [&](double /*s*/, double da, double db) {
          return std::pow(da, a2 - 1.0) * std::pow(db, b2 - 1.0) * kern(da) *
                 kern(db);
        },
        0.0, R, 1e-13, 1e-10);
  };

  if (a1 >= 1.0 && b1 >= 1.0) {
    return panel_gl(
        [&](double tau) {
          const double db = t - tau;
          return std::exp(lc) * std::pow(tau, a1 - 1.0) *
                 std::pow(db, b1 - 1.0) * kern(tau) * inner(db);
        },
        0.0, t, omega);
  }
  return quad::tanh_sinh(
      [&](double /*tau*/, double da, double db) {
        return std::exp(lc + (a1 - 1.0) * std::log(da) +
                        (b1 - 1.0) * std::log(db)) *
               kern(da) * inner(db);
      },
      0.0, t, 1e-12, 1e-9);
}

double density_general_numeric(int d, const GDParams& p,
                               const FlightConfig& cfg, double r) {
  if (d < 2 || d > 4)
    throw std::invalid_argument("density_general_numeric: requires 2 <= d <= 4");
  if (p.n() > 2)
    throw std::invalid_argument("density_general_numeric: requires n <= 2");
  check_radius(cfg, r, "density_general_numeric");

  const double nu = 0.5 * d - 1.0;
  const double ct = cfg.ct();
  const auto integrand = [&](double rho) {
    return std::pow(rho, d - 1.0) * bessel_j_scaled(nu, rho * r) *
           cf_general_numeric(d, p, rho, cfg);
  };

  // One chunk per half-period of the fastest oscillation; Wynn extrapolation
  // of the chunk partial sums handles both decaying and merely bounded tails.
  const double chunk = kPi / (ct + r);
  quad::WynnEpsilon eps;
  double total = 0.0;
  double prev = 0.0;
  int stable = 0;
  constexpr int kMaxChunks = 72;
  for (int m = 0; m < kMaxChunks; ++m) {
    const double a = m * chunk;
    const double b = a + chunk;
    const double mid = 0.5 * (a + b);
    total += quad::gauss_legendre_15(integrand, a, mid) +
             quad::gauss_legendre_15(integrand, mid, b);
    eps.add(total);
    if (m >= 8) {
      const double v = eps.value();
      if (std::abs(v - prev) <= 1e-7 + 1e-6 * std::abs(v)) {
        if (++stable >= 2) break;
      } else {
        stable = 0;
      }
      prev = v;
    }
  }
  const double val = eps.value();
  if (!std::isfinite(val))
    throw numeric_error("density_general_numeric: inversion did not stabilize");
  const double lpref =
      -0.5 * d * std::log(2.0 * kPi) - nu * std::log(2.0) - log_gamma(nu + 1.0);
  return std::exp(lpref) * val;
}

// ---- unconditional law ----

double density_unconditional(int d, double lambda, const FlightConfig& cfg,
                             double r) {
  if (d < 3)
    throw std::invalid_argument("density_unconditional: requires d >= 3");
  if (!(lambda > 0.0))
    throw std::invalid_argument("density_unconditional: requires lambda > 0");
  check_radius(cfg, r, "density_unconditional");

  const double nu = 0.5 * d - 1.0;
  const double lt = lambda * cfg.t;
  const double ct = cfg.ct();
  const double gap = ball_gap(ct, r);
  const double inner_arg =
      lt * std::exp(nu * std::log(gap) - (d - 2.0) * std::log(ct));
  const double num = specfun::mittag_leffler(nu, nu, inner_arg);
  const double den = specfun::mittag_leffler(nu, nu + 1.0, lt);
  const double lpref = std::log(lt) + (0.5 * d - 2.0) * std::log(gap) -
                       0.5 * d * std::log(kPi) -
                       (2.0 * d - 4.0) * std::log(ct);
  return std::exp(lpref) * num / den;
}

double atom_unconditional(int d, double lambda_t) {
  if (d < 3) throw std::invalid_argument("atom_unconditional: requires d >= 3");
  if (!(lambda_t > 0.0))
    throw std::invalid_argument("atom_unconditional: requires lambda_t > 0");
  const double nu = 0.5 * d - 1.0;
  return 1.0 /
         (specfun::mittag_leffler(nu, nu + 1.0, lambda_t) *
          std::exp(log_gamma(0.5 * d)));
}

double radial_moment(int d, double lambda, const FlightConfig& cfg, double p) {
  if (d < 3) throw std::invalid_argument("radial_moment: requires d >= 3");
  if (!(lambda > 0.0))
    throw std::invalid_argument("radial_moment: requires lambda > 0");
  if (!(p >= 0.0)) throw std::domain_error("radial_moment: requires p >= 0");

  const double nu = 0.5 * d - 1.0;
  const double lt = lambda * cfg.t;
  const double den = specfun::mittag_leffler(nu, nu + 1.0, lt);
  // Continuous part sums the conditional Beta moments against the change
  // count; the atom contributes (ct)^p P(N = 0).
  const double series = specfun::mittag_leffler(nu, d + 0.5 * p - 1.0, lt);
  const double body =
      std::exp(log_gamma(0.5 * (d + p)) - log_gamma(0.5 * d)) * lt * series +
      std::exp(-log_gamma(0.5 * d));
  return std::pow(cfg.ct(), p) * body / den;
}

}  // namespace randflight
