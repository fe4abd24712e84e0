#pragma once

#include <functional>
#include <memory>

#include "randflight/flight.hpp"
#include "randflight/sampling.hpp"

namespace randflight {

// Surface measure of S^{d-1}: 2 pi^{d/2} / Gamma(d/2).
double sphere_measure(int d);

// Law of the radial part |X| on [0, ct], split into a continuous part and a
// possible atom at ct. density_at and cdf_at describe the continuous part
// only; cdf_at(ct) + atom_at_ct should equal 1 (asserted by callers, never
// forced here).
struct RadialLaw {
  std::function<double(double)> density_at;
  std::function<double(double)> cdf_at;
  double atom_at_ct = 0.0;
  double ct = 0.0;

  double total_mass() const { return cdf_at(ct) + atom_at_ct; }
};

// Wraps a position-space density p(|x|) into its radial law, with the CDF
// tabulated by panel quadrature under the r = ct sin(theta) substitution
// (which flattens the (c^2t^2 - r^2)^q endpoint factors, q >= -1/2).
RadialLaw radial_law(std::function<double(double)> position_density, int d,
                     const FlightConfig& cfg, double atom = 0.0);

// ---- two-step (n = 1) laws ----

// General (a1, b1) two-step density via the one-dimensional integral form,
// evaluated by endpoint-flattening quadrature. Kept quadrature-only so the
// closed forms below remain independent cross-checks of one another.
double density_two_step(int d, double a1, double b1, const FlightConfig& cfg,
                        double r);

// Equal-parameter (a1 = b1 = a) closed form through Gauss 2F1.
double density_two_step_equal(int d, double a, const FlightConfig& cfg,
                              double r);

// d = 3 two-step representations.
enum class D3TwoStepMethod { auto_select, incomplete_beta, binomial_sum, quadrature };
double density_d3_two_step(double a1, double b1, const FlightConfig& cfg,
                           double r,
                           D3TwoStepMethod method = D3TwoStepMethod::auto_select);

// ---- solvable families ----

// First-type law with n changes and switch index j (j >= n delegates to the
// standard Dirichlet case). d >= 3.
double density_solvable_first(int d, int n, int j, const FlightConfig& cfg,
                              double r);
// P(|X| <= z) = I_{z^2/(ct)^2}(d/2, n(d/2-1) + min(j,n)/2).
double cdf_solvable_first(int d, int n, int j, const FlightConfig& cfg,
                          double z);

// Second-type law (both Y and Z variants share it), h in {1, 2}.
double density_solvable_second(int h, int d, int n, const FlightConfig& cfg,
                               double r);
double cdf_solvable_second(int h, int d, int n, const FlightConfig& cfg,
                           double z);

// Characteristic function of the conditional flight under a solvable model:
// 2^mu Gamma(mu+1) J_mu(ct rho) / (ct rho)^mu with the family's Bessel order
// mu. rho = |alpha| >= 0.
double cf_conditional(const SolvableModel& m, int d, int n, double norm_alpha,
                      const FlightConfig& cfg);

// Characteristic function for arbitrary GD parameters with n <= 2, by direct
// simplex quadrature of the product of normalized Bessel kernels.
double cf_general_numeric(int d, const GDParams& p, double norm_alpha,
                          const FlightConfig& cfg);

// Position density for arbitrary GD parameters (d <= 4, n <= 2) by Hankel
// inversion: the oscillatory frequency integral is summed period by period
// and accelerated with Wynn extrapolation. Documented accuracy ~1e-4 for
// n = 1 and ~1e-3 for n = 2.
double density_general_numeric(int d, const GDParams& p,
                               const FlightConfig& cfg, double r);

// ---- unconditional (fractional Poisson number of changes, h = 2 family) ----

// Absolutely continuous component of the unconditional position law, d >= 3.
double density_unconditional(int d, double lambda, const FlightConfig& cfg,
                             double r);
// P(|X| = ct) = 1 / (E_{d/2-1, d/2}(lambda t) Gamma(d/2)).
double atom_unconditional(int d, double lambda_t);
// E(|X|^p) of the unconditional law.
double radial_moment(int d, double lambda, const FlightConfig& cfg, double p);

}  // namespace randflight
