#pragma once

#include <cstddef>
#include <vector>

#include "randflight/rng.hpp"

namespace randflight {

// Parameters of the rescaled generalized Dirichlet law on the open simplex
// { tau_k > 0, sum tau_k < horizon } in R^n.
struct GDParams {
  std::vector<double> a;
  std::vector<double> b;
  double horizon;

  GDParams(std::vector<double> a_in, std::vector<double> b_in, double horizon_in);
  std::size_t n() const { return a.size(); }
};

// First n step durations of a flight with n direction changes; the implied
// final duration is horizon - sum(tau).
struct DurationVector {
  std::vector<double> tau;
  double horizon = 0.0;

  double last() const;
};

namespace detail {
// log of the GD normalizing constant C(a, b, horizon).
double gd_log_constant(const GDParams& p);
// Second shape of the k-th stick-breaking beta: b_k + sum_{j>k} (a_j+b_j-1).
double gd_beta_shape(const GDParams& p, std::size_t k);
}  // namespace detail

// GD density at an interior point tau (size n). Throws std::domain_error if
// tau lies outside the open simplex.
double gd_density(const GDParams& p, const std::vector<double>& tau);

// Exact stick-breaking sampler: tau_k = Z_k * (horizon - sum_{j<k} tau_j)
// with Z_k ~ Beta(a_k, gd_beta_shape(k)) independent.
DurationVector sample_gd(const GDParams& p, RngStream& rng);

// Uniform direction on S^{d-1}: d standard normals, normalized.
std::vector<double> sample_direction(int d, RngStream& rng);

// Number-of-changes law P(N = n) proportional to (lambda_t)^n /
// Gamma(n(d/2-1) + d/2), normalized by the generalized Mittag-Leffler value.
// Precomputes the inverse-CDF table once; tail truncated below 1e-12.
class FractionalPoissonTable {
 public:
  FractionalPoissonTable(int d, double lambda_t);

  int sample(RngStream& rng) const;
  double prob(int n) const;
  int max_n() const { return static_cast<int>(cumulative_.size()) - 1; }

 private:
  std::vector<double> prob_;
  std::vector<double> cumulative_;
};

// One draw of the number of direction changes up to the horizon.
int sample_fractional_poisson(int d, double lambda_t, RngStream& rng);

}  // namespace randflight
