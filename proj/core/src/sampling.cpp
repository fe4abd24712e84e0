#include "randflight/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "randflight/specfun.hpp"

namespace randflight {

using specfun::log_gamma;

GDParams::GDParams(std::vector<double> a_in, std::vector<double> b_in,
                   double horizon_in)
    : a(std::move(a_in)), b(std::move(b_in)), horizon(horizon_in) {
  if (a.empty() || a.size() != b.size())
    throw std::invalid_argument("GDParams: a and b must be nonempty, equal length");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!(a[k] > 0.0) || !(b[k] > 0.0))
      throw std::invalid_argument("GDParams: shape parameters must be positive");
  if (!(horizon > 0.0))
    throw std::invalid_argument("GDParams: horizon must be positive");
}

double DurationVector::last() const {
  double s = 0.0;
  for (double v : tau) s += v;
  return horizon - s;
}

namespace detail {

double gd_beta_shape(const GDParams& p, std::size_t k) {
  double s = p.b[k];
  for (std::size_t j = k + 1; j < p.n(); ++j) s += p.a[j] + p.b[j] - 1.0;
  return s;
}

double gd_log_constant(const GDParams& p) {
  // C = t^{-sum(a_k+b_k-1)} prod_k 1/B(a_k, beta_k) with beta_k the
  // stick-breaking shape; Gamma(a_k + beta_k) = Gamma(1 + suffix_k).
  const std::size_t n = p.n();
  double exponent = 0.0;
  double lc = 0.0;
  double suffix = 0.0;  // sum_{j>=k} (a_j + b_j - 1), built backwards
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t k = n - 1 - r;
    const double beta_k = p.b[k] + suffix;
    suffix += p.a[k] + p.b[k] - 1.0;
    lc += log_gamma(1.0 + suffix) - log_gamma(p.a[k]) - log_gamma(beta_k);
    exponent += p.a[k] + p.b[k] - 1.0;
  }
  return lc - exponent * std::log(p.horizon);
}

}  // namespace detail

double gd_density(const GDParams& p, const std::vector<double>& tau) {
  const std::size_t n = p.n();
  if (tau.size() != n)
    throw std::invalid_argument("gd_density: tau must have n coordinates");
  double sum = 0.0;
  for (double v : tau) {
    if (!(v > 0.0)) throw std::domain_error("gd_density: tau outside open simplex");
    sum += v;
  }
  if (!(sum < p.horizon))
    throw std::domain_error("gd_density: tau outside open simplex");

  double lp = detail::gd_log_constant(p);
  double partial = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    partial += tau[k];
    lp += (p.a[k] - 1.0) * std::log(tau[k]) +
          (p.b[k] - 1.0) * std::log(p.horizon - partial);
  }
  return std::exp(lp);
}

DurationVector sample_gd(const GDParams& p, RngStream& rng) {
  const std::size_t n = p.n();
  DurationVector out;
  out.horizon = p.horizon;
  out.tau.resize(n);
  for (;;) {
    double rem = p.horizon;
    bool ok = true;
    for (std::size_t k = 0; k < n; ++k) {
      const double z = rng.beta(p.a[k], detail::gd_beta_shape(p, k));
      out.tau[k] = z * rem;
      rem *= 1.0 - z;
      if (!(out.tau[k] > 0.0) || !(rem > 0.0)) {
        ok = false;  // rounding hit the simplex boundary; redraw
        break;
      }
    }
    if (ok && out.last() > 0.0) return out;
  }
}

std::vector<double> sample_direction(int d, RngStream& rng) {
  if (d < 2) throw std::invalid_argument("sample_direction: requires d >= 2");
  std::vector<double> v(static_cast<std::size_t>(d));
  for (;;) {
    double norm2 = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      norm2 += x * x;
    }
    if (norm2 > 1e-300) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& x : v) x *= inv;
      return v;
    }
  }
}

FractionalPoissonTable::FractionalPoissonTable(int d, double lambda_t) {
  if (d < 3)
    throw std::invalid_argument("FractionalPoissonTable: requires d >= 3");
  if (!(lambda_t > 0.0))
    throw std::invalid_argument("FractionalPoissonTable: requires lambda_t > 0");
  const double alpha = 0.5 * d - 1.0;
  const double beta = 0.5 * d;
  const double norm = specfun::mittag_leffler(alpha, beta, lambda_t);
  const double lx = std::log(lambda_t);

  double cum = 0.0;
  double prev = 0.0;
  for (int n = 0;; ++n) {
    const double w = std::exp(n * lx - log_gamma(alpha * n + beta)) / norm;
    prob_.push_back(w);
    cum += w;
    cumulative_.push_back(cum);
    if (n >= 1 && w < prev && w < 1e-12) break;
    if (n > 200000)
      throw numeric_error("FractionalPoissonTable: tail did not truncate");
    prev = w;
  }
}

int FractionalPoissonTable::sample(RngStream& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) return max_n();
  return static_cast<int>(it - cumulative_.begin());
}

double FractionalPoissonTable::prob(int n) const {
  if (n < 0) throw std::domain_error("FractionalPoissonTable: n must be >= 0");
  if (n >= static_cast<int>(prob_.size())) return 0.0;
  return prob_[static_cast<std::size_t>(n)];
}

int sample_fractional_poisson(int d, double lambda_t, RngStream& rng) {
  return FractionalPoissonTable(d, lambda_t).sample(rng);
}

}  // namespace randflight
