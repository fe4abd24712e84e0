#include "randflight/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "randflight/quadrature.hpp"
#include "randflight/specfun.hpp"

namespace randflight {

using specfun::log_gamma;
using specfun::regularized_incomplete_beta;

double kolmogorov_q(double z) {
  // Jacobi-theta tails of the Kolmogorov distribution, split at the usual
  // crossover for fast convergence on both sides.
  const double u = std::abs(z);
  if (u < 0.2) return 1.0;
  if (u < 0.755) {
    const double v = 1.0 / (u * u);
    const double w = 2.5066282746310002;  // sqrt(2 pi)
    return 1.0 - w *
                     (std::exp(-1.2337005501361697 * v) +
                      std::exp(-11.103304951225528 * v) +
                      std::exp(-30.842513753404244 * v)) /
                     u;
  }
  if (u >= 6.8116) return 0.0;
  const double z2 = u * u;
  double sum = 0.0;
  for (int j = 1; j <= 4; ++j) {
    const double term = std::exp(-2.0 * j * j * z2);
    sum += (j % 2 == 1 ? term : -term);
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_q: requires a > 0");
  if (!(x >= 0.0)) throw std::domain_error("gamma_q: requires x >= 0");
  if (x == 0.0) return 1.0;

  if (x < a + 1.0) {
    // Lower series, returned as the complement.
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-16) {
        const double p = sum * std::exp(-x + a * std::log(x) - log_gamma(a));
        return std::min(1.0, std::max(0.0, 1.0 - p));
      }
    }
    throw numeric_error("gamma_q: series did not converge");
  }

  // Modified Lentz continued fraction for Q.
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) {
      const double q = h * std::exp(-x + a * std::log(x) - log_gamma(a));
      return std::min(1.0, std::max(0.0, q));
    }
  }
  throw numeric_error("gamma_q: continued fraction did not converge");
}

std::vector<double> radii_of(const std::vector<PositionSample>& batch,
                             bool include_atoms) {
  std::vector<double> out;
  out.reserve(batch.size());
  for (const auto& s : batch) {
    if (!include_atoms && s.on_sphere) continue;
    out.push_back(s.radius());
  }
  return out;
}

TestReport ks_test(const std::vector<double>& radii, const RadialLaw& law,
                   double level, const std::string& name) {
  if (radii.empty()) throw std::invalid_argument("ks_test: empty sample");
  std::vector<double> x = radii;
  std::sort(x.begin(), x.end());

  const double denom = 1.0 - law.atom_at_ct;
  if (!(denom > 0.0))
    throw std::invalid_argument("ks_test: law has no continuous mass");

  const double n = static_cast<double>(x.size());
  double d_stat = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double f = law.cdf_at(x[i]) / denom;
    f = std::min(1.0, std::max(0.0, f));
    d_stat = std::max(d_stat, f - static_cast<double>(i) / n);
    d_stat = std::max(d_stat, static_cast<double>(i + 1) / n - f);
  }
  const double sn = std::sqrt(n);
  const double z = (sn + 0.12 + 0.11 / sn) * d_stat;

  TestReport rep;
  rep.name = name;
  rep.statistic = d_stat;
  rep.p_value = kolmogorov_q(z);
  rep.n_samples = x.size();
  rep.level = level;
  rep.verdict = rep.p_value > level;
  return rep;
}

TestReport two_sample_ks(const std::vector<double>& sample_a,
                         const std::vector<double>& sample_b, double level,
                         const std::string& name) {
  if (sample_a.empty() || sample_b.empty())
    throw std::invalid_argument("two_sample_ks: empty sample");
  std::vector<double> a = sample_a;
  std::vector<double> b = sample_b;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d_stat = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d_stat = std::max(d_stat, std::abs(static_cast<double>(i) / na -
                                       static_cast<double>(j) / nb));
  }
  const double z = d_stat * std::sqrt(na * nb / (na + nb));

  TestReport rep;
  rep.name = name;
  rep.statistic = d_stat;
  rep.p_value = kolmogorov_q(z);
  rep.n_samples = a.size() + b.size();
  rep.level = level;
  rep.verdict = rep.p_value > level;
  return rep;
}

namespace {

// Integral of the GD density over [lo, hi] in coordinate k (0-based), with
// the earlier coordinates fixed through the remaining budget rem and the
// later ones integrated out. The innermost coordinate is an incomplete-beta
// identity; outer ones fall back to adaptive quadrature.
double cell_layer(const GDParams& p, const std::vector<double>& lo,
                  const std::vector<double>& hi, std::size_t k, double rem) {
  if (!(rem > 0.0)) return 0.0;
  const double a = p.a[k];
  const double b = p.b[k];
  const double l = std::max(lo[k], 0.0);
  const double u = std::min(hi[k], rem);
  if (!(u > l)) return 0.0;

  if (k + 1 == p.n()) {
    const double lbeta = log_gamma(a) + log_gamma(b) - log_gamma(a + b);
    const double di = regularized_incomplete_beta(u / rem, a, b) -
                      regularized_incomplete_beta(l / rem, a, b);
    return std::exp((a + b - 1.0) * std::log(rem) + lbeta) * di;
  }
  return quad::adaptive_gauss_legendre(
      [&](double tau) {
        const double left = rem - tau;
        return std::pow(tau, a - 1.0) * std::pow(left, b - 1.0) *
               cell_layer(p, lo, hi, k + 1, left);
      },
      l, u, 1e-13);
}

}  // namespace

TestReport chi2_gof(const std::vector<DurationVector>& samples,
                    const GDParams& params, int bins_per_dim, double level,
                    const std::string& name) {
  if (samples.empty()) throw std::invalid_argument("chi2_gof: empty sample");
  if (bins_per_dim < 2)
    throw std::invalid_argument("chi2_gof: requires bins_per_dim >= 2");
  const std::size_t n = params.n();
  const double t = params.horizon;
  const int bpd = bins_per_dim;

  std::size_t n_cells = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (n_cells > 4096 / static_cast<std::size_t>(bpd))
      throw std::invalid_argument("chi2_gof: too many cells");
    n_cells *= static_cast<std::size_t>(bpd);
  }

  std::vector<double> counts(n_cells, 0.0);
  for (const auto& dv : samples) {
    if (dv.tau.size() != n)
      throw std::invalid_argument("chi2_gof: sample dimension mismatch");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) {
      int bin = static_cast<int>(dv.tau[k] / t * bpd);
      bin = std::min(std::max(bin, 0), bpd - 1);
      idx = idx * static_cast<std::size_t>(bpd) + static_cast<std::size_t>(bin);
    }
    counts[idx] += 1.0;
  }

  const double total = static_cast<double>(samples.size());
  const double lconst = detail::gd_log_constant(params);
  std::vector<double> expected(n_cells, 0.0);
  std::vector<double> lo(n), hi(n);
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    std::size_t rest = cell;
    for (std::size_t k = n; k-- > 0;) {
      const auto bin = rest % static_cast<std::size_t>(bpd);
      rest /= static_cast<std::size_t>(bpd);
      lo[k] = t * static_cast<double>(bin) / bpd;
      hi[k] = t * static_cast<double>(bin + 1) / bpd;
    }
    expected[cell] = std::exp(lconst) * cell_layer(params, lo, hi, 0, t) * total;
  }

  // Pool low-expectation cells; if the pool itself stays small, fold it into
  // the largest regular cell.
  double chi2 = 0.0;
  double pool_obs = 0.0, pool_exp = 0.0;
  int kept = 0;
  std::size_t argmax = 0;
  for (std::size_t cell = 0; cell < n_cells; ++cell)
    if (expected[cell] > expected[argmax]) argmax = cell;
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    if (expected[cell] < 5.0) {
      pool_obs += counts[cell];
      pool_exp += expected[cell];
    } else if (cell != argmax) {
      const double diff = counts[cell] - expected[cell];
      chi2 += diff * diff / expected[cell];
      ++kept;
    }
  }
  double main_obs = counts[argmax], main_exp = expected[argmax];
  if (pool_exp >= 5.0) {
    const double diff = pool_obs - pool_exp;
    chi2 += diff * diff / pool_exp;
    ++kept;
  } else {
    main_obs += pool_obs;
    main_exp += pool_exp;
  }
  if (!(main_exp >= 5.0))
    throw std::invalid_argument("chi2_gof: expected counts too small");
  const double diff = main_obs - main_exp;
  chi2 += diff * diff / main_exp;
  ++kept;

  if (kept < 2) throw std::invalid_argument("chi2_gof: fewer than two cells");
  const double dof = kept - 1.0;

  TestReport rep;
  rep.name = name;
  rep.statistic = chi2;
  rep.p_value = gamma_q(0.5 * dof, 0.5 * chi2);
  rep.n_samples = samples.size();
  rep.level = level;
  rep.verdict = rep.p_value > level;
  return rep;
}

std::vector<std::pair<double, double>> empirical_cf(
    const std::vector<PositionSample>& batch,
    const std::vector<double>& frequencies) {
  if (batch.empty()) throw std::invalid_argument("empirical_cf: empty batch");
  std::vector<std::pair<double, double>> out;
  out.reserve(frequencies.size());
  const double n = static_cast<double>(batch.size());
  for (double q : frequencies) {
    double mean = 0.0;
    for (const auto& s : batch) mean += std::cos(q * s.x[0]);
    mean /= n;
    double var = 0.0;
    for (const auto& s : batch) {
      const double dev = std::cos(q * s.x[0]) - mean;
      var += dev * dev;
    }
    var /= (n - 1.0);
    out.emplace_back(mean, std::sqrt(var / n));
  }
  return out;
}

TestReport isotropy_check(const std::vector<PositionSample>& batch,
                          std::uint64_t seed, double level) {
  if (batch.empty()) throw std::invalid_argument("isotropy_check: empty batch");
  const int d = static_cast<int>(batch.front().x.size());
  RngStream rng(seed, 0);
  const std::vector<double> v1 = sample_direction(d, rng);
  std::vector<double> v2;
  for (;;) {
    v2 = sample_direction(d, rng);
    double dot = 0.0;
    for (int q = 0; q < d; ++q) dot += v1[q] * v2[q];
    double norm2 = 0.0;
    for (int q = 0; q < d; ++q) {
      v2[q] -= dot * v1[q];
      norm2 += v2[q] * v2[q];
    }
    if (norm2 > 1e-12) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto& w : v2) w *= inv;
      break;
    }
  }

  std::vector<double> p1, p2;
  p1.reserve(batch.size());
  p2.reserve(batch.size());
  for (const auto& s : batch) {
    double d1 = 0.0, d2 = 0.0;
    for (int q = 0; q < d; ++q) {
      d1 += s.x[q] * v1[q];
      d2 += s.x[q] * v2[q];
    }
    p1.push_back(d1);
    p2.push_back(d2);
  }
  return two_sample_ks(p1, p2, level, "isotropy");
}

}  // namespace randflight
