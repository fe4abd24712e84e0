#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "randflight/density.hpp"
#include "randflight/flight.hpp"
#include "randflight/sampling.hpp"

namespace randflight {

// Outcome of one statistical check. verdict is p_value > level; reports are
// deterministic given inputs and seeds.
struct TestReport {
  std::string name;
  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t n_samples = 0;
  bool verdict = false;
  double level = 0.01;
};

// Asymptotic Kolmogorov tail probability P(sup|B(F)| > z).
double kolmogorov_q(double z);

// Upper regularized incomplete gamma Q(a, x) (chi-square tail helper).
double gamma_q(double a, double x);

// Radii of a position batch, optionally dropping the sphere atoms.
std::vector<double> radii_of(const std::vector<PositionSample>& batch,
                             bool include_atoms = false);

// One-sample Kolmogorov-Smirnov of radii against a radial law. Sphere atoms
// must already be filtered out; the continuous CDF is renormalized by
// 1 - atom_at_ct when the law carries an atom.
TestReport ks_test(const std::vector<double>& radii, const RadialLaw& law,
                   double level = 0.01, const std::string& name = "ks");

TestReport two_sample_ks(const std::vector<double>& sample_a,
                         const std::vector<double>& sample_b,
                         double level = 0.01,
                         const std::string& name = "two-sample-ks");

// Pearson chi-square of GD duration draws against bin masses integrated from
// gd_density (analytic in the innermost coordinate, adaptive quadrature in
// the outer ones). Cells with expected count < 5 are pooled. Practical for
// n <= 3.
TestReport chi2_gof(const std::vector<DurationVector>& samples,
                    const GDParams& params, int bins_per_dim,
                    double level = 0.01, const std::string& name = "chi2");

// Empirical characteristic function along the first coordinate axis:
// (mean cos(q <e1, X>), standard error) for each frequency q.
std::vector<std::pair<double, double>> empirical_cf(
    const std::vector<PositionSample>& batch,
    const std::vector<double>& frequencies);

// Two-sample KS between the projections of the batch onto two random
// orthogonal unit vectors (deterministic in seed).
TestReport isotropy_check(const std::vector<PositionSample>& batch,
                          std::uint64_t seed, double level = 0.01);

}  // namespace randflight
