#include "randflight/suites.hpp"

#include <cmath>
#include <stdexcept>

namespace randflight {

namespace {

std::uint64_t batch_seed(std::uint64_t seed, int idx) {
  // Distinct, reproducible seed per batch inside a suite.
  return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(idx + 1);
}

TestReport z_test(const std::string& name, double z, std::size_t n,
                  double level) {
  TestReport rep;
  rep.name = name;
  rep.statistic = z;
  rep.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
  rep.n_samples = n;
  rep.level = level;
  rep.verdict = rep.p_value > level;
  return rep;
}

RadialLaw first_type_law(int d, int n, int j, const FlightConfig& cfg) {
  RadialLaw law;
  law.ct = cfg.ct();
  const double sphere = sphere_measure(d);
  law.density_at = [=](double r) {
    if (!(r >= 0.0) || r >= cfg.ct()) return 0.0;
    return sphere * std::pow(r, d - 1) * density_solvable_first(d, n, j, cfg, r);
  };
  law.cdf_at = [=](double z) { return cdf_solvable_first(d, n, j, cfg, z); };
  return law;
}

RadialLaw second_type_law(int h, int d, int n, const FlightConfig& cfg) {
  RadialLaw law;
  law.ct = cfg.ct();
  const double sphere = sphere_measure(d);
  law.density_at = [=](double r) {
    if (!(r >= 0.0) || r >= cfg.ct()) return 0.0;
    return sphere * std::pow(r, d - 1) * density_solvable_second(h, d, n, cfg, r);
  };
  law.cdf_at = [=](double z) { return cdf_solvable_second(h, d, n, cfg, z); };
  return law;
}

std::vector<DurationVector> draw_durations(const GDParams& p,
                                           std::size_t count,
                                           std::uint64_t seed) {
  std::vector<DurationVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RngStream rng(seed, i);
    out.push_back(sample_gd(p, rng));
  }
  return out;
}

int chi2_bins(std::size_t n) { return n == 1 ? 24 : (n == 2 ? 10 : 5); }

std::vector<TestReport> suite_gd_sampler(const SuiteConfig& cfg) {
  const FlightConfig fc(cfg.d, cfg.c, cfg.t);
  std::vector<TestReport> out;

  const GDParams standard =
      expand_model(SolvableModel::second_type_y(1, 1), cfg.n, cfg.d, cfg.t);
  out.push_back(chi2_gof(draw_durations(standard, cfg.count, batch_seed(cfg.seed, 0)),
                         standard, chi2_bins(standard.n()), cfg.level,
                         "gd-standard"));

  const GDParams switching =
      expand_model(SolvableModel::second_type_z(1, cfg.j), cfg.n, cfg.d, cfg.t);
  out.push_back(chi2_gof(draw_durations(switching, cfg.count, batch_seed(cfg.seed, 1)),
                         switching, chi2_bins(switching.n()), cfg.level,
                         "gd-switching"));

  if (cfg.d >= 3) {
    const GDParams first =
        expand_model(SolvableModel::first_type(1, 1, cfg.j), cfg.n, cfg.d, cfg.t);
    out.push_back(chi2_gof(draw_durations(first, cfg.count, batch_seed(cfg.seed, 2)),
                           first, chi2_bins(first.n()), cfg.level, "gd-first"));
  }
  (void)fc;
  return out;
}

std::vector<TestReport> suite_solvable_first(const SuiteConfig& cfg) {
  const FlightConfig fc(cfg.d, cfg.c, cfg.t);
  const RadialLaw law = first_type_law(cfg.d, cfg.n, cfg.j, fc);

  std::vector<std::vector<double>> radii;
  std::vector<std::string> tags;
  std::vector<TestReport> out;
  std::vector<PositionSample> last_batch;
  int idx = 0;
  for (int h = 0; h <= 1; ++h) {
    for (int i = 0; i <= 1; ++i) {
      const GDParams p = expand_model(SolvableModel::first_type(h, i, cfg.j),
                                      cfg.n, cfg.d, cfg.t);
      auto batch = sample_batch_conditional(fc, p, cfg.count,
                                            batch_seed(cfg.seed, idx++),
                                            cfg.threads);
      const std::string tag =
          "h" + std::to_string(h) + "i" + std::to_string(i);
      out.push_back(ks_test(radii_of(batch), law, cfg.level, "first-ks-" + tag));
      radii.push_back(radii_of(batch));
      tags.push_back(tag);
      last_batch = std::move(batch);
    }
  }
  for (std::size_t u = 0; u < radii.size(); ++u)
    for (std::size_t v = u + 1; v < radii.size(); ++v)
      out.push_back(two_sample_ks(radii[u], radii[v], cfg.level,
                                  "first-pair-" + tags[u] + "-" + tags[v]));
  out.push_back(isotropy_check(last_batch, batch_seed(cfg.seed, 100), cfg.level));
  return out;
}

std::vector<TestReport> suite_solvable_second(const SuiteConfig& cfg) {
  const FlightConfig fc(cfg.d, cfg.c, cfg.t);
  std::vector<TestReport> out;
  int idx = 0;
  for (int h = 1; h <= 2; ++h) {
    if (h == 2 && cfg.d < 3) continue;
    const RadialLaw law = second_type_law(h, cfg.d, cfg.n, fc);
    const SolvableModel models[3] = {SolvableModel::second_type_y(h, 0),
                                     SolvableModel::second_type_y(h, 1),
                                     SolvableModel::second_type_z(h, cfg.j)};
    const std::string names[3] = {"y" + std::to_string(h) + "i0",
                                  "y" + std::to_string(h) + "i1",
                                  "z" + std::to_string(h) +
                                      "j" + std::to_string(cfg.j)};
    std::vector<std::vector<double>> radii;
    for (int m = 0; m < 3; ++m) {
      const GDParams p = expand_model(models[m], cfg.n, cfg.d, cfg.t);
      auto batch = sample_batch_conditional(fc, p, cfg.count,
                                            batch_seed(cfg.seed, idx++),
                                            cfg.threads);
      radii.push_back(radii_of(batch));
      out.push_back(ks_test(radii.back(), law, cfg.level,
                            "second-ks-" + names[m]));
    }
    for (int u = 0; u < 3; ++u)
      for (int v = u + 1; v < 3; ++v)
        out.push_back(two_sample_ks(radii[u], radii[v], cfg.level,
                                    "second-pair-" + names[u] + "-" + names[v]));
  }
  return out;
}

std::vector<TestReport> suite_unconditional(const SuiteConfig& cfg) {
  const FlightConfig fc(cfg.d, cfg.c, cfg.t);
  const double lt = cfg.lambda * cfg.t;
  const auto batch = sample_batch_unconditional(
      fc, SolvableModel::second_type_z(2, 1), cfg.lambda, cfg.count,
      batch_seed(cfg.seed, 0), cfg.threads);

  std::vector<TestReport> out;
  const double n = static_cast<double>(batch.size());

  std::size_t atoms = 0;
  for (const auto& s : batch)
    if (s.on_sphere) ++atoms;
  const double q = atom_unconditional(cfg.d, lt);
  const double za = (static_cast<double>(atoms) / n - q) /
                    std::sqrt(q * (1.0 - q) / n);
  out.push_back(z_test("atom-frequency", za, batch.size(), cfg.level));

  const RadialLaw law = radial_law(
      [=](double r) { return density_unconditional(cfg.d, cfg.lambda, fc, r); },
      cfg.d, fc, q);
  out.push_back(
      ks_test(radii_of(batch), law, cfg.level, "unconditional-ks"));

  for (int p = 1; p <= 3; ++p) {
    double mean = 0.0;
    for (const auto& s : batch) mean += std::pow(s.radius(), p);
    mean /= n;
    double var = 0.0;
    for (const auto& s : batch) {
      const double dev = std::pow(s.radius(), p) - mean;
      var += dev * dev;
    }
    var /= (n - 1.0);
    const double analytic = radial_moment(cfg.d, cfg.lambda, fc, p);
    const double zm = (mean - analytic) / std::sqrt(var / n);
    out.push_back(z_test("moment-p" + std::to_string(p), zm, batch.size(),
                         cfg.level));
  }
  return out;
}

std::vector<TestReport> suite_cf(const SuiteConfig& cfg) {
  const FlightConfig fc(cfg.d, cfg.c, cfg.t);
  std::vector<std::pair<std::string, SolvableModel>> models;
  if (cfg.d >= 3)
    models.emplace_back("first", SolvableModel::first_type(1, 1, cfg.j));
  models.emplace_back("y", SolvableModel::second_type_y(1, 1));
  models.emplace_back("z", SolvableModel::second_type_z(cfg.d >= 3 ? 2 : 1,
                                                        cfg.j));

  const double ct = fc.ct();
  const std::vector<double> freqs = {0.5 / ct, 1.0 / ct, 2.0 / ct, 4.0 / ct,
                                     8.0 / ct};
  std::vector<TestReport> out;
  int idx = 0;
  for (const auto& [tag, model] : models) {
    const GDParams p = expand_model(model, cfg.n, cfg.d, cfg.t);
    const auto batch = sample_batch_conditional(
        fc, p, cfg.count, batch_seed(cfg.seed, idx++), cfg.threads);
    const auto emp = empirical_cf(batch, freqs);
    for (std::size_t f = 0; f < freqs.size(); ++f) {
      const double analytic = cf_conditional(model, cfg.d, cfg.n, freqs[f], fc);
      const double z = (emp[f].first - analytic) / emp[f].second;
      out.push_back(z_test("cf-" + tag + "-f" + std::to_string(f), z,
                           batch.size(), cfg.level));
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"gd-sampler", "solvable-first", "solvable-second", "unconditional",
          "cf"};
}

std::vector<TestReport> run_suite(const std::string& name,
                                  const SuiteConfig& cfg) {
  if (cfg.count < 100)
    throw std::invalid_argument("run_suite: count must be at least 100");
  if (!(cfg.level > 0.0 && cfg.level < 1.0))
    throw std::invalid_argument("run_suite: level must lie in (0, 1)");
  if (name == "gd-sampler") return suite_gd_sampler(cfg);
  if (name == "solvable-first") return suite_solvable_first(cfg);
  if (name == "solvable-second") return suite_solvable_second(cfg);
  if (name == "unconditional") return suite_unconditional(cfg);
  if (name == "cf") return suite_cf(cfg);
  throw std::invalid_argument("run_suite: unknown suite '" + name + "'");
}

}  // namespace randflight
