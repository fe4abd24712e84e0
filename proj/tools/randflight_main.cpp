// Command line front end: simulate flight batches, evaluate the closed-form
// laws on grids, and run the verification suites. Output is CSV or JSON with
// doubles at 17 significant digits, so equal configurations produce
// byte-identical files.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "randflight/density.hpp"
#include "randflight/error.hpp"
#include "randflight/flight.hpp"
#include "randflight/io.hpp"
#include "randflight/sampling.hpp"
#include "randflight/suites.hpp"
#include "randflight/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitVerification = 4;

struct CommonOpts {
  int d = 3;
  double c = 1.0;
  double t = 1.0;
  std::string format = "csv";
  std::string output;
  int threads = 0;
};

struct ModelOpts {
  std::string family;  // "first" | "Y" | "Z", empty when unset
  int h = -1;          // -1 means "use the family default"
  int i = 0;
  int j = 1;
  std::string a_list;  // raw GD parameter vectors, comma separated
  std::string b_list;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_threads = true) {
  cmd->add_option("--d", o.d, "Space dimension");
  cmd->add_option("--c", o.c, "Speed c > 0");
  cmd->add_option("--t", o.t, "Time horizon t > 0");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("-o,--output", o.output, "Output file (default stdout)");
  if (with_threads)
    cmd->add_option("--threads", o.threads,
                    "Worker threads (0: RANDFLIGHT_THREADS or hardware)");
}

void add_model(CLI::App* cmd, ModelOpts& m) {
  // The family knob --h needs the single-letter long name, so the help flag
  // keeps only its long spelling.
  cmd->set_help_flag("--help", "Print this help message and exit");
  cmd->add_option("--family", m.family, "Solvable duration family")
      ->check(CLI::IsMember({"first", "Y", "Z"}));
  cmd->add_option("--h", m.h, "Family knob h");
  cmd->add_option("--i", m.i, "Family knob i");
  cmd->add_option("--j", m.j, "Family knob j (switch index)");
  cmd->add_option("--a", m.a_list, "Raw GD shape vector a, comma separated");
  cmd->add_option("--b", m.b_list, "Raw GD shape vector b, comma separated");
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": bad number '" + item +
                                  "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
      ++used;
    if (used != item.size())
      throw std::invalid_argument(std::string(what) + ": bad number '" + item +
                                  "'");
    out.push_back(v);
  }
  if (out.empty())
    throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

randflight::SolvableModel resolve_family(const ModelOpts& m) {
  using randflight::SolvableModel;
  if (m.family == "first")
    return SolvableModel::first_type(m.h < 0 ? 0 : m.h, m.i, m.j);
  if (m.family == "Y")
    return SolvableModel::second_type_y(m.h < 0 ? 1 : m.h, m.i);
  if (m.family == "Z")
    return SolvableModel::second_type_z(m.h < 0 ? 1 : m.h, m.j);
  throw std::invalid_argument("a --family of first, Y or Z is required here");
}

bool has_raw(const ModelOpts& m) { return !m.a_list.empty() || !m.b_list.empty(); }

randflight::GDParams resolve_raw(const ModelOpts& m, double horizon) {
  if (m.a_list.empty() || m.b_list.empty())
    throw std::invalid_argument("--a and --b must be given together");
  return randflight::GDParams(parse_list(m.a_list, "--a"),
                              parse_list(m.b_list, "--b"), horizon);
}

// Grid values with the r = ct endpoint clamped into the open support.
std::vector<double> density_grid(const randflight::io::GridSpec& grid,
                                 double ct) {
  std::vector<double> rs = grid.values();
  for (double& r : rs) {
    if (std::abs(r - ct) <= 1e-12 * ct) r = ct * (1.0 - 1e-9);
  }
  return rs;
}

void meta_common(randflight::io::Table& tb, const std::string& command,
                 const CommonOpts& o) {
  tb.meta.emplace_back("command", command);
  tb.meta.emplace_back("version", std::string(randflight::io::kVersion));
  tb.meta.emplace_back("d", static_cast<std::int64_t>(o.d));
  tb.meta.emplace_back("c", o.c);
  tb.meta.emplace_back("t", o.t);
}

void meta_model(randflight::io::Table& tb, const ModelOpts& m) {
  if (!m.family.empty()) {
    tb.meta.emplace_back("family", m.family);
    tb.meta.emplace_back("h", static_cast<std::int64_t>(m.h));
    tb.meta.emplace_back("i", static_cast<std::int64_t>(m.i));
    tb.meta.emplace_back("j", static_cast<std::int64_t>(m.j));
  }
  if (!m.a_list.empty()) tb.meta.emplace_back("a", m.a_list);
  if (!m.b_list.empty()) tb.meta.emplace_back("b", m.b_list);
}

void write_output(const randflight::io::Table& tb, const CommonOpts& o) {
  const std::string text = o.format == "json" ? randflight::io::to_json(tb)
                                              : randflight::io::to_csv(tb);
  if (o.output.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out)
    throw std::invalid_argument("cannot open output file '" + o.output + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::invalid_argument("failed writing '" + o.output + "'");
}

// ---- simulate ----

int run_simulate(const CommonOpts& o, const ModelOpts& m, int n,
                 std::optional<double> lambda, std::size_t count,
                 std::uint64_t seed) {
  using namespace randflight;
  FlightConfig cfg{o.d, o.c, o.t};

  std::vector<PositionSample> batch;
  if (lambda.has_value()) {
    if (n >= 0)
      throw std::invalid_argument(
          "--n and --lambda are mutually exclusive for simulate");
    ModelOpts mm = m;
    if (mm.family.empty()) {
      if (has_raw(m))
        throw std::invalid_argument(
            "unconditional simulation needs --family, not raw --a/--b");
      mm.family = "Z";
      mm.h = 2;
      mm.j = 1;
    }
    batch = sample_batch_unconditional(cfg, resolve_family(mm), *lambda, count,
                                       seed, o.threads);
  } else if (n == 0) {
    batch = sample_batch_sphere(cfg, count, seed);
  } else if (n > 0) {
    GDParams p = has_raw(m) ? resolve_raw(m, o.t)
                            : expand_model(resolve_family(m), n, o.d, o.t);
    if (static_cast<int>(p.n()) != n)
      throw std::invalid_argument("--n must match the size of --a/--b");
    batch = sample_batch_conditional(cfg, p, count, seed, o.threads);
  } else {
    throw std::invalid_argument("simulate needs --n >= 0 or --lambda");
  }

  io::Table tb;
  meta_common(tb, "simulate", o);
  meta_model(tb, m);
  if (lambda.has_value()) tb.meta.emplace_back("lambda", *lambda);
  else tb.meta.emplace_back("n", static_cast<std::int64_t>(n));
  tb.meta.emplace_back("count", static_cast<std::int64_t>(count));
  tb.meta.emplace_back("seed", static_cast<std::int64_t>(seed));

  for (int k = 1; k <= o.d; ++k) tb.columns.push_back("x_" + std::to_string(k));
  tb.columns.insert(tb.columns.end(), {"r", "on_sphere", "n_changes"});
  tb.rows.reserve(batch.size());
  for (const PositionSample& s : batch) {
    std::vector<io::Cell> row;
    row.reserve(o.d + 3);
    for (double xi : s.x) row.emplace_back(xi);
    row.emplace_back(s.radius());
    row.emplace_back(s.on_sphere);
    row.emplace_back(static_cast<std::int64_t>(s.n_changes));
    tb.rows.push_back(std::move(row));
  }
  write_output(tb, o);
  return kExitOk;
}

// ---- density / cdf / cf ----

int run_density(const CommonOpts& o, const ModelOpts& m, int n,
                std::optional<double> lambda, bool two_step, double a1,
                double b1, const std::string& method,
                const std::string& grid_text) {
  using namespace randflight;
  FlightConfig cfg{o.d, o.c, o.t};
  const io::GridSpec grid = io::GridSpec::parse(grid_text);
  const std::vector<double> rs = density_grid(grid, cfg.ct());

  std::function<double(double)> eval;
  io::Table tb;
  meta_common(tb, "density", o);

  if (two_step) {
    tb.meta.emplace_back("two_step", true);
    tb.meta.emplace_back("a1", a1);
    tb.meta.emplace_back("b1", b1);
    tb.meta.emplace_back("method", method);
    if (method == "auto") {
      eval = [&, a1, b1](double r) { return density_two_step(o.d, a1, b1, cfg, r); };
    } else if (method == "equal") {
      if (a1 != b1)
        throw std::invalid_argument("--method equal requires --a1 == --b1");
      eval = [&, a1](double r) { return density_two_step_equal(o.d, a1, cfg, r); };
    } else {
      D3TwoStepMethod mm = D3TwoStepMethod::auto_select;
      if (method == "d3-beta") mm = D3TwoStepMethod::incomplete_beta;
      else if (method == "d3-binomial") mm = D3TwoStepMethod::binomial_sum;
      else if (method == "d3-quadrature") mm = D3TwoStepMethod::quadrature;
      else throw std::invalid_argument("unknown --method '" + method + "'");
      eval = [&, a1, b1, mm](double r) {
        return density_d3_two_step(a1, b1, cfg, r, mm);
      };
    }
  } else if (lambda.has_value()) {
    tb.meta.emplace_back("lambda", *lambda);
    eval = [&, lambda](double r) {
      return density_unconditional(o.d, *lambda, cfg, r);
    };
  } else if (has_raw(m)) {
    meta_model(tb, m);
    const GDParams p = resolve_raw(m, o.t);
    eval = [&, p](double r) { return density_general_numeric(o.d, p, cfg, r); };
  } else {
    meta_model(tb, m);
    const SolvableModel sm = resolve_family(m);
    if (n < 1) throw std::invalid_argument("density needs --n >= 1");
    tb.meta.emplace_back("n", static_cast<std::int64_t>(n));
    if (sm.family == SolvableFamily::first_type)
      eval = [&, sm, n](double r) {
        return density_solvable_first(o.d, n, sm.j, cfg, r);
      };
    else
      eval = [&, sm, n](double r) {
        return density_solvable_second(sm.h, o.d, n, cfg, r);
      };
  }

  tb.meta.emplace_back("grid", grid_text);
  tb.columns = {"r", "density"};
  for (double r : rs) tb.rows.push_back({io::Cell(r), io::Cell(eval(r))});
  write_output(tb, o);
  return kExitOk;
}

int run_cdf(const CommonOpts& o, const ModelOpts& m, int n,
            const std::string& grid_text) {
  using namespace randflight;
  FlightConfig cfg{o.d, o.c, o.t};
  const io::GridSpec grid = io::GridSpec::parse(grid_text);

  const SolvableModel sm = resolve_family(m);
  if (n < 1) throw std::invalid_argument("cdf needs --n >= 1");

  std::function<double(double)> eval;
  if (sm.family == SolvableFamily::first_type)
    eval = [&, sm, n](double z) { return cdf_solvable_first(o.d, n, sm.j, cfg, z); };
  else
    eval = [&, sm, n](double z) { return cdf_solvable_second(sm.h, o.d, n, cfg, z); };

  io::Table tb;
  meta_common(tb, "cdf", o);
  meta_model(tb, m);
  tb.meta.emplace_back("n", static_cast<std::int64_t>(n));
  tb.meta.emplace_back("grid", grid_text);
  tb.columns = {"z", "cdf"};
  for (double z : grid.values()) tb.rows.push_back({io::Cell(z), io::Cell(eval(z))});
  write_output(tb, o);
  return kExitOk;
}

int run_cf(const CommonOpts& o, const ModelOpts& m, int n,
           const std::string& grid_text) {
  using namespace randflight;
  FlightConfig cfg{o.d, o.c, o.t};
  const io::GridSpec grid = io::GridSpec::parse(grid_text);

  std::function<double(double)> eval;
  io::Table tb;
  meta_common(tb, "cf", o);
  meta_model(tb, m);
  if (has_raw(m)) {
    const GDParams p = resolve_raw(m, o.t);
    eval = [&, p](double rho) { return cf_general_numeric(o.d, p, rho, cfg); };
  } else {
    const SolvableModel sm = resolve_family(m);
    if (n < 1) throw std::invalid_argument("cf needs --n >= 1");
    tb.meta.emplace_back("n", static_cast<std::int64_t>(n));
    eval = [&, sm, n](double rho) { return cf_conditional(sm, o.d, n, rho, cfg); };
  }

  tb.meta.emplace_back("grid", grid_text);
  tb.columns = {"rho", "cf"};
  for (double rho : grid.values())
    tb.rows.push_back({io::Cell(rho), io::Cell(eval(rho))});
  write_output(tb, o);
  return kExitOk;
}

// ---- moments ----

int run_moments(const CommonOpts& o, double lambda, const std::string& p_list,
                std::size_t count, std::uint64_t seed) {
  using namespace randflight;
  FlightConfig cfg{o.d, o.c, o.t};
  const std::vector<double> ps = parse_list(p_list, "--p");

  // Monte Carlo side: the h = 2 switching model, whose radial law the
  // unconditional formulas describe.
  const SolvableModel sm = SolvableModel::second_type_z(2, 1);
  const std::vector<PositionSample> batch =
      sample_batch_unconditional(cfg, sm, lambda, count, seed, o.threads);

  io::Table tb;
  meta_common(tb, "moments", o);
  tb.meta.emplace_back("lambda", lambda);
  tb.meta.emplace_back("count", static_cast<std::int64_t>(count));
  tb.meta.emplace_back("seed", static_cast<std::int64_t>(seed));
  tb.columns = {"p", "analytic", "monte_carlo", "std_err"};
  for (double p : ps) {
    const double analytic = radial_moment(o.d, lambda, cfg, p);
    double mean = 0.0;
    for (const PositionSample& s : batch) mean += std::pow(s.radius(), p);
    mean /= static_cast<double>(batch.size());
    double var = 0.0;
    for (const PositionSample& s : batch) {
      const double dlt = std::pow(s.radius(), p) - mean;
      var += dlt * dlt;
    }
    var /= static_cast<double>(batch.size() - 1);
    const double se = std::sqrt(var / static_cast<double>(batch.size()));
    tb.rows.push_back({io::Cell(p), io::Cell(analytic), io::Cell(mean), io::Cell(se)});
  }
  write_output(tb, o);
  return kExitOk;
}

// ---- verify ----

int run_verify(const CommonOpts& o, const ModelOpts& m, const std::string& suite,
               int n, double lambda, std::size_t count, std::uint64_t seed,
               double level) {
  using namespace randflight;
  SuiteConfig sc;
  sc.d = o.d;
  sc.n = n;
  sc.j = m.j;
  sc.h = m.h < 0 ? 1 : m.h;
  sc.i = m.i;
  sc.c = o.c;
  sc.t = o.t;
  sc.lambda = lambda;
  sc.count = count;
  sc.seed = seed;
  sc.level = level;
  sc.threads = o.threads;

  const std::vector<TestReport> reports = run_suite(suite, sc);

  io::Table tb;
  meta_common(tb, "verify", o);
  tb.meta.emplace_back("suite", suite);
  tb.meta.emplace_back("n", static_cast<std::int64_t>(n));
  tb.meta.emplace_back("j", static_cast<std::int64_t>(sc.j));
  tb.meta.emplace_back("h", static_cast<std::int64_t>(sc.h));
  tb.meta.emplace_back("i", static_cast<std::int64_t>(sc.i));
  tb.meta.emplace_back("lambda", lambda);
  tb.meta.emplace_back("count", static_cast<std::int64_t>(count));
  tb.meta.emplace_back("seed", static_cast<std::int64_t>(seed));
  tb.meta.emplace_back("level", level);
  tb.columns = {"name", "statistic", "p_value", "n_samples", "verdict", "level"};
  bool all_pass = true;
  for (const TestReport& r : reports) {
    all_pass = all_pass && r.verdict;
    tb.rows.push_back({io::Cell(r.name), io::Cell(r.statistic),
                       io::Cell(r.p_value),
                       io::Cell(static_cast<std::int64_t>(r.n_samples)),
                       io::Cell(r.verdict), io::Cell(r.level)});
  }
  write_output(tb, o);
  if (!all_pass) {
    std::cerr << "verification failed: at least one check rejected\n";
    return kExitVerification;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isotropic random flights with generalized Dirichlet steps"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw position samples");
  CommonOpts sim_o;
  ModelOpts sim_m;
  int sim_n = -1;
  double sim_lambda = 0.0;
  std::size_t sim_count = 0;
  std::uint64_t sim_seed = 0;
  add_common(sim, sim_o);
  add_model(sim, sim_m);
  sim->add_option("--n", sim_n, "Number of direction changes (0: sphere atom)");
  auto* sim_lam = sim->add_option("--lambda", sim_lambda, "Unconditional rate");
  sim->add_option("--count", sim_count, "Number of samples")->required();
  sim->add_option("--seed", sim_seed, "RNG seed")->required();

  // density
  auto* den = app.add_subcommand("density", "Evaluate a position density on a grid");
  CommonOpts den_o;
  ModelOpts den_m;
  int den_n = -1;
  double den_lambda = 0.0;
  bool den_two_step = false;
  double den_a1 = 1.0, den_b1 = 1.0;
  std::string den_method = "auto";
  std::string den_grid;
  add_common(den, den_o, /*with_threads=*/false);
  add_model(den, den_m);
  den->add_option("--n", den_n, "Number of direction changes");
  auto* den_lam = den->add_option("--lambda", den_lambda, "Unconditional rate");
  den->add_flag("--two-step", den_two_step, "Two-step law with shapes --a1, --b1");
  den->add_option("--a1", den_a1, "Two-step first shape");
  den->add_option("--b1", den_b1, "Two-step second shape");
  den->add_option("--method", den_method,
                  "Two-step route: auto, equal, d3-beta, d3-binomial, d3-quadrature");
  den->add_option("--grid", den_grid, "Radial grid min:max:points")->required();

  // cdf
  auto* cdf = app.add_subcommand("cdf", "Evaluate a radial CDF on a grid");
  CommonOpts cdf_o;
  ModelOpts cdf_m;
  int cdf_n = -1;
  std::string cdf_grid;
  add_common(cdf, cdf_o, /*with_threads=*/false);
  add_model(cdf, cdf_m);
  cdf->add_option("--n", cdf_n, "Number of direction changes");
  cdf->add_option("--grid", cdf_grid, "Radial grid min:max:points")->required();

  // cf
  auto* cf = app.add_subcommand("cf", "Evaluate the characteristic function on a grid");
  CommonOpts cf_o;
  ModelOpts cf_m;
  int cf_n = -1;
  std::string cf_grid;
  add_common(cf, cf_o, /*with_threads=*/false);
  add_model(cf, cf_m);
  cf->add_option("--n", cf_n, "Number of direction changes");
  cf->add_option("--grid", cf_grid, "Frequency grid min:max:points")->required();

  // moments
  auto* mom = app.add_subcommand("moments", "Radial moments of the unconditional law");
  CommonOpts mom_o;
  double mom_lambda = 1.0;
  std::string mom_p = "1,2,3";
  std::size_t mom_count = 100000;
  std::uint64_t mom_seed = 1;
  add_common(mom, mom_o);
  mom->add_option("--lambda", mom_lambda, "Unconditional rate")->required();
  mom->add_option("--p", mom_p, "Moment orders, comma separated");
  mom->add_option("--count", mom_count, "Monte Carlo sample count");
  mom->add_option("--seed", mom_seed, "RNG seed");

  // verify
  auto* ver = app.add_subcommand("verify", "Run a verification suite");
  CommonOpts ver_o;
  ModelOpts ver_m;
  std::string ver_suite;
  int ver_n = 1;
  double ver_lambda = 1.0;
  std::size_t ver_count = 100000;
  std::uint64_t ver_seed = 0;
  double ver_level = 0.01;
  add_common(ver, ver_o);
  add_model(ver, ver_m);
  {
    std::string names;
    for (const std::string& s : randflight::suite_names())
      names += (names.empty() ? "" : ", ") + s;
    ver->add_option("--suite", ver_suite, "Suite name: " + names)->required();
  }
  ver->add_option("--n", ver_n, "Number of direction changes");
  ver->add_option("--lambda", ver_lambda, "Unconditional rate");
  ver->add_option("--count", ver_count, "Samples per check");
  ver->add_option("--seed", ver_seed, "RNG seed")->required();
  ver->add_option("--level", ver_level, "Rejection level in (0, 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (sim->parsed())
      return run_simulate(sim_o, sim_m, sim_n,
                          sim_lam->count() ? std::optional<double>(sim_lambda)
                                           : std::nullopt,
                          sim_count, sim_seed);
    if (den->parsed())
      return run_density(den_o, den_m, den_n,
                         den_lam->count() ? std::optional<double>(den_lambda)
                                          : std::nullopt,
                         den_two_step, den_a1, den_b1, den_method, den_grid);
    if (cdf->parsed()) return run_cdf(cdf_o, cdf_m, cdf_n, cdf_grid);
    if (cf->parsed()) return run_cf(cf_o, cf_m, cf_n, cf_grid);
    if (mom->parsed())
      return run_moments(mom_o, mom_lambda, mom_p, mom_count, mom_seed);
    if (ver->parsed())
      return run_verify(ver_o, ver_m, ver_suite, ver_n, ver_lambda, ver_count,
                        ver_seed, ver_level);
  } catch (const randflight::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitValidation;
}
