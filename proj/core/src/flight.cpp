#include "randflight/flight.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace randflight {

FlightConfig::FlightConfig(int d_in, double c_in, double t_in)
    : d(d_in), c(c_in), t(t_in) {
  if (d < 2) throw std::invalid_argument("FlightConfig: requires d >= 2");
  if (!(c > 0.0)) throw std::invalid_argument("FlightConfig: requires c > 0");
  if (!(t > 0.0)) throw std::invalid_argument("FlightConfig: requires t > 0");
}

SolvableModel SolvableModel::first_type(int h, int i, int j) {
  if (h != 0 && h != 1)
    throw std::invalid_argument("SolvableModel: first type requires h in {0,1}");
  if (i != 0 && i != 1)
    throw std::invalid_argument("SolvableModel: first type requires i in {0,1}");
  if (j < 1) throw std::invalid_argument("SolvableModel: requires j >= 1");
  return {SolvableFamily::first_type, h, i, j};
}

SolvableModel SolvableModel::second_type_y(int h, int i) {
  if (h != 1 && h != 2)
    throw std::invalid_argument("SolvableModel: second type requires h in {1,2}");
  if (i != 0 && i != 1)
    throw std::invalid_argument("SolvableModel: second type requires i in {0,1}");
  return {SolvableFamily::second_type_y, h, i, 0};
}

SolvableModel SolvableModel::second_type_z(int h, int j) {
  if (h != 1 && h != 2)
    throw std::invalid_argument("SolvableModel: second type requires h in {1,2}");
  if (j < 1) throw std::invalid_argument("SolvableModel: requires j >= 1");
  return {SolvableFamily::second_type_z, h, 0, j};
}

double PositionSample::radius() const {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

GDParams expand_model(const SolvableModel& m, int n, int d, double horizon) {
  if (n < 1) throw std::invalid_argument("expand_model: requires n >= 1");
  const std::size_t un = static_cast<std::size_t>(n);
  std::vector<double> a(un), b(un);

  switch (m.family) {
    case SolvableFamily::first_type: {
      if (d < 3) throw std::invalid_argument("expand_model: first type requires d >= 3");
      if (n <= m.j) {
        // Pure standard-Dirichlet phase.
        for (std::size_t k = 0; k < un; ++k) {
          a[k] = d - 1.0;
          b[k] = 1.0;
        }
        b[un - 1] = d - 1.0;
      } else {
        for (int k = 1; k <= n; ++k)
          a[k - 1] = k <= m.j ? d - 1.0 : 0.5 * d - 1.0;
        for (std::size_t k = 0; k < un; ++k) b[k] = 1.0;
        b[static_cast<std::size_t>(m.j) - 1] =
            (n - m.j + 1.0) * (0.5 * d - 1.0) + m.i + m.h + 1.0;
        b[un - 1] = 0.5 * d - m.i;
      }
      break;
    }
    case SolvableFamily::second_type_y: {
      const double ah = static_cast<double>(d) / m.h - 1.0;
      if (!(ah > 0.0))
        throw std::invalid_argument("expand_model: second type requires d/h > 1");
      for (std::size_t k = 0; k < un; ++k) {
        a[k] = ah;
        b[k] = 1.0;
      }
      b[un - 1] = static_cast<double>(d) / m.h - m.i;
      break;
    }
    case SolvableFamily::second_type_z: {
      const double ah = static_cast<double>(d) / m.h - 1.0;
      if (!(ah > 0.0))
        throw std::invalid_argument("expand_model: second type requires d/h > 1");
      for (std::size_t k = 0; k < un; ++k) {
        a[k] = ah;
        b[k] = 1.0;
      }
      if (m.j <= n - 1) b[static_cast<std::size_t>(m.j) - 1] = 2.0;
      b[un - 1] = ah;
      break;
    }
  }
  return GDParams(std::move(a), std::move(b), horizon);
}

PositionSample simulate_conditional(const FlightConfig& cfg, int n,
                                    const GDParams& p, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("simulate_conditional: requires n >= 1");
  if (static_cast<std::size_t>(n) != p.n())
    throw std::invalid_argument("simulate_conditional: n must match p.n()");
  if (p.horizon != cfg.t)
    throw std::invalid_argument("simulate_conditional: p.horizon must equal cfg.t");

  const DurationVector dur = sample_gd(p, rng);
  PositionSample out;
  out.n_changes = n;
  out.x.assign(static_cast<std::size_t>(cfg.d), 0.0);
  for (int k = 0; k <= n; ++k) {
    const double tau = k < n ? dur.tau[static_cast<std::size_t>(k)] : dur.last();
    const std::vector<double> v = sample_direction(cfg.d, rng);
    const double step = cfg.c * tau;
    for (int q = 0; q < cfg.d; ++q)
      out.x[static_cast<std::size_t>(q)] += step * v[static_cast<std::size_t>(q)];
  }
  return out;
}

PositionSample simulate_sphere_atom(const FlightConfig& cfg, RngStream& rng) {
  PositionSample out;
  out.on_sphere = true;
  out.n_changes = 0;
  out.x = sample_direction(cfg.d, rng);
  for (auto& v : out.x) v *= cfg.ct();
  return out;
}

PositionSample simulate_unconditional(const FlightConfig& cfg,
                                      const SolvableModel& m,
                                      const FractionalPoissonTable& table,
                                      RngStream& rng) {
  const int n = table.sample(rng);
  if (n == 0) return simulate_sphere_atom(cfg, rng);
  return simulate_conditional(cfg, n, expand_model(m, n, cfg.d, cfg.t), rng);
}

PositionSample simulate_unconditional(const FlightConfig& cfg,
                                      const SolvableModel& m, double lambda,
                                      RngStream& rng) {
  const FractionalPoissonTable table(cfg.d, lambda * cfg.t);
  return simulate_unconditional(cfg, m, table, rng);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RANDFLIGHT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// Runs body(i) for i in [0, count) across workers. Each index draws its own
// RngStream, so the partition cannot change the output.
template <class Body>
void parallel_for(std::size_t count, int threads, const Body& body) {
  const int workers =
      static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(
                                                 resolve_threads(threads)),
                                             count == 0 ? 1 : count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = static_cast<std::size_t>(w); i < count;
           i += static_cast<std::size_t>(workers))
        body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<PositionSample> sample_batch_conditional(const FlightConfig& cfg,
                                                     const GDParams& p,
                                                     std::size_t count,
                                                     std::uint64_t seed,
                                                     int threads) {
  std::vector<PositionSample> out(count);
  const int n = static_cast<int>(p.n());
  parallel_for(count, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    out[i] = simulate_conditional(cfg, n, p, rng);
  });
  return out;
}

std::vector<PositionSample> sample_batch_unconditional(const FlightConfig& cfg,
                                                       const SolvableModel& m,
                                                       double lambda,
                                                       std::size_t count,
                                                       std::uint64_t seed,
                                                       int threads) {
  const FractionalPoissonTable table(cfg.d, lambda * cfg.t);
  std::vector<PositionSample> out(count);
  parallel_for(count, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    out[i] = simulate_unconditional(cfg, m, table, rng);
  });
  return out;
}

std::vector<PositionSample> sample_batch_sphere(const FlightConfig& cfg,
                                                std::size_t count,
                                                std::uint64_t seed) {
  std::vector<PositionSample> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    RngStream rng(seed, i);
    out[i] = simulate_sphere_atom(cfg, rng);
  }
  return out;
}

}  // namespace randflight
