#pragma once

#include <cstdint>
#include <vector>

#include "randflight/rng.hpp"
#include "randflight/sampling.hpp"

namespace randflight {

// Dimension d >= 2, speed c > 0, horizon t > 0.
struct FlightConfig {
  int d;
  double c;
  double t;

  FlightConfig(int d_in, double c_in, double t_in);
  double ct() const { return c * t; }
};

enum class SolvableFamily { first_type, second_type_y, second_type_z };

// One of the three solvable duration laws. h, i, j are the family knobs:
// first type takes (h, i in {0,1}, j >= 1); second type Y takes
// (h in {1,2}, i in {0,1}); second type Z takes (h in {1,2}, j >= 1).
struct SolvableModel {
  SolvableFamily family;
  int h = 0;
  int i = 0;
  int j = 0;

  static SolvableModel first_type(int h, int i, int j);
  static SolvableModel second_type_y(int h, int i);
  static SolvableModel second_type_z(int h, int j);
};

struct PositionSample {
  std::vector<double> x;
  bool on_sphere = false;
  int n_changes = 0;

  double radius() const;
};

// Concrete GD parameters of a solvable model for n direction changes in
// dimension d. First-type models require d >= 3; second-type with h = 2
// require d >= 3.
GDParams expand_model(const SolvableModel& m, int n, int d, double horizon = 1.0);

// Position after n >= 1 direction changes with durations drawn from p
// (p.horizon must equal cfg.t). The sample satisfies |x| < c t.
PositionSample simulate_conditional(const FlightConfig& cfg, int n,
                                    const GDParams& p, RngStream& rng);

// Degenerate zero-change flight: the position c t V on the sphere.
PositionSample simulate_sphere_atom(const FlightConfig& cfg, RngStream& rng);

// Unconditional flight: N from the fractional Poisson law, then the
// conditional flight under the expanded model (N = 0 gives the sphere atom).
// Requires d >= 3.
PositionSample simulate_unconditional(const FlightConfig& cfg,
                                      const SolvableModel& m, double lambda,
                                      RngStream& rng);
PositionSample simulate_unconditional(const FlightConfig& cfg,
                                      const SolvableModel& m,
                                      const FractionalPoissonTable& table,
                                      RngStream& rng);

// Batch samplers. Sample index i always uses RngStream(seed, i), so results
// are reproducible and independent of the worker-thread count. threads = 0
// means the RANDFLIGHT_THREADS environment variable, falling back to the
// hardware concurrency.
std::vector<PositionSample> sample_batch_conditional(
    const FlightConfig& cfg, const GDParams& p, std::size_t count,
    std::uint64_t seed, int threads = 0);
std::vector<PositionSample> sample_batch_unconditional(
    const FlightConfig& cfg, const SolvableModel& m, double lambda,
    std::size_t count, std::uint64_t seed, int threads = 0);
std::vector<PositionSample> sample_batch_sphere(const FlightConfig& cfg,
                                                std::size_t count,
                                                std::uint64_t seed);

// Worker-thread count resolution used by the batch samplers.
int resolve_threads(int requested);

}  // namespace randflight
