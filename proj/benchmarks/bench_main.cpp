#include <benchmark/benchmark.h>

#include "randflight/density.hpp"
#include "randflight/flight.hpp"
#include "randflight/rng.hpp"
#include "randflight/sampling.hpp"
#include "randflight/specfun.hpp"

using namespace randflight;
namespace sf = randflight::specfun;

static void BM_bessel_series(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sf::bessel_j(2.5, 4.0));
}
BENCHMARK(BM_bessel_series);

static void BM_bessel_large_argument(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sf::bessel_j(2.5, 120.0));
}
BENCHMARK(BM_bessel_large_argument);

static void BM_mittag_leffler(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sf::mittag_leffler(1.0, 2.0, 3.7));
}
BENCHMARK(BM_mittag_leffler);

static void BM_gauss_2f1(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sf::gauss_2f1(0.5, 0.5, 1.5, 0.64));
}
BENCHMARK(BM_gauss_2f1);

static void BM_sample_direction(benchmark::State& state) {
  RngStream rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_direction(4, rng));
}
BENCHMARK(BM_sample_direction);

static void BM_sample_gd(benchmark::State& state) {
  const GDParams p({3.0, 3.0, 1.0}, {1.0, 4.0, 1.0}, 1.0);
  RngStream rng(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_gd(p, rng));
}
BENCHMARK(BM_sample_gd);

static void BM_simulate_conditional(benchmark::State& state) {
  const FlightConfig cfg{4, 1.0, 1.0};
  const GDParams p = expand_model(SolvableModel::second_type_y(2, 1), 3, 4);
  RngStream rng(3);
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_conditional(cfg, 3, p, rng));
}
BENCHMARK(BM_simulate_conditional);

static void BM_density_two_step(benchmark::State& state) {
  const FlightConfig cfg{4, 1.0, 1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(density_two_step(4, 2.5, 1.7, cfg, 0.4));
}
BENCHMARK(BM_density_two_step);

static void BM_density_solvable_second(benchmark::State& state) {
  const FlightConfig cfg{4, 1.0, 1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(density_solvable_second(2, 4, 3, cfg, 0.5));
}
BENCHMARK(BM_density_solvable_second);

static void BM_cf_conditional(benchmark::State& state) {
  const FlightConfig cfg{4, 1.0, 1.0};
  const SolvableModel m = SolvableModel::second_type_y(2, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(cf_conditional(m, 4, 3, 2.0, cfg));
}
BENCHMARK(BM_cf_conditional);

BENCHMARK_MAIN();
