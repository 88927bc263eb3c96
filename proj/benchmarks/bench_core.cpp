#include <benchmark/benchmark.h>

#include <cmath>

#include "wmlab/classical.hpp"
#include "wmlab/dynamics.hpp"
#include "wmlab/moyal.hpp"
#include "wmlab/perturbation.hpp"

using namespace wmlab;

namespace {

Symbol blob(const PhaseSpaceGrid& g, double q0, double p0) {
  return Symbol::sample(g, [=](double q, double p) { return std::exp(-0.5 * ((q - q0) * (q - q0) + (p - p0) * (p - p0))); });
}

PotentialSpec quartic(double peak) {
  PotentialSpec v;
  v.t1 = -4.2;
  v.t2 = 4.2;
  v.g.pulses.push_back({0.0, 0.5, peak});
  return v;
}

}  // namespace

static void BM_StarSpectral(benchmark::State& st) {
  const auto g = make_grid(10.0, static_cast<int>(st.range(0)), 1.0);
  const auto f = blob(g, 0.3, -0.2), h = blob(g, -0.2, 0.4);
  for (auto _ : st) benchmark::DoNotOptimize(star(f, h, StarMethod::spectral(), BandLimitPolicy::Ignore));
}
BENCHMARK(BM_StarSpectral)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_WeylRoundTrip(benchmark::State& st) {
  const auto g = make_grid(10.0, static_cast<int>(st.range(0)), 1.0);
  const auto f = blob(g, 0.3, -0.2);
  for (auto _ : st) benchmark::DoNotOptimize(weyl_symbol_of(weyl_quantize(f)));
}
BENCHMARK(BM_WeylRoundTrip)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

// Per-step cost of the two scattering routes at N = 128.
static void BM_HilbertRoute(benchmark::State& st) {
  const auto g = make_grid(10.0, 128, 1.0);
  const FreeEvolution free(g, QuadraticHamiltonian::oscillator());
  const auto v = quartic(0.1);
  const int steps = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(scattering_operator_hilbert(free, v, steps));
  st.SetItemsProcessed(st.iterations() * steps);
}
BENCHMARK(BM_HilbertRoute)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_StarRoute(benchmark::State& st) {
  const auto g = make_grid(10.0, 128, 1.0);
  const FreeEvolution free(g, QuadraticHamiltonian::oscillator());
  const auto v = quartic(0.1);
  const int steps = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(scattering_operator_star(free, v, steps));
  st.SetItemsProcessed(st.iterations() * steps);
}
BENCHMARK(BM_StarRoute)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_StarDyson(benchmark::State& st) {
  const auto grid = TimeGrid::simpson(-2.5, 2.5, 7);
  const auto g = grid.sample([](double t) { return 0.4 * std::exp(-0.5 * t * t); });
  const auto j = grid.sample([](double t) { return 0.7 * std::exp(-0.5 * t * t); });
  const DysonOrders orders{static_cast<int>(st.range(0)), static_cast<int>(st.range(1))};
  for (auto _ : st) benchmark::DoNotOptimize(star_dyson(g, j, 1.1, grid, orders, 12));
}
BENCHMARK(BM_StarDyson)->Args({1, 2})->Args({2, 4})->Unit(benchmark::kMillisecond);

static void BM_DuffingRK4(benchmark::State& st) {
  DuffingParams p;
  p.g.pulses.push_back({0.0, 0.4, 1.0});
  const int steps = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(classical_scattering_map(p, {0.5, -0.3}, steps));
  st.SetItemsProcessed(st.iterations() * steps);
}
BENCHMARK(BM_DuffingRK4)->Arg(4000);

static void BM_KleinGordonVerlet(benchmark::State& st) {
  LatticeField f;
  f.a = 0.1;
  const int n = static_cast<int>(st.range(0));
  for (int i = 0; i < n; ++i) {
    f.phi.push_back(std::cos(2.0 * 3.141592653589793 * 3 * i / n));
    f.pi.push_back(0.0);
  }
  for (auto _ : st) benchmark::DoNotOptimize(solve_klein_gordon(f, {}, 1.0, 2000));
  st.SetItemsProcessed(st.iterations() * 2000);
}
BENCHMARK(BM_KleinGordonVerlet)->Arg(256);
BENCHMARK_MAIN();
