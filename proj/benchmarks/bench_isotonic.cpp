#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "monoreg/isotonic.hpp"
#include "monoreg/order.hpp"

using namespace monoreg;

namespace {

std::vector<double> noisy_plane(const Lattice& lat, double sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sd);
  std::vector<double> f(lat.size());
  for (std::size_t p = 0; p < f.size(); ++p) {
    const MultiIndex idx = lat.multi(p);
    double v = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a) v += double(idx[a]) / double(lat.extent(a));
    f[p] = v + noise(rng);
  }
  return f;
}

void BM_Pava(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto f = noisy_plane(Lattice({n}), 0.5, 1);
  const std::vector<double> w(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(pava_1d(f, w));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Pava)->RangeMultiplier(8)->Range(1 << 8, 1 << 20)->Complexity(benchmark::oN);

void BM_Solve2d(benchmark::State& state) {
  const std::size_t side = static_cast<std::size_t>(state.range(0));
  const Lattice lat({side, side});
  const auto f = noisy_plane(lat, 0.1, 2);
  const std::vector<double> w(lat.size(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_values(f, w, lat, Signature({1, 1})));
  state.counters["points"] = double(lat.size());
}
BENCHMARK(BM_Solve2d)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

void BM_Solve3d(benchmark::State& state) {
  const std::size_t side = static_cast<std::size_t>(state.range(0));
  const Lattice lat({side, side, side});
  const auto f = noisy_plane(lat, 0.1, 3);
  const std::vector<double> w(lat.size(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_values(f, w, lat, Signature({1, -1, 1})));
  state.counters["points"] = double(lat.size());
}
BENCHMARK(BM_Solve3d)->RangeMultiplier(2)->Range(8, 32)->Unit(benchmark::kMillisecond);

void BM_SolveCertified(benchmark::State& state) {
  const std::size_t side = static_cast<std::size_t>(state.range(0));
  const GridSpec g = GridSpec::equidistant(Box::unit(2), {side, side});
  const GridFunction f(g, noisy_plane(g.lattice(), 0.1, 4));
  const GridFunction w = GridFunction::constant(g, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve(f, w, Signature({1, 1})));
}
BENCHMARK(BM_SolveCertified)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

void BM_Dykstra(benchmark::State& state) {
  const std::size_t side = static_cast<std::size_t>(state.range(0));
  const Lattice lat({side, side});
  const auto f = noisy_plane(lat, 0.1, 5);
  const std::vector<double> w(lat.size(), 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(dykstra_values(f, w, lat, Signature({1, 1}), 1e-10, 1000000));
}
BENCHMARK(BM_Dykstra)->RangeMultiplier(2)->Range(8, 32)->Unit(benchmark::kMillisecond);

void BM_MinmaxOracle(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const GridSpec g = GridSpec::equidistant(Box::unit(2), {n / 3, 3});
  const GridFunction f(g, noisy_plane(g.lattice(), 0.5, 6));
  const GridFunction w = GridFunction::constant(g, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(minmax_oracle(f, w, Signature({1, 1})));
}
BENCHMARK(BM_MinmaxOracle)->DenseRange(6, 15, 3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
