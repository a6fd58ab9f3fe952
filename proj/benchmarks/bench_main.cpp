#include <vector>

#include <benchmark/benchmark.h>

#include "qcstat/ensemble.hpp"
#include "qcstat/game.hpp"
#include "qcstat/spectrum.hpp"
#include "qcstat/tridiagonal.hpp"

using namespace qcstat;

static void BM_LowestEigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SymmetricTridiagonal m(std::vector<double>(n, 2.0), std::vector<double>(n - 1, -1.0));
  for (auto _ : state) benchmark::DoNotOptimize(lowest_eigenvalues(m, 64));
}
BENCHMARK(BM_LowestEigenvalues)->Arg(1'000)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_QuarticFiniteDifference(benchmark::State& state) {
  const auto v = Potential::homogeneous(1, 4.0);
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve(v, 1.0, count));
}
BENCHMARK(BM_QuarticFiniteDifference)->Arg(50)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_BoxEnumeration3d(benchmark::State& state) {
  const double sides[] = {1.0, 1.3, 0.7};
  const auto count = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_box(sides, 1.0, 1.0, count));
}
BENCHMARK(BM_BoxEnumeration3d)->Arg(10'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

static void BM_QuantumSum(benchmark::State& state) {
  const double one[] = {1.0};
  const auto s = solve_for_beta(Potential::box(std::vector<double>(one, one + 1)), 1.0, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(z_quantum(s, 1e-3));
  state.counters["levels"] = static_cast<double>(s.count());
}
BENCHMARK(BM_QuantumSum);

static void BM_Ascent(benchmark::State& state) {
  const std::vector<double> e{0.3, 1.1, 1.7, 2.2, 3.9, 4.4, 5.0, 6.1};
  const std::vector<double> start(e.size(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(ascend(e, -1.0, start));
}
BENCHMARK(BM_Ascent);

// The distro's benchmark_main archive carries LTO bytecode from another gcc.
BENCHMARK_MAIN();
