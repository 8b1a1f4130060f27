#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ribbonlab/bands.hpp"
#include "ribbonlab/eigen.hpp"
#include "ribbonlab/fiber.hpp"
#include "ribbonlab/inverse.hpp"
#include "ribbonlab/lattice.hpp"

using namespace ribbonlab;

namespace {

std::vector<double> random_v(int N, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(2 * N + 1));
  for (double& x : v) x = U(rng);
  return v;
}

}  // namespace

static void BM_EigTridiagValues(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const FiberMatrix m = build_fiber(random_v(N, 7), 0.7, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(eigvals_tridiag(m.diag, m.off));
}
BENCHMARK(BM_EigTridiagValues)->Arg(2)->Arg(10)->Arg(50);

static void BM_EigTridiagVectors(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const FiberMatrix m = build_fiber(random_v(N, 7), 0.7, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(eig_tridiag(m.diag, m.off, true));
}
BENCHMARK(BM_EigTridiagVectors)->Arg(2)->Arg(10)->Arg(50);

static void BM_Dispersion(benchmark::State& state) {
  const RibbonSpec spec = RibbonSpec::make(static_cast<int>(state.range(0)), 0.05, random_v(static_cast<int>(state.range(0)), 3));
  for (auto _ : state) benchmark::DoNotOptimize(dispersion(spec, 1024));
}
BENCHMARK(BM_Dispersion)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_BandStructureRefined(benchmark::State& state) {
  const RibbonSpec spec = RibbonSpec::make(static_cast<int>(state.range(0)), 0.05, random_v(static_cast<int>(state.range(0)), 3));
  for (auto _ : state) benchmark::DoNotOptimize(band_structure(spec, 1024, true));
}
BENCHMARK(BM_BandStructureRefined)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_TruncatedSpectrum(benchmark::State& state) {
  const RibbonSpec spec = RibbonSpec::make(1, 0.0, {0.0, 0.0, 0.0});
  for (auto _ : state) benchmark::DoNotOptimize(truncated_spectrum(spec, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TruncatedSpectrum)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_RecoverOdd(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  OddPotential w;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-0.01, 0.01);
  for (int i = 0; i <= N; ++i) w.odd.push_back(U(rng));
  const NodeSet nodes = NodeSet::periodic(N);
  const std::vector<double> targets = forward_odd(w, 0.05, nodes);
  for (auto _ : state) benchmark::DoNotOptimize(recover_odd(targets, 0.05, nodes));
}
BENCHMARK(BM_RecoverOdd)->Arg(2)->Arg(4);

static void BM_RecoverMonotone(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  std::vector<double> v;
  for (int i = 0; i < 2 * N + 1; ++i) v.push_back((i + 0.5) / (2 * N + 1));
  const std::vector<double> psi = antiperiodic_eigs(v);
  for (auto _ : state) benchmark::DoNotOptimize(recover_monotone(psi, Direction::increasing));
}
BENCHMARK(BM_RecoverMonotone)->Arg(8)->Arg(64);
BENCHMARK_MAIN();
