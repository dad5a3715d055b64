#include <benchmark/benchmark.h>

#include <random>

#include "polydisc/kernels.hpp"
#include "polydisc/reference.hpp"

using namespace polydisc;

namespace {

CoeffTensor random_tensor(const Degrees& d) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::size_t size = 1;
  for (auto k : d) size *= k + 1;
  std::vector<cplx> a(size);
  for (auto& x : a) x = {g(rng), g(rng)};
  return CoeffTensor(d, a);
}

template <class F>
void grid(benchmark::State& state, F values) {
  const auto K = static_cast<std::size_t>(state.range(0));
  const auto f = random_tensor({K, K});
  const std::vector<double> r{0.9, 0.9};
  const std::vector<std::size_t> m{4 * (K + 1), 4 * (K + 1)};
  for (auto _ : state) benchmark::DoNotOptimize(values(f, r, m));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m[0] * m[1]));
}

void BM_TorusParallel(benchmark::State& state) { grid(state, kernels::torus_values); }
void BM_TorusSerial(benchmark::State& state) { grid(state, reference::torus_values); }

template <class F>
void mean(benchmark::State& state, F pm) {
  std::vector<cplx> v(static_cast<std::size_t>(state.range(0)));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (auto& x : v) x = {g(rng), g(rng)};
  for (auto _ : state) benchmark::DoNotOptimize(pm(v, 1.5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PowerMeanParallel(benchmark::State& state) {
  mean(state, [](std::span<const cplx> v, double p) { return kernels::power_mean(v, p); });
}
void BM_PowerMeanSerial(benchmark::State& state) {
  mean(state, [](std::span<const cplx> v, double p) { return reference::power_mean(v, p); });
}

}  // namespace

BENCHMARK(BM_TorusParallel)->Arg(8)->Arg(32);
BENCHMARK(BM_TorusSerial)->Arg(8)->Arg(32);
BENCHMARK(BM_PowerMeanParallel)->Arg(1 << 12)->Arg(1 << 18);
BENCHMARK(BM_PowerMeanSerial)->Arg(1 << 12)->Arg(1 << 18);

BENCHMARK_MAIN();
