#include <benchmark/benchmark.h>

#include <limits>

#include "gammaref/fbm.hpp"
#include "gammaref/field_analysis.hpp"
#include "gammaref/monte_carlo.hpp"
#include "gammaref/reflection.hpp"

using namespace gammaref;

namespace {

void BM_SpectralSample(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  SpectralFgnSampler sampler(HurstIndex(0.7), n);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    auto inc = sampler.sample(1.0 / n, 1, rep++);
    benchmark::DoNotOptimize(inc.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SpectralSample)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 17);

void BM_ReflectPass(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  SpectralFgnSampler sampler(HurstIndex(0.7), n);
  const auto inc = sampler.sample(1.0 / n, 2, 0);
  const auto path = fbm_path_from_fgn(inc, GridSpec(n, 1.0), HurstIndex(0.7));
  const auto y = drift_input(path, 1.0);
  for (auto _ : state) {
    auto w = reflect(y, 0.5);
    benchmark::DoNotOptimize(w.w_values.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ReflectPass)->Arg(1 << 14)->Arg(1 << 17);

void BM_RuinEstimate(benchmark::State& state) {
  ExperimentSpec spec{ModelParams(HurstIndex(0.5), 1.0, 0.3),
                      1.0,
                      LongHorizon{std::numeric_limits<double>::infinity()},
                      GridSpec(4096, 1.0),
                      static_cast<std::size_t>(state.range(0)),
                      3};
  spec.grid = GridSpec(4096, experiment_horizon(spec));
  for (auto _ : state) {
    auto est = estimate_ruin_prob(spec, static_cast<unsigned>(state.range(1)));
    benchmark::DoNotOptimize(est.point);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RuinEstimate)->Args({1000, 1})->Args({1000, 4})->Args({1000, 8});

void BM_VarianceLandscape(benchmark::State& state) {
  const FieldParams fp{ModelParams(HurstIndex(0.7), 1.0, 0.3), 0.5};
  for (auto _ : state) {
    auto vm = locate_variance_max(fp, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(vm.value);
  }
}
BENCHMARK(BM_VarianceLandscape)->Arg(200)->Arg(800);

}  // namespace

BENCHMARK_MAIN();
