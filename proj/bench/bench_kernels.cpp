// Serial reference vs OpenMP for the two parallel kernels.
#include <benchmark/benchmark.h>

#include <vector>

#include "snlp/level_kernel.hpp"
#include "snlp/path_kernel.hpp"

using namespace snlp;

namespace {

const LevyModel model = LevyModel::brownian(0, 1);
const auto potential = BivariatePotential::reflected(0.4, 2);

std::vector<LevelRequest> levels() {
  std::vector<LevelRequest> req;
  for (int i = 1; i <= 64; ++i) req.push_back({i / 64.0, static_cast<std::size_t>(16 * i), true});
  return req;
}

template <bool Parallel>
void BM_levels(benchmark::State& state) {
  const auto req = levels();
  std::vector<FrozenLevel> out(req.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      evaluate_levels(model, potential, 0, req, out);
    else
      serial::evaluate_levels(model, potential, 0, req, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(req.size()));
}

template <bool Parallel>
void BM_paths(benchmark::State& state) {
  MCConfig cfg;
  cfg.dt = 1e-3;
  cfg.n_paths = static_cast<std::size_t>(state.range(0));
  const auto spec = ExitSpec::make(0, 0.5, 1);
  std::vector<PathOutput> out(cfg.n_paths);
  for (auto _ : state) {
    if constexpr (Parallel)
      simulate_paths(model, potential, spec, cfg, 0, out);
    else
      serial::simulate_paths(model, potential, spec, cfg, 0, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_levels<false>)->Name("levels/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_levels<true>)->Name("levels/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_paths<false>)->Name("paths/serial")->Arg(4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_paths<true>)->Name("paths/openmp")->Arg(4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
