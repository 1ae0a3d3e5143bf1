#include <benchmark/benchmark.h>

#include "bellsim/experiment.hpp"

namespace bellsim {
namespace {

void BM_RunSubexperiment(benchmark::State& state) {
    const auto band = DetectionModel::symmetric_band(0.2);
    const auto config = SubexperimentConfig::at_relative_angle(HvSpace::Sphere, 1.0, band, band, state.range(1) * 0.1,
                                                               static_cast<std::uint64_t>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(run_subexperiment(config, 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunSubexperiment)->Args({100'000, 0})->Args({100'000, 3})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace bellsim
