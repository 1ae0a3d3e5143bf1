#include <benchmark/benchmark.h>

#include "bellsim/oracle.hpp"

namespace bellsim {
namespace {

void BM_BandedProbabilities(benchmark::State& state) {
    const auto band = DetectionModel::symmetric_band(0.3);
    const int resolution = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(banded_probabilities(HvSpace::Sphere, 1.1, band, band, 0.0, resolution));
}
BENCHMARK(BM_BandedProbabilities)->Arg(200)->Arg(800)->Unit(benchmark::kMicrosecond);

void BM_BandedProbabilitiesSmeared(benchmark::State& state) {
    const auto band = DetectionModel::symmetric_band(0.3);
    for (auto _ : state) benchmark::DoNotOptimize(banded_probabilities(HvSpace::Sphere, 1.1, band, band, kPi / 4));
}
BENCHMARK(BM_BandedProbabilitiesSmeared)->Unit(benchmark::kMillisecond);

void BM_AspectPresetReport(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(aspect_preset_report());
}
BENCHMARK(BM_AspectPresetReport)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace bellsim
