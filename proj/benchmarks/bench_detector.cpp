#include <benchmark/benchmark.h>

#include "bellsim/detector.hpp"

namespace bellsim {
namespace {

void BM_DetectSphere(benchmark::State& state) {
    const DetectionModel model{.band_half_angle_plus = 0.2,
                               .band_half_angle_minus = 0.2,
                               .fuzz_width = static_cast<double>(state.range(0)) * 0.1};
    const DetectorSetting setting = DetectorSetting::sphere_in_plane(0.7);
    RandomStream stream(1, 0);
    for (auto _ : state) {
        const HiddenVariable lambda = sample_uniform(HvSpace::Sphere, stream);
        benchmark::DoNotOptimize(detect(model, setting, lambda, stream));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DetectSphere)->Arg(0)->Arg(2);

void BM_DetectCircle(benchmark::State& state) {
    const DetectionModel model = DetectionModel::arcs(kPi / 15);
    const DetectorSetting setting = DetectorSetting::circle(0.3);
    RandomStream stream(2, 0);
    for (auto _ : state) {
        const HiddenVariable lambda = sample_uniform(HvSpace::Circle, stream);
        benchmark::DoNotOptimize(detect(model, setting, lambda, stream));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DetectCircle);

}  // namespace
}  // namespace bellsim
