#include <benchmark/benchmark.h>

#include "zbar/exact_engine.hpp"
#include "zbar/monte_carlo.hpp"

using namespace zbar;

namespace {

const TransitionProfile kProfile = TransitionProfile::two_sided(0.31, 0.62);
const MeasureZbar kMu(0.25, 0.25, {{-1, 0.2}, {0, 0.1}, {1, 0.2}});

void BM_BallEnum(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ball_prob_enum(kProfile, kMu, 0.3, n));
}

void BM_BallEnumSerial(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ball_prob_enum_serial(kProfile, kMu, 0.3, n));
}

void BM_Importance(benchmark::State& state) {
    const auto h = TransitionProfile::homogeneous(0.3);
    const auto s = TiltSchedule::constant(0.0, 201);
    for (auto _ : state)
        benchmark::DoNotOptimize(importance_estimate(h, excursion_event(5, 1), s, 5, 201, state.range(0), 1).mean);
}

void BM_ImportanceSerial(benchmark::State& state) {
    const auto h = TransitionProfile::homogeneous(0.3);
    const auto s = TiltSchedule::constant(0.0, 201);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            importance_estimate_serial(h, excursion_event(5, 1), s, 5, 201, state.range(0), 1).mean);
}

}  // namespace

BENCHMARK(BM_BallEnum)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BallEnumSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Importance)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ImportanceSerial)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
