// Serial reference vs OpenMP sweep kernels.

#include "nrcav/experiments.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace nrcav;

SweepSpec enumeration_spec(std::size_t n)
{
    SweepSpec spec;
    spec.axis1 = open_axis(SweepAxis::EpsPSq, 3.0, n);
    spec.axis2 = AxisSpec{SweepAxis::G, {2, 3, 4, 5, 6, 7}};
    return spec;
}

SweepSpec hysteresis_spec(std::size_t n)
{
    SweepSpec spec = enumeration_spec(n);
    spec.hysteresis = true;
    return spec;
}

SystemParams fig2_params()
{
    SystemParams p = passive_reference();
    p.J = 4.0;
    return p;
}

void BM_EnumerateSerial(benchmark::State& state)
{
    const auto spec = enumeration_spec(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep(spec, fig2_params(), ExecPolicy::serial()));
    }
}

void BM_EnumerateOpenMP(benchmark::State& state)
{
    const auto spec = enumeration_spec(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep(spec, fig2_params(), ExecPolicy{}));
    }
}

void BM_HysteresisSerial(benchmark::State& state)
{
    const auto spec = hysteresis_spec(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep(spec, fig2_params(), ExecPolicy::serial()));
    }
}

void BM_HysteresisOpenMP(benchmark::State& state)
{
    const auto spec = hysteresis_spec(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep(spec, fig2_params(), ExecPolicy{}));
    }
}

}  // namespace

BENCHMARK(BM_EnumerateSerial)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateOpenMP)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HysteresisSerial)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HysteresisOpenMP)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
