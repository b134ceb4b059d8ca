#include <benchmark/benchmark.h>

#include "floqfric/friction.hpp"
#include "floqfric/greens.hpp"

using namespace floqfric;

namespace {

ModelParams driven(int n) {
    ModelParams p;
    p.gamma = 1.0;
    p.beta = 2.0;
    p.coupling_slope = 1.0;
    p.level_shift = 3.0;
    p.drive_amp = 1.0;
    p.drive_freq = 0.5;
    p.n_floquet = n;
    return p;
}

void BM_BuildFloquet(benchmark::State& state) {
    const auto p = driven(static_cast<int>(state.range(0)));
    const auto h = model_harmonics({-3.0, 0.5}, p);
    for (auto _ : state) benchmark::DoNotOptimize(build_floquet_operator(h, p));
}
BENCHMARK(BM_BuildFloquet)->Arg(5)->Arg(10)->Arg(20);

void BM_RetardedGreens(benchmark::State& state) {
    const auto p = driven(static_cast<int>(state.range(0)));
    const auto hf = build_floquet_operator(model_harmonics({-3.0, 0.5}, p), p);
    const auto se = model_self_energy(p);
    for (auto _ : state) benchmark::DoNotOptimize(g_retarded(0.3, hf, se));
}
BENCHMARK(BM_RetardedGreens)->Arg(5)->Arg(10);

void BM_IntegrandSample(benchmark::State& state) {
    const auto p = driven(static_cast<int>(state.range(0)));
    const Position r{-3.0, 0.5};
    const FrictionIntegrand f(build_floquet_operator(model_harmonics(r, p), p), dh_floquet(Direction::x, r, p),
                              dh_floquet(Direction::y, r, p), model_self_energy(p));
    double eps = -1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(f(eps));
        eps = eps > 1.0 ? -1.0 : eps + 1e-3;
    }
}
BENCHMARK(BM_IntegrandSample)->Arg(5)->Arg(10);

void BM_FrictionTensor(benchmark::State& state) {
    const auto p = driven(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(friction_tensor({-3.0, 0.5}, p));
}
BENCHMARK(BM_FrictionTensor)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
