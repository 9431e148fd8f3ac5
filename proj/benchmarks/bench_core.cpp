#include "uistop/hitting.hpp"
#include "uistop/model.hpp"
#include "uistop/montecarlo.hpp"
#include "uistop/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

uistop::ModelParams example_params(double sigma) {
    uistop::ModelParams p;
    p.r = 0.0004;
    p.lambda0 = 0.01;
    p.mu = 0.0004;
    p.sigma = sigma;
    p.premium = 9000.0;
    p.beta = 30.0;
    p.x0 = 346.0;
    return p;
}

void BM_solve(benchmark::State& state) {
    const auto p = example_params(0.02);
    for (auto _ : state) {
        const auto s = uistop::solve(p);
        benchmark::DoNotOptimize(uistop::value(346.0, s));
    }
}
BENCHMARK(BM_solve);

void BM_normal(benchmark::State& state) {
    uistop::Rng rng(1, 0);
    double acc = 0.0;
    for (auto _ : state) acc += rng.normal();
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_normal);

void BM_grid_maximize(benchmark::State& state) {
    const auto p = example_params(0.02);
    const auto d = uistop::derive(p);
    uistop::GridSpec g{300.0, 800.0, static_cast<std::size_t>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(uistop::maximize_enpv(p, d, g));
    }
}
BENCHMARK(BM_grid_maximize)->Arg(10000)->Arg(50000);

void BM_mc_enpv(benchmark::State& state) {
    const auto p = example_params(0.02);
    uistop::SimConfig cfg;
    cfg.dt = 0.05;
    cfg.horizon = uistop::default_horizon(0.0104);
    cfg.n_paths = static_cast<std::size_t>(state.range(0));
    cfg.seed = 42;
    cfg.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(uistop::mc_enpv(p, 352.3705, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_mc_enpv)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
