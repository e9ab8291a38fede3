// SPDX-License-Identifier: Apache-2.0
//
// Serial reference sweep vs the OpenMP trial-parallel sweep, plus the cost of
// a single BD-RIS optimization at a few RIS sizes.
#include "bdris/bdris_opt.hpp"
#include "bdris/config.hpp"
#include "bdris/experiment.hpp"

#include <benchmark/benchmark.h>

namespace {

bdris::ExperimentConfig bench_config() {
    bdris::ExperimentConfig c = bdris::desk_profile();
    c.scenario.m = 8;
    c.trials = 8;
    c.ris_x = {30.0, 70.0};
    return c;
}

void BM_SweepSerial(benchmark::State& state) {
    const auto cfg = bench_config();
    for (auto _ : state) {
        auto res = bdris::exp::run_sweep_serial(cfg, bdris::exp::SweepKind::ris_x);
        benchmark::DoNotOptimize(res.records.data());
    }
    state.SetItemsProcessed(state.iterations() * cfg.trials * static_cast<long>(cfg.ris_x.size()));
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SweepParallel(benchmark::State& state) {
    const auto cfg = bench_config();
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto res = bdris::exp::run_sweep_parallel(cfg, bdris::exp::SweepKind::ris_x, threads);
        benchmark::DoNotOptimize(res.records.data());
    }
    state.SetItemsProcessed(state.iterations() * cfg.trials * static_cast<long>(cfg.ris_x.size()));
}
BENCHMARK(BM_SweepParallel)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_MaximizeCapacity(benchmark::State& state) {
    bdris::Scenario s;
    s.m = static_cast<int>(state.range(0));
    const auto ch = bdris::channel::build_channels(s, 1);
    const bdris::opt::OptimizerConfig cfg;
    const auto init = bdris::opt::make_initialization(ch, s.noise_mw(), s.tx_power_mw,
                                                      bdris::opt::InitStrategy::best, 1, cfg);
    for (auto _ : state) {
        auto r = bdris::opt::maximize_capacity(ch, s.noise_mw(), s.tx_power_mw, init, cfg);
        benchmark::DoNotOptimize(r.capacity_nats);
    }
}
BENCHMARK(BM_MaximizeCapacity)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
