// Serial vs OpenMP-parallel interval scans on synthetic piecewise series.

#include "cpseg/cusum.hpp"
#include "cpseg/not_engine.hpp"
#include "cpseg/synthgen.hpp"

#include <benchmark/benchmark.h>

namespace {

cpseg::ScoreSeries make_series(std::size_t n) {
    cpseg::SyntheticSpec spec;
    spec.n = n;
    spec.change_points = {n / 4, n / 2, 3 * n / 4};
    spec.sigma = cpseg::repeating_sigma(n, {0.5, 1.5});
    spec.seed = 42;
    return cpseg::generate(spec);
}

void run_wcp(benchmark::State &state, cpseg::Execution execution) {
    const auto series = make_series(static_cast<std::size_t>(state.range(0)));
    cpseg::PresetOptions options;
    options.execution = execution;
    options.keep_audit = false;
    options.seed = 1;
    for (auto _ : state) {
        auto run = cpseg::wcp(series, cpseg::WeightScheme::inverse_variance(), options);
        benchmark::DoNotOptimize(run.segmentation);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_WcpSerial(benchmark::State &state) { run_wcp(state, cpseg::Execution::serial); }
void BM_WcpParallel(benchmark::State &state) { run_wcp(state, cpseg::Execution::parallel); }

void BM_MaxContrast(benchmark::State &state) {
    const auto series = make_series(static_cast<std::size_t>(state.range(0)));
    const auto contrast = cpseg::Contrast::standard(series.scores());
    for (auto _ : state) {
        auto stat = cpseg::max_contrast(contrast, 0, series.size() - 1);
        benchmark::DoNotOptimize(stat);
    }
}

} // namespace

BENCHMARK(BM_WcpSerial)->RangeMultiplier(4)->Range(256, 16384);
BENCHMARK(BM_WcpParallel)->RangeMultiplier(4)->Range(256, 16384);
BENCHMARK(BM_MaxContrast)->RangeMultiplier(4)->Range(256, 65536);

BENCHMARK_MAIN();
