#include <benchmark/benchmark.h>

#include "powerscope/perfreq.hpp"
#include "powerscope/regress.hpp"
#include "powerscope/rng.hpp"
#include "powerscope/select.hpp"
#include "powerscope/synth.hpp"
#include "powerscope/unified.hpp"

using namespace powerscope;

namespace {

std::vector<RateRow> make_rows(std::size_t n, std::size_t k) {
    Rng rng(1);
    Coefficients truth;
    truth.intercept_w = 0.7720;
    for (std::size_t j = 0; j < k; ++j) truth.slopes_w.push_back(rng.uniform(-0.1, 0.1));
    std::vector<RateRow> rows;
    for (std::size_t i = 0; i < n; ++i) {
        RateRow row;
        for (std::size_t j = 0; j < k; ++j) row.rates.push_back(rng.uniform(0.0, 100.0));
        row.power_w = predict(truth, row.rates) + rng.gaussian(0.0, 0.05);
        rows.push_back(std::move(row));
    }
    return rows;
}

void BM_OlsFit(benchmark::State& state) {
    const auto rows = make_rows(static_cast<std::size_t>(state.range(0)), 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ols_fit(rows));
    }
}
BENCHMARK(BM_OlsFit)->Arg(200)->Arg(2000)->Arg(20000);

void BM_Predict(benchmark::State& state) {
    Coefficients c{0.7720, {0.0025, 0.0908, -0.000017, 0.000019}};
    const std::vector<double> rates{120.0, 8.5, 300.0, 40.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(predict(c, rates));
    }
}
BENCHMARK(BM_Predict);

void BM_ScalePower(benchmark::State& state) {
    const OperatingPoint ref{380000000, 0.82};
    const OperatingPoint target{998000000, 1.07};
    for (auto _ : state) {
        benchmark::DoNotOptimize(scale_power(2.5, 0.21, ref, target));
    }
}
BENCHMARK(BM_ScalePower);

void BM_GenerateTable(benchmark::State& state) {
    GeneratorSpec spec = default_spec();
    spec.samples_per_cell = static_cast<std::size_t>(state.range(0));
    spec.noise_sd_w = 0.03;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate(spec).table.samples.size());
    }
}
BENCHMARK(BM_GenerateTable)->Arg(10)->Arg(50);

void BM_SearchBottomUp(benchmark::State& state) {
    GeneratorSpec spec = default_spec();
    spec.samples_per_cell = 20;
    spec.noise_sd_w = 0.02;
    const SynthOutput data = generate(spec);
    const BenchmarkSplit split = default_spec_file().split;
    SearchConfig cfg;
    cfg.max_counters = 4;
    cfg.candidate_counters = spec.counters;
    for (auto _ : state) {
        benchmark::DoNotOptimize(search(data.table, split, spec.dvfs, cfg).chosen_counters);
    }
}
BENCHMARK(BM_SearchBottomUp)->Unit(benchmark::kMillisecond);

void BM_FitPerFreq(benchmark::State& state) {
    GeneratorSpec spec = default_spec();
    spec.samples_per_cell = static_cast<std::size_t>(state.range(0));
    spec.noise_sd_w = 0.02;
    const SynthOutput data = generate(spec);
    const BenchmarkSplit split = default_spec_file().split;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fit_per_freq(data.table, split, spec.dvfs, spec.counters).entries.size());
    }
}
BENCHMARK(BM_FitPerFreq)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
