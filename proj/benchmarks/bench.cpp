// Microbenchmarks for the hot paths: record bucketing, gap filling, pair and
// group correlation, the three smoothers, the parameter search, and synthetic
// generation. Narrow a run with --benchmark_filter=<regex>.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rttkit/correlate.hpp"
#include "rttkit/forecast.hpp"
#include "rttkit/ingest.hpp"
#include "rttkit/series.hpp"
#include "rttkit/synth.hpp"

namespace {

using namespace rttkit;

constexpr std::size_t kTwoWeeks = 4032;  // 14 days at 288 slots per day

SeriesKey key_n(std::size_t i) {
    return SeriesKey{"bench", 1, 0, "t" + std::to_string(i), "l" + std::to_string(i)};
}

/// Random positive series; gap_percent of the slots stay missing.
TimeSeries noisy_series(std::size_t slots, unsigned gap_percent, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Observation> values(slots);
    for (auto& v : values)
        if (rng() % 100 >= gap_percent)
            v = 20.0 + static_cast<double>(rng() % 10000) / 250.0;
    return TimeSeries(key_n(seed), GridSpec{0, 300, slots}, std::move(values));
}

void regularize_records(benchmark::State& state) {
    const GridSpec grid{0, 300, kTwoWeeks};
    std::mt19937_64 rng(1);
    std::vector<ProbeRecord> records;
    records.reserve(20000);
    for (int i = 0; i < 20000; ++i)
        records.push_back({key_n(rng() % 8),
                           static_cast<std::int64_t>(rng() % (300 * kTwoWeeks)),
                           10.0 + static_cast<double>(rng() % 1000) / 7.0});
    for (auto _ : state) benchmark::DoNotOptimize(regularize(records, grid));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(records.size()));
}
BENCHMARK(regularize_records);

void interpolate_two_weeks(benchmark::State& state) {
    const TimeSeries series = noisy_series(kTwoWeeks, 20, 2);
    for (auto _ : state) benchmark::DoNotOptimize(interpolate_gaps(series, 6));
}
BENCHMARK(interpolate_two_weeks);

void pearson_pair(benchmark::State& state) {
    const TimeSeries a = noisy_series(kTwoWeeks, 10, 3);
    const TimeSeries b = noisy_series(kTwoWeeks, 10, 4);
    for (auto _ : state) benchmark::DoNotOptimize(pearson(a, b, 288));
}
BENCHMARK(pearson_pair);

/// range(0): group size; range(1): worker threads (0 = hardware pick).
void matrix_group(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    const auto threads = static_cast<unsigned>(state.range(1));
    std::vector<TimeSeries> members;
    for (std::size_t s = 0; s < count; ++s) members.push_back(noisy_series(kTwoWeeks, 10, s));
    std::vector<const TimeSeries*> group;
    for (const TimeSeries& m : members) group.push_back(&m);
    for (auto _ : state) benchmark::DoNotOptimize(correlation_matrix(group, 288, threads));
}
BENCHMARK(matrix_group)->Args({25, 1})->Args({100, 1})->Args({100, 0})->Unit(benchmark::kMillisecond);

std::vector<double> dense_two_weeks(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> y(kTwoWeeks);
    for (double& v : y) v = 20.0 + static_cast<double>(rng() % 10000) / 250.0;
    return y;
}

void ses_two_weeks(benchmark::State& state) {
    const std::vector<double> y = dense_two_weeks(5);
    for (auto _ : state) benchmark::DoNotOptimize(ses(y, 0.3, 288));
}
BENCHMARK(ses_two_weeks);

void hw_two_weeks(benchmark::State& state) {
    const std::vector<double> y = dense_two_weeks(6);
    for (auto _ : state) benchmark::DoNotOptimize(hw(y, HwParams{0.3, 0.05, 0.1, 288}, 288));
}
BENCHMARK(hw_two_weeks);

/// range(0): grid step in hundredths.
void fit_search(benchmark::State& state) {
    const std::vector<double> y = dense_two_weeks(7);
    const double step = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) benchmark::DoNotOptimize(fit(y, 288, 288, step, 0));
}
BENCHMARK(fit_search)->Arg(25)->Arg(5)->Unit(benchmark::kMillisecond);

void generate_two_weeks(benchmark::State& state) {
    SynthSpec spec;
    spec.base_rtt = 50.0;
    spec.daily_amp = 10.0;
    spec.weekend_boost = 5.0;
    spec.noise_sigma = 3.0;
    spec.episode_rate = 2.0;
    spec.episode_height = 40.0;
    spec.gap_rate = 1.0;
    spec.gap_len = 6;
    spec.days = 14;
    spec.seed = 8;
    for (auto _ : state) benchmark::DoNotOptimize(generate(spec, key_n(0)));
}
BENCHMARK(generate_two_weeks);

}  // namespace

BENCHMARK_MAIN();
