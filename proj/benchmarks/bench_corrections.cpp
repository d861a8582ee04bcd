#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "sah/corrections.hpp"

using namespace sah;

static void BM_A4(benchmark::State& st, Path path)
{
    const auto c = bench::dense_expansion(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), 7);
    for (auto _ : st) benchmark::DoNotOptimize(a4_correction(c, path));
}

BENCHMARK_CAPTURE(BM_A4, fft, Path::fft)->ArgsProduct({{1, 2, 3}, {1, 2, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_A4, direct, Path::direct)->ArgsProduct({{1, 2, 3}, {1, 2, 3}})->Unit(benchmark::kMillisecond);

static void BM_A2(benchmark::State& st)
{
    const auto c = bench::dense_expansion(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), 8);
    for (auto _ : st) benchmark::DoNotOptimize(a2_direct(c));
}
BENCHMARK(BM_A2)->ArgsProduct({{1, 2, 3}, {2, 4}})->Unit(benchmark::kMicrosecond);
