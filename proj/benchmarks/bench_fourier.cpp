#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "sah/fourier_ops.hpp"

using namespace sah;

// args: d, K, p
static void BM_ConstrainedSum(benchmark::State& st, Path path)
{
    const int d = static_cast<int>(st.range(0)), K = static_cast<int>(st.range(1)), p = static_cast<int>(st.range(2));
    std::vector<TrigPoly> fs;
    for (int i = 0; i < p; ++i) fs.push_back(bench::dense_scalar(d, K, 10 + i));
    for (auto _ : st) benchmark::DoNotOptimize(constrained_sum(fs, Contraction::chain, path));
}

static void shapes(benchmark::internal::Benchmark* b)
{
    for (int d = 1; d <= 3; ++d)
        for (int K : {1, 2, 3})
            for (int p : {3, 4}) b->Args({d, K, p});
}

BENCHMARK_CAPTURE(BM_ConstrainedSum, fft, Path::fft)->Apply(shapes)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_ConstrainedSum, direct, Path::direct)->Apply(shapes)->Unit(benchmark::kMicrosecond);
