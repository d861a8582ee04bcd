#include <benchmark/benchmark.h>

#include "bench_util.hpp"
#include "sah/oracle.hpp"

using namespace sah;

// d = 2, K = 2 data; arg is K_solver
static void BM_CellSolve(benchmark::State& st)
{
    const auto c = bench::dense_expansion(2, 2, 9);
    const int Ks = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(cell_solve(c, 0.05, Ks));
}
BENCHMARK(BM_CellSolve)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
