#include <benchmark/benchmark.h>

#include "xnet/numerics.hpp"

namespace {

using namespace xnet;

void BM_Invert(benchmark::State& state) {
    Rng rng(1);
    const CMatrix m = complex_normal_matrix(rng, state.range(0), state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(invert(m));
}
BENCHMARK(BM_Invert)->Arg(2)->Arg(3)->Arg(6);

void BM_NumericRank(benchmark::State& state) {
    Rng rng(2);
    const CMatrix m = complex_normal_matrix(rng, 3, 4);
    for (auto _ : state) benchmark::DoNotOptimize(numeric_rank(m));
}
BENCHMARK(BM_NumericRank);

} // namespace
