#include <benchmark/benchmark.h>

#include "xnet/verify.hpp"

namespace {

using namespace xnet;

void BM_FullRankAlamoutiQam16(benchmark::State& state) {
    const StbcCode code = make_alamouti();
    const Constellation c = make_constellation("qam16");
    for (auto _ : state) benchmark::DoNotOptimize(check_full_rank_code(code, c));
}
BENCHMARK(BM_FullRankAlamoutiQam16)->Unit(benchmark::kMillisecond);

void BM_CommutatorWitness(benchmark::State& state) {
    Rng rng(4);
    const CMatrix p = haar_unitary(rng, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(construct_commutator_witness(p, rng));
}
BENCHMARK(BM_CommutatorWitness)->DenseRange(2, 6);

} // namespace
