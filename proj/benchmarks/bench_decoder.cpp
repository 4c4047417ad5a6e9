#include <benchmark/benchmark.h>

#include "xnet/decoder.hpp"

namespace {

using namespace xnet;

RealEffectiveSystem random_system(const StbcCode& code, const Constellation& c, double snr_db, std::uint64_t seed) {
    Rng rng(seed);
    const ChannelRealization ch = draw_channel(rng, code.m);
    const PrecoderSet pre = lij_precoders(ch);
    std::vector<CVector> x;
    for (int j = 0; j < 4; ++j) {
        CVector v(code.k);
        for (int s = 0; s < code.k; ++s) v(s) = c.points[rng() % c.size()];
        x.push_back(v);
    }
    const Snr snr = Snr::from_db(snr_db);
    const ReceivedSignals rx = receive(ch, assemble_transmit(code, x[0], x[1], x[2], x[3], pre, snr), rng, true);
    const auto [ha, hb] = desired_channels(ch, pre, Receiver::Rx1);
    return build_effective_real_system(code, ha, hb, cancel_interference(rx.y1, *code.cc, Receiver::Rx1), snr);
}

void BM_SphereLowDelay(benchmark::State& state) {
    const StbcCode code = make_lowdelay_m3();
    const Constellation c = make_constellation("qpsk-rot");
    const RealEffectiveSystem sys = random_system(code, c, static_cast<double>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(sphere_decode(sys, c));
}
BENCHMARK(BM_SphereLowDelay)->Arg(5)->Arg(10)->Arg(20);

void BM_SphereAlamouti(benchmark::State& state) {
    const StbcCode code = make_alamouti();
    const Constellation c = make_constellation("bpsk");
    const RealEffectiveSystem sys = random_system(code, c, 10.0, 3);
    for (auto _ : state) benchmark::DoNotOptimize(sphere_decode(sys, c));
}
BENCHMARK(BM_SphereAlamouti);

void BM_ExhaustiveAlamoutiQpsk(benchmark::State& state) {
    const StbcCode code = make_alamouti();
    const Constellation c = make_constellation("qpsk");
    const RealEffectiveSystem sys = random_system(code, c, 10.0, 3);
    for (auto _ : state) benchmark::DoNotOptimize(ml_exhaustive(sys, c));
}
BENCHMARK(BM_ExhaustiveAlamoutiQpsk);

} // namespace
