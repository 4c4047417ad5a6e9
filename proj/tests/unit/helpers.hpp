#pragma once

#include <vector>

#include "xnet/constellation.hpp"
#include "xnet/decoder.hpp"
#include "xnet/stbc.hpp"
#include "xnet/xnetwork.hpp"

namespace xnet::testing {

inline std::vector<int> random_indices(Rng& rng, int k, std::size_t q) {
    std::vector<int> out(static_cast<std::size_t>(k));
    for (auto& i : out) i = static_cast<int>(rng() % q);
    return out;
}

inline CVector to_symbols(const Constellation& c, const std::vector<int>& idx) {
    CVector x(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) x(static_cast<Eigen::Index>(i)) = c.points[idx[i]];
    return x;
}

/// Full link for one channel draw: the four transmitted index vectors and
/// the effective systems seen by both receivers.
struct Link {
    ChannelRealization ch;
    PrecoderSet pre;
    std::vector<int> i11, i12, i21, i22;
    CVector x11, x12, x21, x22;
    TransmitSignals tx;
    ReceivedSignals rx;
    CMatrix y1p, y2p;
    RealEffectiveSystem sys1, sys2;
};

inline Link make_link(const StbcCode& code, const Constellation& c, double snr_db, Rng& rng, bool noise) {
    Link l;
    const Snr snr = Snr::from_db(snr_db);
    l.ch = draw_channel(rng, code.m);
    l.pre = lij_precoders(l.ch);
    l.i11 = random_indices(rng, code.k, c.size());
    l.i12 = random_indices(rng, code.k, c.size());
    l.i21 = random_indices(rng, code.k, c.size());
    l.i22 = random_indices(rng, code.k, c.size());
    l.x11 = to_symbols(c, l.i11);
    l.x12 = to_symbols(c, l.i12);
    l.x21 = to_symbols(c, l.i21);
    l.x22 = to_symbols(c, l.i22);
    l.tx = assemble_transmit(code, l.x11, l.x12, l.x21, l.x22, l.pre, snr);
    l.rx = receive(l.ch, l.tx, rng, noise);
    l.y1p = cancel_interference(l.rx.y1, *code.cc, Receiver::Rx1);
    l.y2p = cancel_interference(l.rx.y2, *code.cc, Receiver::Rx2);
    const auto [a1, b1] = desired_channels(l.ch, l.pre, Receiver::Rx1);
    const auto [a2, b2] = desired_channels(l.ch, l.pre, Receiver::Rx2);
    l.sys1 = build_effective_real_system(code, a1, b1, l.y1p, snr, Receiver::Rx1);
    l.sys2 = build_effective_real_system(code, a2, b2, l.y2p, snr, Receiver::Rx2);
    return l;
}

} // namespace xnet::testing
