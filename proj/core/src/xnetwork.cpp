#include "xnet/xnetwork.hpp"

#include <cmath>

namespace xnet {

Snr Snr::from_db(double db) { return {std::pow(10.0, db / 10.0), db}; }

Snr Snr::from_linear(double rho) {
    if (!(rho > 0.0)) throw DimensionMismatch("SNR must be positive");
    return {rho, 10.0 * std::log10(rho)};
}

WhitenedSystem whiten(const RealEffectiveSystem& sys) {
    const RVector inv_sigma = sys.noise_sigma_per_row.cwiseInverse();
    return {inv_sigma.asDiagonal() * sys.h_eff, sys.y_eff.cwiseProduct(inv_sigma)};
}

ChannelRealization draw_channel(Rng& rng, int m) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        ChannelRealization ch{complex_normal_matrix(rng, m, m), complex_normal_matrix(rng, m, m),
                              complex_normal_matrix(rng, m, m), complex_normal_matrix(rng, m, m)};
        try {
            for (const CMatrix* h : {&ch.h11, &ch.h12, &ch.h21, &ch.h22}) (void)invert(*h);
            return ch;
        } catch (const SingularMatrix&) {
            continue;
        }
    }
    throw RngPathology("100 consecutive singular channel draws");
}

PrecoderSet lij_precoders(const ChannelRealization& ch) {
    auto normalized_inverse = [](const CMatrix& h) {
        const CMatrix inv = invert(h);
        return CMatrix(inv / fro_norm(inv));
    };
    return {normalized_inverse(ch.h12), normalized_inverse(ch.h11), normalized_inverse(ch.h22),
            normalized_inverse(ch.h21)};
}

TransmitSignals assemble_transmit(const StbcCode& code, const CVector& x11, const CVector& x12,
                                  const CVector& x21, const CVector& x22, const PrecoderSet& pre,
                                  Snr snr) {
    if (!code.cc) throw MissingCcSpec(code.name + " has no column-cancellation spec");
    const int m = code.m;
    const int t = code.cc->t_half;
    const double gain = std::sqrt(3.0 * snr.rho() / 4.0) * energy_scale(code);

    auto codeword = [&](const CVector& x) { return CMatrix(gain * permute_columns(code, encode(code, x))); };
    auto first = [&](const CVector& x) {
        CMatrix out = CMatrix::Zero(m, 3 * t);
        out.leftCols(2 * t) = codeword(x);
        return out;
    };
    auto second = [&](const CVector& x) {
        CMatrix out = CMatrix::Zero(m, 3 * t);
        out.rightCols(2 * t) = codeword(x);
        return out;
    };
    return {pre.v11 * first(x11) + pre.v12 * second(x12), pre.v21 * first(x21) + pre.v22 * second(x22)};
}

ReceivedSignals receive(const ChannelRealization& ch, const TransmitSignals& tx, Rng& rng, bool noise_on) {
    ReceivedSignals rx{ch.h11 * tx.x1 + ch.h21 * tx.x2, ch.h12 * tx.x1 + ch.h22 * tx.x2};
    if (noise_on) {
        rx.y1 += complex_normal_matrix(rng, rx.y1.rows(), rx.y1.cols());
        rx.y2 += complex_normal_matrix(rng, rx.y2.rows(), rx.y2.cols());
    }
    return rx;
}

CMatrix cancel_interference(const CMatrix& y, const CcSpec& cc, Receiver rx) {
    const int t = cc.t_half;
    if (y.cols() != 3 * t)
        throw DimensionMismatch("received block has " + std::to_string(y.cols()) + " columns, expected " +
                                std::to_string(3 * t));
    CMatrix out(y.rows(), 2 * t);
    if (rx == Receiver::Rx1) {
        out.leftCols(t) = y.leftCols(t);
        for (int i = 0; i < t; ++i)
            out.col(t + i) = y.col(t + i) + cc.f_list[static_cast<std::size_t>(i)](y.col(2 * t + i));
    } else {
        for (int i = 0; i < t; ++i)
            out.col(i) = y.col(t + i) + cc.g_list[static_cast<std::size_t>(i)](y.col(i));
        out.rightCols(t) = y.rightCols(t);
    }
    return out;
}

std::pair<CMatrix, CMatrix> desired_channels(const ChannelRealization& ch, const PrecoderSet& pre,
                                             Receiver rx) {
    if (rx == Receiver::Rx1) return {ch.h11 * pre.v11, ch.h21 * pre.v21};
    return {ch.h12 * pre.v12, ch.h22 * pre.v22};
}

RealEffectiveSystem build_effective_real_system(const StbcCode& code, const CMatrix& hbar_a,
                                                const CMatrix& hbar_b, const CMatrix& y_prime, Snr snr,
                                                Receiver rx) {
    const int m = code.m;
    const int cols = code.t_block;
    if (cols % 2 != 0) throw DimensionMismatch("block length must be even");
    if (hbar_a.rows() != m || hbar_a.cols() != m || hbar_b.rows() != m || hbar_b.cols() != m)
        throw DimensionMismatch("effective channels must be " + std::to_string(m) + "x" + std::to_string(m));
    if (y_prime.rows() != m || y_prime.cols() != cols)
        throw DimensionMismatch("processed block must be " + std::to_string(m) + "x" + std::to_string(cols));

    const double gain = std::sqrt(3.0 * snr.rho() / 4.0) * energy_scale(code);
    const RMatrix g = gain * transmit_generator(code);
    const RMatrix eye = RMatrix::Identity(cols, cols);

    RealEffectiveSystem sys;
    sys.symbols_per_codeword = code.k;
    sys.h_eff.resize(g.rows(), 2 * g.cols());
    sys.h_eff.leftCols(g.cols()) = kron(eye, realify(hbar_a)) * g;
    sys.h_eff.rightCols(g.cols()) = kron(eye, realify(hbar_b)) * g;
    sys.y_eff = tilde_vec(vec(y_prime));

    // Rx-1 sees doubled noise on its last T columns, Rx-2 on its first T.
    const int half = cols / 2;
    const int rows_per_col = 2 * m;
    sys.noise_sigma_per_row.resize(g.rows());
    for (int c = 0; c < cols; ++c) {
        const bool doubled = (rx == Receiver::Rx1) ? c >= half : c < half;
        sys.noise_sigma_per_row.segment(c * rows_per_col, rows_per_col)
            .setConstant(doubled ? std::sqrt(2.0) : 1.0);
    }
    return sys;
}

std::pair<CMatrix, CMatrix> lowdelay_conjugate_maps(double theta) {
    const cplx e = std::polar(1.0, theta);
    CMatrix p1(3, 3), p2(3, 3);
    p1 << 0, -1, 0, 1, 0, 0, 0, 0, -e * e;
    p2 << 0, 0, -e, e * e, 0, 0, 0, -e, 0;
    return {p1, p2};
}

cplx witness_channel_determinant(double theta) {
    const auto [p1, p2] = lowdelay_conjugate_maps(theta);
    CMatrix h2 = CMatrix::Zero(3, 3);
    h2(0, 2) = -std::polar(1.0, -2.0 * theta);
    h2(1, 1) = 2.0;
    h2(2, 0) = 1.0;
    const CMatrix lhs = (h2 * p2).conjugate() - p1.conjugate() * h2;
    return lhs.determinant();
}

cplx witness_channel_determinant_closed_form(double theta) {
    return std::polar(1.0, -3.0 * theta) * (2.0 + std::polar(1.0, -theta)) * (2.0 + std::polar(1.0, theta));
}

} // namespace xnet
