#pragma once

#include "xnet/numerics.hpp"
#include "xnet/stbc.hpp"

namespace xnet {

/// h_ij is the M x M channel from Tx-i to Rx-j; entries i.i.d. CN(0,1).
struct ChannelRealization {
    CMatrix h11, h12, h21, h22;
};

/// LiJ precoders v = inv(h) / ||inv(h)||_F, one per message W_ij.
struct PrecoderSet {
    CMatrix v11, v12, v21, v22;
};

/// Per-transmitter average power rho.
class Snr {
public:
    static Snr from_db(double db);
    static Snr from_linear(double rho);
    double rho() const noexcept { return rho_; }
    double db() const noexcept { return db_; }

private:
    Snr(double rho, double db) : rho_(rho), db_(db) {}
    double rho_;
    double db_;
};

enum class Receiver { Rx1 = 1, Rx2 = 2 };

struct TransmitSignals {
    CMatrix x1, x2; // M x 3T each
};

struct ReceivedSignals {
    CMatrix y1, y2; // M x 3T each
};

/// Square real system one receiver decodes:
///   y_eff = h_eff * [tilde(x_a); tilde(x_b)] + noise,
/// where row r carries real noise of standard deviation noise_sigma_per_row(r) / sqrt(2).
/// x_a occupies complex unknowns [0, k), x_b occupies [k, 2k).
struct RealEffectiveSystem {
    RMatrix h_eff;
    RVector y_eff;
    RVector noise_sigma_per_row; // entries 1 or sqrt(2)
    int symbols_per_codeword = 0;

    int unknowns() const noexcept { return 2 * symbols_per_codeword; }
};

/// Rows divided by their noise sigma.
struct WhitenedSystem {
    RMatrix h;
    RVector y;
};
WhitenedSystem whiten(const RealEffectiveSystem& sys);

/// Redraws (at most 100 times) while any of the four matrices is singular.
ChannelRealization draw_channel(Rng& rng, int m);

PrecoderSet lij_precoders(const ChannelRealization& ch);

/// x1 = sqrt(3 rho / 4) s (v11 [X11 0] + v12 [0 X12]) and likewise for x2, with
/// s = energy_scale(code) and X_ij the column-permuted codeword of x_ij.
TransmitSignals assemble_transmit(const StbcCode& code, const CVector& x11, const CVector& x12,
                                  const CVector& x21, const CVector& x22, const PrecoderSet& pre,
                                  Snr snr);

/// y_j = h_1j x1 + h_2j x2 (+ CN(0,1) noise when noise_on).
ReceivedSignals receive(const ChannelRealization& ch, const TransmitSignals& tx, Rng& rng, bool noise_on);

/// Removes the aligned interference using the column-cancellation functions.
/// Rx-1 keeps columns [0,T) and adds f_i(column 2T+i) to column T+i.
/// Rx-2 returns columns [T,3T) with g_i(column i) added to column T+i.
CMatrix cancel_interference(const CMatrix& y, const CcSpec& cc, Receiver rx);

/// Effective desired channels (h11 v11, h21 v21) at Rx-1 or (h12 v12, h22 v22) at Rx-2.
std::pair<CMatrix, CMatrix> desired_channels(const ChannelRealization& ch, const PrecoderSet& pre,
                                             Receiver rx);

/// h_eff = g [(I ⊗ realify(hbar_a)) G | (I ⊗ realify(hbar_b)) G] with G the
/// permuted generator and g = sqrt(3 rho / 4) energy_scale(code).
RealEffectiveSystem build_effective_real_system(const StbcCode& code, const CMatrix& hbar_a,
                                                const CMatrix& hbar_b, const CMatrix& y_prime, Snr snr,
                                                Receiver rx = Receiver::Rx1);

/// Low-delay M=3 code: conj(P1') and conj(P2') rebuild the conjugated last two
/// codeword columns from the first two, X(3) = P1' conj(X(1)), X(4) = P2' conj(X(2)).
std::pair<CMatrix, CMatrix> lowdelay_conjugate_maps(double theta);

/// det(conj(H2 P2') - conj(P1') H2) evaluated at the fixed witness channel
/// H2 = [[0, 0, -exp(-2i theta)], [0, 2, 0], [1, 0, 0]]. A nonzero value shows
/// the low-delay M=3 receiver system is not identically singular.
cplx witness_channel_determinant(double theta);

/// Closed form exp(-3i theta) (2 + exp(-i theta)) (2 + exp(i theta)).
cplx witness_channel_determinant_closed_form(double theta);

} // namespace xnet
