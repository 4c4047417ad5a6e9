#pragma once

#include <cstdint>
#include <vector>

#include "xnet/constellation.hpp"
#include "xnet/stbc.hpp"
#include "xnet/xnetwork.hpp"

namespace xnet {

/// Jointly decoded pair at one receiver. Indices are constellation bit labels.
struct DecodeResult {
    std::vector<int> x11_hat; // first desired codeword (x11 at Rx-1, x12 at Rx-2)
    std::vector<int> x21_hat; // second desired codeword (x21 at Rx-1, x22 at Rx-2)
    double metric = 0.0;      // squared whitened residual
    std::uint64_t nodes_visited = 0;
};

/// Brute force over all |c|^(2k) candidate pairs. Ties go to the
/// lexicographically smallest index sequence (x11 first, last symbol fastest).
DecodeResult ml_exhaustive(const RealEffectiveSystem& sys, const Constellation& c,
                           std::uint64_t cap = kDefaultCodebookCap);

/// Depth-first Schnorr-Euchner search, one complex symbol per tree level.
/// Throws RankDeficient when the whitened system loses column rank.
DecodeResult sphere_decode(const RealEffectiveSystem& sys, const Constellation& c);

/// ||whiten(y) - whiten(H) tilde(x)||^2 for the candidate pair.
double decode_metric(const RealEffectiveSystem& sys, const Constellation& c, const std::vector<int>& xa,
                     const std::vector<int>& xb);

struct ErrorCount {
    std::uint64_t bit_errors = 0;
    std::uint64_t symbol_errors = 0;
    bool codeword_error = false;
};

/// Hamming distance between bit labels of the transmitted and decoded pair.
ErrorCount count_errors(const std::vector<int>& truth_a, const std::vector<int>& truth_b,
                        const DecodeResult& decoded, const Constellation& c);

} // namespace xnet
