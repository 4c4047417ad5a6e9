#pragma once

#include <cstdint>

namespace xnet {

/// Jointly decoded codeword pairs per trial (one at each receiver).
constexpr std::uint64_t kCodewordPairsPerTrial = 2;

/// Error counters for one SNR point.
struct BerPoint {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t bits_sent = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t codeword_errors = 0;

    double ber() const noexcept {
        return bits_sent == 0 ? 0.0 : static_cast<double>(bit_errors) / static_cast<double>(bits_sent);
    }
    double cwer() const noexcept {
        return trials == 0 ? 0.0
                           : static_cast<double>(codeword_errors) /
                                 static_cast<double>(kCodewordPairsPerTrial * trials);
    }
    bool operator==(const BerPoint&) const = default;
};

} // namespace xnet
