#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "xnet/numerics.hpp"

namespace xnet {

/// Bit labelling convention recorded alongside results.
enum class Labeling { Gray, RowMajor };

/// Finite unit-average-energy alphabet. The bit label of points[i] is i, so
/// mapping is indexing and demapping returns the index of the nearest point.
struct Constellation {
    std::vector<cplx> points;
    int bits_per_symbol = 0;
    std::string label;
    double rotation_applied = 0.0;
    Labeling labeling = Labeling::Gray;

    std::size_t size() const noexcept { return points.size(); }
    cplx map(std::size_t bits) const { return points.at(bits); }
    /// Index (= bit label) of the nearest point; ties go to the lower index.
    std::size_t demap(cplx y) const;
    double average_energy() const;
};

/// Square QAM with per-axis Gray labels; m in {4, 16, 64}.
Constellation make_qam(int m);
/// Gray-labelled PSK; m in {2, 4, 8}. QPSK sits at odd multiples of pi/4.
Constellation make_psk(int m);
/// {a + w b : a, b in sqrt(m)-PAM}, w = exp(2 pi i / 3), row-major labels; m in {4, 16, 64}.
Constellation make_hex(int m);

Constellation rotate(const Constellation& c, double phi);

/// Coordinate product distance: min over distinct pairs of |du_I| |du_Q|.
double cpd(const Constellation& c);

/// The rotation angle atan(2)/2 that gives QPSK a nonzero CPD.
double qpsk_cpd_rotation();

/// Resolve a CLI name: bpsk, qpsk, qpsk-rot, psk8, qam4, qam16, qam64, hex4, hex16, hex64.
Constellation make_constellation(std::string_view name);

std::string to_string(Labeling labeling);

} // namespace xnet
