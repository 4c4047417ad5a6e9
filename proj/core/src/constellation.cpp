#include "xnet/constellation.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>

namespace xnet {

namespace {

unsigned gray(unsigned k) { return k ^ (k >> 1); }

int log2_exact(int m) {
    int bits = 0;
    while ((1 << bits) < m) ++bits;
    return bits;
}

void normalize(Constellation& c) {
    const double scale = 1.0 / std::sqrt(c.average_energy());
    for (auto& p : c.points) p *= scale;
}

} // namespace

std::size_t Constellation::demap(cplx y) const {
    std::size_t best = 0;
    double best_d = std::norm(y - points.front());
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double d = std::norm(y - points[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

double Constellation::average_energy() const {
    double sum = 0.0;
    for (const auto& p : points) sum += std::norm(p);
    return sum / static_cast<double>(points.size());
}

Constellation make_qam(int m) {
    if (m != 4 && m != 16 && m != 64) throw UnsupportedSize("QAM size " + std::to_string(m));
    const int bits = log2_exact(m);
    const int half = bits / 2;
    const int side = 1 << half;

    Constellation c;
    c.points.resize(static_cast<std::size_t>(m));
    c.bits_per_symbol = bits;
    c.label = "qam" + std::to_string(m);
    c.labeling = Labeling::Gray;
    for (int i = 0; i < side; ++i) {
        for (int q = 0; q < side; ++q) {
            const unsigned label = (gray(static_cast<unsigned>(i)) << half) | gray(static_cast<unsigned>(q));
            c.points[label] = cplx(2.0 * i - (side - 1), 2.0 * q - (side - 1));
        }
    }
    normalize(c);
    return c;
}

Constellation make_psk(int m) {
    if (m != 2 && m != 4 && m != 8) throw UnsupportedSize("PSK size " + std::to_string(m));
    const double offset = (m == 4) ? std::numbers::pi / 4.0 : 0.0;

    Constellation c;
    c.points.resize(static_cast<std::size_t>(m));
    c.bits_per_symbol = log2_exact(m);
    c.label = (m == 2) ? "bpsk" : (m == 4) ? "qpsk" : "psk8";
    c.labeling = Labeling::Gray;
    for (int k = 0; k < m; ++k)
        c.points[gray(static_cast<unsigned>(k))] =
            std::polar(1.0, 2.0 * std::numbers::pi * k / m + offset);
    return c;
}

Constellation make_hex(int m) {
    if (m != 4 && m != 16 && m != 64) throw UnsupportedSize("HEX size " + std::to_string(m));
    const int side = static_cast<int>(std::lround(std::sqrt(m)));
    const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

    Constellation c;
    c.points.reserve(static_cast<std::size_t>(m));
    c.bits_per_symbol = log2_exact(m);
    c.label = "hex" + std::to_string(m);
    c.labeling = Labeling::RowMajor;
    for (int ia = 0; ia < side; ++ia) {
        for (int ib = 0; ib < side; ++ib) {
            const double a = 2.0 * ia - (side - 1);
            const double b = 2.0 * ib - (side - 1);
            c.points.push_back(a + omega * b);
        }
    }
    normalize(c);
    return c;
}

Constellation rotate(const Constellation& c, double phi) {
    Constellation out = c;
    const cplx r = std::polar(1.0, phi);
    for (auto& p : out.points) p *= r;
    out.rotation_applied += phi;
    return out;
}

double cpd(const Constellation& c) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        for (std::size_t j = 0; j < c.points.size(); ++j) {
            if (i == j) continue;
            const cplx d = c.points[i] - c.points[j];
            best = std::min(best, std::abs(d.real()) * std::abs(d.imag()));
        }
    }
    return best;
}

double qpsk_cpd_rotation() { return std::atan(2.0) / 2.0; }

Constellation make_constellation(std::string_view name) {
    if (name == "bpsk") return make_psk(2);
    if (name == "qpsk") return make_psk(4);
    if (name == "psk8") return make_psk(8);
    if (name == "qpsk-rot") {
        Constellation c = rotate(make_psk(4), qpsk_cpd_rotation());
        c.label = "qpsk-rot";
        return c;
    }
    if (name == "qam4") return make_qam(4);
    if (name == "qam16") return make_qam(16);
    if (name == "qam64") return make_qam(64);
    if (name == "hex4") return make_hex(4);
    if (name == "hex16") return make_hex(16);
    if (name == "hex64") return make_hex(64);
    throw UnknownName("constellation '" + std::string(name) + "'");
}

std::string to_string(Labeling labeling) {
    return labeling == Labeling::Gray ? "gray" : "row-major";
}

} // namespace xnet
