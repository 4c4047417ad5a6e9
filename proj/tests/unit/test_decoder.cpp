#include <gtest/gtest.h>

#include <limits>

#include "helpers.hpp"
#include "xnet/decoder.hpp"

using namespace xnet;
using xnet::testing::make_link;

namespace {

// Second, independent brute force: nested loops over both codebooks with the
// metric evaluated on complex matrices instead of the real system.
std::pair<std::vector<int>, std::vector<int>> brute_force(const StbcCode& code, const Constellation& c,
                                                          const CMatrix& ha, const CMatrix& hb, const CMatrix& y,
                                                          const RVector& sigma, double snr_db) {
    const double s = std::sqrt(3.0 * Snr::from_db(snr_db).rho() / 4.0) * energy_scale(code);
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::vector<int>, std::vector<int>> arg;
    CodebookEnumerator a(code, c);
    while (a.next()) {
        const CMatrix pa = s * ha * permute_columns(code, a.codeword());
        CodebookEnumerator b(code, c);
        while (b.next()) {
            const CMatrix r = y - pa - s * hb * permute_columns(code, b.codeword());
            double metric = 0.0;
            for (Eigen::Index col = 0; col < r.cols(); ++col)
                metric += r.col(col).squaredNorm() / (sigma(col * 2 * code.m) * sigma(col * 2 * code.m));
            if (metric < best) {
                best = metric;
                arg = {a.indices(), b.indices()};
            }
        }
    }
    return arg;
}

TEST(MlExhaustive, NoiselessRecoversIndices) {
    Rng rng(1);
    const StbcCode code = make_alamouti();
    const Constellation c = make_constellation("qpsk");
    for (int t = 0; t < 50; ++t) {
        const auto l = make_link(code, c, 10.0, rng, false);
        const DecodeResult d = ml_exhaustive(l.sys1, c);
        EXPECT_EQ(d.x11_hat, l.i11);
        EXPECT_EQ(d.x21_hat, l.i21);
        EXPECT_LE(d.metric, 1e-15 * (1.0 + l.sys1.y_eff.squaredNorm()));
        EXPECT_EQ(d.nodes_visited, 256u);
    }
}

TEST(MlExhaustive, AgreesWithIndependentBruteForce) {
    Rng rng(2);
    const StbcCode code = make_alamouti();
    const Constellation c = make_constellation("bpsk");
    for (int t = 0; t < 1000; ++t) {
        const auto l = make_link(code, c, 20.0, rng, true);
        const auto [ha, hb] = desired_channels(l.ch, l.pre, Receiver::Rx1);
        const auto expect = brute_force(code, c, ha, hb, l.y1p, l.sys1.noise_sigma_per_row, 20.0);
        const DecodeResult d = ml_exhaustive(l.sys1, c);
        ASSERT_EQ(d.x11_hat, expect.first) << t;
        ASSERT_EQ(d.x21_hat, expect.second) << t;
    }
}

TEST(MlExhaustive, MetricMatchesDefinition) {
    Rng rng(3);
    const StbcCode code = make_alamouti();
    const Constellation c = make_constellation("qpsk");
    const auto l = make_link(code, c, 5.0, rng, true);
    const DecodeResult d = ml_exhaustive(l.sys1, c);
    RVector x(8);
    x << tilde_vec(xnet::testing::to_symbols(c, d.x11_hat)), tilde_vec(xnet::testing::to_symbols(c, d.x21_hat));
    const RVector inv = l.sys1.noise_sigma_per_row.cwiseInverse();
    const double expect = (inv.asDiagonal() * (l.sys1.y_eff - l.sys1.h_eff * x)).squaredNorm();
    EXPECT_NEAR(d.metric, expect, 1e-12 * (1.0 + expect));
}

TEST(MlExhaustive, CapEnforced) {
    Rng rng(4);
    const auto l = make_link(make_alamouti(), make_constellation("qam16"), 10.0, rng, true);
    EXPECT_THROW(ml_exhaustive(l.sys1, make_constellation("qam16"), 1000), CodebookTooLarge);
    const auto p = make_link(make_code("perfect3-replicated"), make_constellation("hex4"), 10.0, rng, true);
    EXPECT_THROW(ml_exhaustive(p.sys1, make_constellation("hex4")), CodebookTooLarge);
}

TEST(MlExhaustive, TieBreakIsLexicographic) {
    // All-zero channel: every candidate has the same metric.
    RealEffectiveSystem sys;
    sys.symbols_per_codeword = 1;
    sys.h_eff = RMatrix::Zero(4, 4);
    sys.y_eff = RVector::Ones(4);
    sys.noise_sigma_per_row = RVector::Ones(4);
    const DecodeResult d = ml_exhaustive(sys, make_constellation("qpsk"));
    EXPECT_EQ(d.x11_hat, std::vector<int>{0});
    EXPECT_EQ(d.x21_hat, std::vector<int>{0});
}

TEST(SphereDecode, AgreesWithExhaustiveAlamouti) {
    Rng rng(5);
    const StbcCode code = make_alamouti();
    const Constellation c = make_constellation("bpsk");
    for (int t = 0; t < 1000; ++t) {
        const double snr = 20.0 * (t % 11) / 10.0;
        const auto l = make_link(code, c, snr, rng, true);
        for (const auto* sys : {&l.sys1, &l.sys2}) {
            const DecodeResult a = ml_exhaustive(*sys, c);
            const DecodeResult b = sphere_decode(*sys, c);
            ASSERT_EQ(a.x11_hat, b.x11_hat);
            ASSERT_EQ(a.x21_hat, b.x21_hat);
            ASSERT_NEAR(a.metric, b.metric, 1e-9);
        }
    }
}

TEST(SphereDecode, AgreesWithExhaustiveAcrossCodes) {
    Rng rng(6);
    struct Case {
        StbcCode code;
        const char* constellation;
    };
    for (const Case& cs : {Case{make_alamouti(), "qam16"}, Case{make_alamouti(), "hex16"},
                           Case{make_code("threaded2-replicated"), "bpsk"}, Case{make_srinath_rajan(), "bpsk"}}) {
        const Constellation c = make_constellation(cs.constellation);
        for (int t = 0; t < 20; ++t) {
            const auto l = make_link(cs.code, c, 8.0, rng, true);
            const DecodeResult a = ml_exhaustive(l.sys2, c);
            const DecodeResult b = sphere_decode(l.sys2, c);
            ASSERT_EQ(a.x11_hat, b.x11_hat) << cs.code.name;
            ASSERT_EQ(a.x21_hat, b.x21_hat) << cs.code.name;
            ASSERT_NEAR(a.metric, b.metric, 1e-9);
        }
    }
}

TEST(SphereDecode, AgreesWithExhaustiveLowDelaySample) {
    Rng rng(7);
    const StbcCode code = make_lowdelay_m3();
    const Constellation c = make_constellation("qpsk-rot");
    for (int t = 0; t < 5; ++t) {
        const auto l = make_link(code, c, 10.0, rng, true);
        const DecodeResult a = ml_exhaustive(l.sys1, c);
        const DecodeResult b = sphere_decode(l.sys1, c);
        ASSERT_EQ(a.x11_hat, b.x11_hat);
        ASSERT_EQ(a.x21_hat, b.x21_hat);
        ASSERT_NEAR(a.metric, b.metric, 1e-9);
    }
}

TEST(SphereDecode, NoiselessRecoversIndices) {
    Rng rng(8);
    const StbcCode code = make_code("perfect3-replicated");
    const Constellation c = make_constellation("hex4");
    for (int t = 0; t < 20; ++t) {
        const auto l = make_link(code, c, 15.0, rng, false);
        const DecodeResult d = sphere_decode(l.sys2, c);
        EXPECT_EQ(d.x11_hat, l.i12);
        EXPECT_EQ(d.x21_hat, l.i22);
        EXPECT_GE(d.nodes_visited, static_cast<std::uint64_t>(l.sys2.unknowns()));
        EXPECT_LE(d.metric, 1e-15 * (1.0 + l.sys2.y_eff.squaredNorm()));
    }
}

TEST(SphereDecode, RankDeficientThrows) {
    RealEffectiveSystem sys;
    sys.symbols_per_codeword = 1;
    sys.h_eff = RMatrix::Identity(4, 4);
    sys.h_eff.col(3) = sys.h_eff.col(0);
    sys.y_eff = RVector::Ones(4);
    sys.noise_sigma_per_row = RVector::Ones(4);
    EXPECT_THROW(sphere_decode(sys, make_constellation("qpsk")), RankDeficient);
}

TEST(SphereDecode, ScaleInvariance) {
    Rng rng(9);
    const StbcCode code = make_lowdelay_m3();
    const Constellation c = make_constellation("qpsk-rot");
    for (int t = 0; t < 30; ++t) {
        auto l = make_link(code, c, 6.0, rng, true);
        const DecodeResult a = sphere_decode(l.sys1, c);
        l.sys1.h_eff *= 3.7;
        l.sys1.y_eff *= 3.7;
        const DecodeResult b = sphere_decode(l.sys1, c);
        ASSERT_EQ(a.x11_hat, b.x11_hat);
        ASSERT_EQ(a.x21_hat, b.x21_hat);
    }
}

TEST(SphereDecode, NodesShrinkWithSnr) {
    const StbcCode code = make_lowdelay_m3();
    const Constellation c = make_constellation("qpsk-rot");
    std::vector<double> mean_nodes;
    for (double snr : {0.0, 10.0, 20.0}) {
        Rng rng(10);
        double nodes = 0.0;
        for (int t = 0; t < 100; ++t) nodes += sphere_decode(make_link(code, c, snr, rng, true).sys1, c).nodes_visited;
        mean_nodes.push_back(nodes / 100.0);
    }
    EXPECT_GE(mean_nodes[0], mean_nodes[1]);
    EXPECT_GE(mean_nodes[1], mean_nodes[2]);
}

TEST(CountErrors, Examples) {
    const Constellation q = make_constellation("qpsk");
    DecodeResult d{{0, 1}, {2, 3}, 0.0, 0};
    ErrorCount e = count_errors({0, 1}, {2, 3}, d, q);
    EXPECT_EQ(e.bit_errors, 0u);
    EXPECT_EQ(e.symbol_errors, 0u);
    EXPECT_FALSE(e.codeword_error);

    // Gray neighbours differ in one bit.
    d.x11_hat = {1, 1};
    e = count_errors({0, 1}, {2, 3}, d, q);
    EXPECT_EQ(e.bit_errors, 1u);
    EXPECT_EQ(e.symbol_errors, 1u);
    EXPECT_TRUE(e.codeword_error);

    // Complemented labels: every bit of every symbol is wrong.
    const Constellation q16 = make_constellation("qam16");
    DecodeResult all{{15, 15, 15}, {15, 15, 15}, 0.0, 0};
    e = count_errors({0, 0, 0}, {0, 0, 0}, all, q16);
    EXPECT_EQ(e.bit_errors, 4u * 3u * 2u);
    EXPECT_EQ(e.symbol_errors, 6u);

    EXPECT_THROW(count_errors({0}, {0, 1}, d, q), DimensionMismatch);
}

} // namespace
