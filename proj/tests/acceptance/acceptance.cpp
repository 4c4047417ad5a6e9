// Acceptance driver: one PASS/FAIL line per criterion.
// Usage: xnet_acceptance [criterion numbers...]   (default: 1-7 and 9)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "../unit/helpers.hpp"
#include "xnet/decoder.hpp"
#include "xnet/sim.hpp"
#include "xnet/verify.hpp"
#include "xnet/xnetwork.hpp"

using namespace xnet;
using xnet::testing::make_link;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

CMatrix forced_multiplicity(Rng& rng, int m, int mult) {
    CMatrix d = CMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) d(i, i) = i < mult ? cplx(1.0) : std::polar(1.0, 0.5 + 0.9 * i);
    const CMatrix u = haar_unitary(rng, m);
    return u * d * u.adjoint();
}

int hardware_workers() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

Outcome cc_suite() {
    std::ostringstream out;
    bool pass = true;
    double worst = 0.0;
    for (const StbcCode& c : {make_alamouti(), make_srinath_rajan(std::numbers::pi / 4), make_lowdelay_m3(std::numbers::pi / 4),
                              make_code("perfect3-replicated")}) {
        const CcReport r = check_cc(c);
        pass = pass && r.pass && r.max_residual <= 1e-10;
        worst = std::max(worst, r.max_residual);
    }
    StbcCode broken = make_alamouti();
    broken.cc->f_list[0] = GsFunction{CMatrix::Identity(2, 2), false};
    const CcReport b = check_cc(broken);
    pass = pass && !b.pass;
    out << "max_residual=" << worst << " broken_alamouti_residual=" << b.max_residual;
    return {pass, out.str()};
}

Outcome full_rank_lowdelay() {
    const Constellation c = make_constellation("qpsk-rot");
    const FullRankReport r = check_full_rank_code(make_lowdelay_m3(std::numbers::pi / 4), c, kDefaultCodebookCap, 1);
    const std::uint64_t expected = saturating_pow(r.difference_alphabet, 6) - 1;
    std::ostringstream out;
    out << "phi=" << c.rotation_applied << " alphabet=" << r.difference_alphabet << " tuples=" << r.tuples_checked
        << " min_rank=" << r.min_rank_found;
    return {r.pass && r.tuples_checked == expected && std::abs(c.rotation_applied - std::atan(2.0) / 2) < 1e-12, out.str()};
}

Outcome lemma_equivalence() {
    Rng rng(0xacce0003);
    int disagreements = 0, witness_failures = 0, feasible = 0, forced = 0;
    for (int m = 2; m <= 6; ++m) {
        for (int t = 0; t < 100; ++t) {
            CMatrix p;
            if (t % 2 == 0) {
                p = haar_unitary(rng, m);
            } else {
                const int excess = (t / 2) % (m - m / 2);
                p = forced_multiplicity(rng, m, m / 2 + 1 + excess);
                ++forced;
            }
            const bool ok = eig_multiplicity_ok(p);
            if ((commutator_max_rank(p, 8, rng) == m) != ok) ++disagreements;
            if (ok) {
                ++feasible;
                const CMatrix a = construct_commutator_witness(p, rng);
                if (numeric_rank(CMatrix(a * p - p * a)) != m) ++witness_failures;
            }
        }
    }
    std::ostringstream out;
    out << "instances=500 forced=" << forced << " disagreements=" << disagreements << " feasible=" << feasible
        << " witness_failures=" << witness_failures;
    return {disagreements == 0 && witness_failures == 0 && forced == 250, out.str()};
}

Outcome rank_statistics() {
    Rng rng(0xacce0004);
    const HeqRankReport ld = heq_rank_stats(make_lowdelay_m3(), 1000, rng);
    const HeqRankReport pr = heq_rank_stats(make_code("perfect3-replicated"), 1000, rng);
    const HeqRankReport id = heq_rank_stats(make_replicated(make_perfect3(), CMatrix::Identity(3, 3), false), 100, rng);
    std::ostringstream out;
    out << "lowdelay3=" << ld.full_rank_fraction << " perfect3-replicated=" << pr.full_rank_fraction
        << " identity-replicated=" << id.full_rank_fraction << " (min rank " << id.min_rank << "/" << id.full_rank << ")";
    return {ld.full_rank_fraction == 1.0 && pr.full_rank_fraction == 1.0 && id.full_rank_fraction < 1.0, out.str()};
}

Outcome decoder_equivalence() {
    int mismatches = 0;
    double worst_metric = 0.0;
    auto compare = [&](const RealEffectiveSystem& sys, const Constellation& c) {
        const DecodeResult a = ml_exhaustive(sys, c);
        const DecodeResult b = sphere_decode(sys, c);
        if (a.x11_hat != b.x11_hat || a.x21_hat != b.x21_hat) ++mismatches;
        worst_metric = std::max(worst_metric, std::abs(a.metric - b.metric));
    };
    Rng rng(0xacce0005);
    const StbcCode ala = make_alamouti();
    const Constellation bpsk = make_constellation("bpsk");
    for (int t = 0; t < 1000; ++t) compare(make_link(ala, bpsk, 20.0 * (t % 11) / 10.0, rng, true).sys1, bpsk);
    const StbcCode ld = make_lowdelay_m3();
    const Constellation qr = make_constellation("qpsk-rot");
    for (int t = 0; t < 200; ++t) compare(make_link(ld, qr, 10.0, rng, true).sys1, qr);
    std::ostringstream out;
    out << "instances=1200 index_mismatches=" << mismatches << " max_metric_diff=" << worst_metric;
    return {mismatches == 0 && worst_metric <= 1e-9, out.str()};
}

Outcome cancellation_residual() {
    Rng rng(0xacce0006);
    double worst_cancel = 0.0, worst_recon = 0.0;
    for (const StbcCode& c : {make_alamouti(), make_srinath_rajan(), make_lowdelay_m3(), make_code("perfect3-replicated"),
                              make_code("threaded2-replicated")}) {
        const Constellation q = make_constellation(c.m == 3 ? "qpsk-rot" : "qpsk");
        const double s = std::sqrt(3.0 * Snr::from_db(12).rho() / 4.0) * energy_scale(c);
        for (int t = 0; t < 100; ++t) {
            const auto l = make_link(c, q, 12.0, rng, false);
            const CMatrix want1 = s * (l.ch.h11 * l.pre.v11 * permute_columns(c, encode(c, l.x11)) +
                                       l.ch.h21 * l.pre.v21 * permute_columns(c, encode(c, l.x21)));
            const CMatrix want2 = s * (l.ch.h12 * l.pre.v12 * permute_columns(c, encode(c, l.x12)) +
                                       l.ch.h22 * l.pre.v22 * permute_columns(c, encode(c, l.x22)));
            worst_cancel = std::max({worst_cancel, (l.y1p - want1).norm() / l.y1p.norm(),
                                     (l.y2p - want2).norm() / l.y2p.norm()});
            RVector x1(4 * c.k), x2(4 * c.k);
            x1 << tilde_vec(l.x11), tilde_vec(l.x21);
            x2 << tilde_vec(l.x12), tilde_vec(l.x22);
            worst_recon = std::max({worst_recon, (l.sys1.h_eff * x1 - l.sys1.y_eff).norm() / l.sys1.y_eff.norm(),
                                    (l.sys2.h_eff * x2 - l.sys2.y_eff).norm() / l.sys2.y_eff.norm()});
        }
    }
    std::ostringstream out;
    out << "schemes=5 instances=100 max_cancel_residual=" << worst_cancel << " max_reconstruction_residual=" << worst_recon;
    return {worst_cancel <= 1e-9 && worst_recon <= 1e-9, out.str()};
}

Outcome determinant_identity() {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double theta = 2.0 * std::numbers::pi * i / 100.0;
        const cplx e = std::polar(1.0, theta);
        const cplx closed = std::polar(1.0, -3.0 * theta) * (2.0 + std::conj(e)) * (2.0 + e);
        worst = std::max(worst, std::abs(witness_channel_determinant(theta) - closed));
    }
    std::ostringstream out;
    out << "thetas=100 max_abs_error=" << worst;
    return {worst <= 1e-9, out.str()};
}

// Low-delay grid; the fit uses the points in its top 10 dB.
const std::vector<double> kLowDelayGrid = {18, 20, 22, 24, 26, 28};

std::size_t top_decade(const std::vector<BerPoint>& points) {
    std::size_t n = 0;
    for (const BerPoint& p : points) n += p.snr_db >= points.back().snr_db - 10.0;
    return n;
}

SweepResult sweep(const std::string& scheme, int m, const std::string& constellation, std::vector<double> snr) {
    SimConfig cfg;
    cfg.scheme = scheme;
    cfg.m = m;
    cfg.constellation = constellation;
    cfg.snr_db_list = std::move(snr);
    cfg.min_codeword_errors = 200;
    cfg.max_trials_per_point = 100'000'000;
    cfg.seed = 2024;
    cfg.workers = hardware_workers();
    SweepResult r = run_sweep(cfg);
    write_csv(r, "acceptance_" + scheme + ".csv");
    return r;
}

Outcome diversity_slope() {
    const SweepResult ala = sweep("alamouti", 2, "bpsk", {14, 16, 18, 20, 22, 24});
    const double s2 = estimate_diversity_slope(ala.points, ala.points.size());
    const SweepResult ld = sweep("lowdelay3", 3, "qpsk-rot", kLowDelayGrid);
    const double s3 = estimate_diversity_slope(ld.points, top_decade(ld.points));
    bool errors_ok = true;
    for (const auto* r : {&ala, &ld})
        for (const BerPoint& p : r->points) errors_ok = errors_ok && p.codeword_errors >= 200;
    std::ostringstream out;
    out << "alamouti_slope=" << s2 << " lowdelay3_top_decade_slope=" << s3;
    return {s2 >= 2.5 && s3 >= 3.5 && errors_ok, out.str()};
}

Outcome determinism() {
    SimConfig cfg;
    cfg.scheme = "lowdelay3";
    cfg.m = 3;
    cfg.constellation = "qpsk-rot";
    cfg.snr_db_list = {6, 10, 14};
    cfg.min_codeword_errors = 100;
    cfg.max_trials_per_point = 5000;
    cfg.seed = 99;
    cfg.workers = 1;
    const std::string one = format_csv(run_sweep(cfg));
    cfg.workers = 8;
    const std::string eight = format_csv(run_sweep(cfg));
    std::ostringstream out;
    out << "csv_bytes=" << one.size() << " identical=" << (one == eight ? "yes" : "no");
    return {one == eight, out.str()};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {1, "column-cancellation property", cc_suite},
        {2, "full-rank brute force, low-delay M=3 rotated QPSK", full_rank_lowdelay},
        {3, "commutator rank vs eigenvalue multiplicity", lemma_equivalence},
        {4, "effective-system rank statistics", rank_statistics},
        {5, "sphere decoder matches exhaustive ML", decoder_equivalence},
        {6, "interference cancellation and reconstruction", cancellation_residual},
        {7, "witness channel determinant identity", determinant_identity},
        {8, "diversity slope of simulated sweeps", diversity_slope},
        {9, "sweep determinism across worker counts", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));
    if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 9};

    int failures = 0;
    for (const Criterion& c : all) {
        if (!selected.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::printf("%s criterion %d: %s | %s | %.1f s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
