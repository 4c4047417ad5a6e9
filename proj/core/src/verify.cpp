#include "xnet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "xnet/xnetwork.hpp"

namespace xnet {

namespace {

constexpr double kCcPassResidual = 1e-10;
constexpr int kCcRandomVectors = 100;
constexpr std::uint64_t kCcSeed = 0x5eed'cc00ULL;
constexpr double kUnitaryCheckTolerance = 1e-8;
constexpr int kWitnessAttempts = 32;

double cc_residual(const StbcCode& code, const CVector& x) {
    const CcSpec& cc = *code.cc;
    const CMatrix xp = permute_columns(code, encode(code, x));
    double worst = 0.0;
    for (int i = 0; i < cc.t_half; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const CVector lhs_f = xp.col(i) + cc.f_list[s](xp.col(i + cc.t_half));
        const CVector lhs_g = cc.g_list[s](xp.col(i)) + xp.col(i + cc.t_half);
        worst = std::max({worst, lhs_f.norm(), lhs_g.norm()});
    }
    return worst;
}

void require_unitary(const CMatrix& p) {
    if (p.rows() != p.cols()) throw DimensionMismatch("P must be square");
    if (!is_unitary(p, kUnitaryCheckTolerance)) throw NotUnitary("P is not unitary");
}

// Single-linkage clusters of the eigenvalues; ids numbered by first appearance.
std::vector<int> cluster_ids(const CVector& lambda, double tol) {
    const auto n = static_cast<int>(lambda.size());
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(lambda(i) - lambda(j)) <= tol) parent[find(i)] = find(j);

    std::vector<int> id(static_cast<std::size_t>(n), -1), root_id(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (root_id[r] < 0) root_id[r] = next++;
        id[i] = root_id[r];
    }
    return id;
}

int largest_cluster(const std::vector<int>& ids) {
    std::vector<int> count(ids.size(), 0);
    for (int id : ids) ++count[static_cast<std::size_t>(id)];
    return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

CVector eigenvalues(const CMatrix& p) {
    Eigen::ComplexEigenSolver<CMatrix> solver(p, false);
    return solver.eigenvalues();
}

} // namespace

CcReport check_cc(const StbcCode& code) {
    if (!code.cc) throw MissingCcSpec(code.name + " has no column-cancellation spec");
    CcReport report;
    for (int j = 0; j < code.k; ++j) {
        for (const cplx unit : {cplx(1.0, 0.0), cplx(0.0, 1.0)}) {
            CVector e = CVector::Zero(code.k);
            e(j) = unit;
            report.max_residual = std::max(report.max_residual, cc_residual(code, e));
        }
    }
    Rng rng(kCcSeed);
    for (int t = 0; t < kCcRandomVectors; ++t)
        report.max_residual = std::max(report.max_residual, cc_residual(code, complex_normal_matrix(rng, code.k, 1)));
    report.pass = report.max_residual <= kCcPassResidual;
    return report;
}

std::vector<cplx> difference_alphabet(const Constellation& c, double tol) {
    std::vector<cplx> diffs;
    for (const cplx a : c.points)
        for (const cplx b : c.points) diffs.push_back(a - b);
    std::sort(diffs.begin(), diffs.end(), [](cplx u, cplx v) {
        return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
    });
    std::vector<cplx> out;
    for (const cplx d : diffs) {
        const bool seen = std::any_of(out.begin(), out.end(), [&](cplx e) { return std::abs(d - e) <= tol; });
        if (!seen) out.push_back(d);
    }
    std::sort(out.begin(), out.end(), [tol](cplx u, cplx v) {
        if (std::abs(u.real() - v.real()) > tol) return u.real() < v.real();
        return u.imag() < v.imag();
    });
    return out;
}

FullRankReport check_full_rank_code(const StbcCode& code, const Constellation& c, std::uint64_t cap,
                                    int workers) {
    const std::vector<cplx> alphabet = difference_alphabet(c);
    const auto d = static_cast<std::uint64_t>(alphabet.size());
    const std::uint64_t total = saturating_pow(d, code.k);
    if (total > cap)
        throw CodebookTooLarge(std::to_string(d) + "^" + std::to_string(code.k) +
                               " difference tuples exceed the cap of " + std::to_string(cap));

    // Difference codewords are sums of per-position contributions.
    std::vector<std::vector<CMatrix>> contrib(static_cast<std::size_t>(code.k));
    for (int j = 0; j < code.k; ++j) {
        for (const cplx delta : alphabet) {
            CVector x = CVector::Zero(code.k);
            x(j) = delta;
            contrib[j].push_back(encode(code, x));
        }
    }

    struct Partial {
        int min_rank = std::numeric_limits<int>::max();
        std::uint64_t first_failure = std::numeric_limits<std::uint64_t>::max();
        std::uint64_t checked = 0;
    };

    auto digits_of = [&](std::uint64_t t) {
        std::vector<std::size_t> digits(static_cast<std::size_t>(code.k));
        for (int j = code.k - 1; j >= 0; --j) {
            digits[j] = static_cast<std::size_t>(t % d);
            t /= d;
        }
        return digits;
    };

    auto run_range = [&](std::uint64_t begin, std::uint64_t end, Partial& out) {
        for (std::uint64_t t = begin; t < end; ++t) {
            const auto digits = digits_of(t);
            CMatrix dx = CMatrix::Zero(code.m, code.t_block);
            bool nonzero = false;
            for (int j = 0; j < code.k; ++j) {
                if (std::abs(alphabet[digits[j]]) == 0.0) continue;
                nonzero = true;
                dx += contrib[j][digits[j]];
            }
            if (!nonzero) continue;
            const int r = numeric_rank(dx);
            ++out.checked;
            out.min_rank = std::min(out.min_rank, r);
            if (r < code.m && t < out.first_failure) out.first_failure = t;
        }
    };

    const int n_workers = std::max(1, workers);
    std::vector<Partial> partials(static_cast<std::size_t>(n_workers));
    if (n_workers == 1) {
        run_range(0, total, partials[0]);
    } else {
        std::vector<std::thread> threads;
        const std::uint64_t chunk = (total + n_workers - 1) / n_workers;
        for (int w = 0; w < n_workers; ++w) {
            const std::uint64_t begin = std::min(total, chunk * w);
            const std::uint64_t end = std::min(total, begin + chunk);
            threads.emplace_back(run_range, begin, end, std::ref(partials[w]));
        }
        for (auto& t : threads) t.join();
    }

    Partial merged;
    for (const auto& p : partials) {
        merged.min_rank = std::min(merged.min_rank, p.min_rank);
        merged.first_failure = std::min(merged.first_failure, p.first_failure);
        merged.checked += p.checked;
    }

    FullRankReport report;
    report.tuples_checked = merged.checked;
    report.difference_alphabet = alphabet.size();
    report.min_rank_found = merged.checked == 0 ? code.m : merged.min_rank;
    report.pass = merged.first_failure == std::numeric_limits<std::uint64_t>::max();
    if (!report.pass) {
        const auto digits = digits_of(merged.first_failure);
        CVector w(code.k);
        for (int j = 0; j < code.k; ++j) w(j) = alphabet[digits[j]];
        report.witness = w;
    }
    return report;
}

bool eig_multiplicity_ok(const CMatrix& p, double cluster_tol) {
    require_unitary(p);
    const auto ids = cluster_ids(eigenvalues(p), cluster_tol);
    return largest_cluster(ids) <= static_cast<int>(p.rows()) / 2;
}

int commutator_max_rank(const CMatrix& p, int trials, Rng& rng) {
    int best = 0;
    for (int t = 0; t < trials; ++t) {
        const CMatrix a = complex_normal_matrix(rng, p.rows(), p.cols());
        // cut relative to ||A|| ||P||
        const Eigen::JacobiSVD<CMatrix> svd(CMatrix(a * p - p * a));
        const double cut = kRankTolerance * a.norm() * p.norm();
        best = std::max(best, static_cast<int>((svd.singularValues().array() > cut).count()));
    }
    return best;
}

CMatrix construct_commutator_witness(const CMatrix& p, Rng& rng, double cluster_tol) {
    require_unitary(p);
    const int m = static_cast<int>(p.rows());
    Eigen::ComplexEigenSolver<CMatrix> solver(p);
    const CVector raw_values = solver.eigenvalues();
    const auto ids = cluster_ids(raw_values, cluster_tol);
    if (largest_cluster(ids) > m / 2)
        throw Infeasible("an eigenvalue cluster exceeds floor(m/2); no A makes AP - PA full rank");

    // Group eigenvectors cluster by cluster and orthonormalize.
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ids[a] < ids[b]; });
    CMatrix u(m, m);
    CVector lambda(m);
    std::vector<int> cluster(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        u.col(i) = solver.eigenvectors().col(order[i]);
        lambda(i) = raw_values(order[i]);
        cluster[i] = ids[order[i]];
    }
    for (int j = 0; j < m; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i < j; ++i) u.col(j) -= u.col(i).dot(u.col(j)) * u.col(i);
        u.col(j).normalize();
    }

    // C = B D - D B keeps only two anti-diagonal blocks:
    // rows [f, m) x cols [0, h) and rows [0, f) x cols [h, m).
    const int h = (m + 1) / 2;
    const int f = m / 2;
    for (int attempt = 0; attempt < kWitnessAttempts; ++attempt) {
        CMatrix b = CMatrix::Zero(m, m);
        auto fill = [&](int r0, int r1, int c0, int c1) {
            for (int i = r0; i < r1; ++i)
                for (int j = c0; j < c1; ++j) {
                    const cplx target = complex_normal(rng);
                    if (cluster[i] != cluster[j]) b(i, j) = target / (lambda(j) - lambda(i));
                }
        };
        fill(f, m, 0, h);
        fill(0, f, h, m);
        const CMatrix a = u * b * u.adjoint();
        if (numeric_rank(CMatrix(a * p - p * a)) == m) return a;
    }
    throw Infeasible("no full-rank commutator found after " + std::to_string(kWitnessAttempts) + " attempts");
}

HeqRankReport heq_rank_stats(const StbcCode& code, int draws, Rng& rng) {
    HeqRankReport report;
    report.draws = draws;
    report.full_rank = 4 * code.k;
    report.min_rank = report.full_rank;
    const Snr snr = Snr::from_linear(1.0);
    const CMatrix y_prime = CMatrix::Zero(code.m, code.t_block);
    int full = 0;
    for (int t = 0; t < draws; ++t) {
        const ChannelRealization ch = draw_channel(rng, code.m);
        const PrecoderSet pre = lij_precoders(ch);
        bool both = true;
        for (const Receiver rx : {Receiver::Rx1, Receiver::Rx2}) {
            const auto [ha, hb] = desired_channels(ch, pre, rx);
            const RealEffectiveSystem sys = build_effective_real_system(code, ha, hb, y_prime, snr, rx);
            const int r = numeric_rank(sys.h_eff);
            report.min_rank = std::min(report.min_rank, r);
            both = both && r == report.full_rank;
        }
        if (both) ++full;
    }
    report.full_rank_fraction = draws == 0 ? 0.0 : static_cast<double>(full) / draws;
    return report;
}

double estimate_diversity_slope(const std::vector<BerPoint>& points, std::size_t window) {
    std::vector<BerPoint> sorted = points;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const BerPoint& a, const BerPoint& b) { return a.snr_db < b.snr_db; });
    const std::size_t n = std::min(window, sorted.size());
    if (n < 2) throw InsufficientData("slope needs at least two SNR points");
    const std::vector<BerPoint> top(sorted.end() - static_cast<std::ptrdiff_t>(n), sorted.end());

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& pt : top) {
        if (pt.bit_errors == 0 || pt.bits_sent == 0)
            throw InsufficientData("no bit errors recorded at " + std::to_string(pt.snr_db) + " dB");
        const double x = pt.snr_db / 10.0;
        const double y = -std::log10(pt.ber());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    if (denom <= 0.0) throw InsufficientData("window points share one SNR value");
    return (dn * sxy - sx * sy) / denom;
}

} // namespace xnet
