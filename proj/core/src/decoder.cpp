#include "xnet/decoder.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

namespace xnet {

namespace {

struct Split {
    std::vector<int> a, b;
};

Split split_levels(const std::vector<int>& idx, int k) {
    return {std::vector<int>(idx.begin(), idx.begin() + k), std::vector<int>(idx.begin() + k, idx.end())};
}

WhitenedSystem checked_whiten(const RealEffectiveSystem& sys) {
    const int levels = sys.unknowns();
    if (sys.h_eff.cols() != 2 * levels)
        throw DimensionMismatch("effective system has " + std::to_string(sys.h_eff.cols()) +
                                " columns, expected " + std::to_string(2 * levels));
    if (sys.y_eff.size() != sys.h_eff.rows() || sys.noise_sigma_per_row.size() != sys.h_eff.rows())
        throw DimensionMismatch("effective system rows disagree");
    return whiten(sys);
}

} // namespace

double decode_metric(const RealEffectiveSystem& sys, const Constellation& c, const std::vector<int>& xa,
                     const std::vector<int>& xb) {
    const WhitenedSystem w = checked_whiten(sys);
    RVector x(w.h.cols());
    Eigen::Index pos = 0;
    for (const auto* part : {&xa, &xb}) {
        for (int i : *part) {
            const cplx s = c.points.at(static_cast<std::size_t>(i));
            x(pos++) = s.real();
            x(pos++) = s.imag();
        }
    }
    if (pos != x.size()) throw DimensionMismatch("candidate length does not match the system");
    return (w.y - w.h * x).squaredNorm();
}

DecodeResult ml_exhaustive(const RealEffectiveSystem& sys, const Constellation& c, std::uint64_t cap) {
    const WhitenedSystem w = checked_whiten(sys);
    const int levels = sys.unknowns();
    const int q = static_cast<int>(c.size());
    const std::uint64_t total = saturating_pow(static_cast<std::uint64_t>(q), levels);
    if (total > cap)
        throw CodebookTooLarge(std::to_string(q) + "^" + std::to_string(levels) + " candidates exceed the cap of " +
                               std::to_string(cap));

    // contrib[l][p] = contribution of point p placed at level l.
    std::vector<std::vector<RVector>> contrib(static_cast<std::size_t>(levels));
    std::vector<double> last_norm(static_cast<std::size_t>(q));
    for (int l = 0; l < levels; ++l) {
        for (int p = 0; p < q; ++p) {
            const cplx s = c.points[static_cast<std::size_t>(p)];
            contrib[l].push_back(w.h.col(2 * l) * s.real() + w.h.col(2 * l + 1) * s.imag());
        }
    }
    for (int p = 0; p < q; ++p) last_norm[p] = contrib[levels - 1][p].squaredNorm();

    // res[l] = y minus the contributions of levels [0, l).
    std::vector<RVector> res(static_cast<std::size_t>(levels), w.y);
    std::vector<int> idx(static_cast<std::size_t>(levels), 0);
    auto refresh_from = [&](int from) {
        for (int l = std::max(from, 1); l < levels; ++l) res[l] = res[l - 1] - contrib[l - 1][idx[l - 1]];
    };
    refresh_from(1);

    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_idx = idx;
    const int inner = levels - 1;
    for (;;) {
        const RVector& r = res[inner];
        const double base = r.squaredNorm();
        for (int p = 0; p < q; ++p) {
            const double metric = base - 2.0 * r.dot(contrib[inner][p]) + last_norm[p];
            if (metric < best) {
                best = metric;
                best_idx = idx;
                best_idx[inner] = p;
            }
        }
        int l = inner - 1;
        while (l >= 0 && ++idx[l] == q) idx[l--] = 0;
        if (l < 0) break;
        refresh_from(l + 1);
    }

    auto [a, b] = split_levels(best_idx, sys.symbols_per_codeword);
    DecodeResult out{std::move(a), std::move(b), 0.0, total};
    out.metric = decode_metric(sys, c, out.x11_hat, out.x21_hat);
    return out;
}

DecodeResult sphere_decode(const RealEffectiveSystem& sys, const Constellation& c) {
    const WhitenedSystem w = checked_whiten(sys);
    const int levels = sys.unknowns();
    const Eigen::Index n = w.h.cols();
    if (w.h.rows() < n) throw RankDeficient("fewer equations than unknowns");

    // Gram-Schmidt with one reorthogonalization pass; R is upper triangular,
    // so each 2x2 diagonal block couples only the real and imaginary part of one symbol.
    RMatrix q(w.h.rows(), n);
    RMatrix r = RMatrix::Zero(n, n);
    const double scale = w.h.colwise().norm().maxCoeff();
    for (Eigen::Index j = 0; j < n; ++j) {
        RVector v = w.h.col(j);
        for (int pass = 0; pass < 2; ++pass) {
            const RVector coef = q.leftCols(j).transpose() * v;
            v -= q.leftCols(j) * coef;
            r.col(j).head(j) += coef;
        }
        const double d = v.norm();
        if (!(d > kRankTolerance * scale))
            throw RankDeficient("column " + std::to_string(j) + " is dependent on earlier columns");
        r(j, j) = d;
        q.col(j) = v / d;
    }
    const RVector z = q.transpose() * w.y;

    const int npts = static_cast<int>(c.size());
    std::vector<double> re(static_cast<std::size_t>(npts)), im(static_cast<std::size_t>(npts));
    for (int p = 0; p < npts; ++p) {
        re[p] = c.points[p].real();
        im[p] = c.points[p].imag();
    }

    RVector x = RVector::Zero(n);
    std::vector<int> idx(static_cast<std::size_t>(levels), 0);
    std::uint64_t nodes = 0;

    auto level_costs = [&](int l, std::vector<double>& cost) {
        const Eigen::Index a = 2 * l, b = 2 * l + 1;
        const Eigen::Index tail = n - (b + 1);
        double ua = z(a), ub = z(b);
        if (tail > 0) {
            ua -= r.row(a).tail(tail).dot(x.tail(tail));
            ub -= r.row(b).tail(tail).dot(x.tail(tail));
        }
        for (int p = 0; p < npts; ++p) {
            const double ea = ua - r(a, a) * re[p] - r(a, b) * im[p];
            const double eb = ub - r(b, b) * im[p];
            cost[p] = ea * ea + eb * eb;
        }
    };
    auto place = [&](int l, int p) {
        idx[l] = p;
        x(2 * l) = re[p];
        x(2 * l + 1) = im[p];
    };

    // Babai start: nearest point level by level gives the initial radius.
    std::vector<std::vector<double>> cost(static_cast<std::size_t>(levels), std::vector<double>(npts));
    double best = 0.0;
    for (int l = levels - 1; l >= 0; --l) {
        level_costs(l, cost[l]);
        const int p = static_cast<int>(std::min_element(cost[l].begin(), cost[l].end()) - cost[l].begin());
        best += cost[l][p];
        place(l, p);
        ++nodes;
    }
    std::vector<int> best_idx = idx;

    std::vector<std::vector<int>> order(static_cast<std::size_t>(levels), std::vector<int>(npts));
    auto search = [&](auto&& self, int l, double partial) -> void {
        level_costs(l, cost[l]);
        auto& ord = order[l];
        std::iota(ord.begin(), ord.end(), 0);
        const auto& cl = cost[l];
        std::stable_sort(ord.begin(), ord.end(), [&](int u, int v) { return cl[u] < cl[v]; });
        for (int p : ord) {
            const double m = partial + cl[p];
            if (m > best) break;
            place(l, p);
            ++nodes;
            if (l == 0) {
                if (m < best || idx < best_idx) {
                    best = m;
                    best_idx = idx;
                }
            } else {
                self(self, l - 1, m);
            }
        }
    };
    search(search, levels - 1, 0.0);

    auto [a, b] = split_levels(best_idx, sys.symbols_per_codeword);
    DecodeResult out{std::move(a), std::move(b), 0.0, nodes};
    out.metric = decode_metric(sys, c, out.x11_hat, out.x21_hat);
    return out;
}

ErrorCount count_errors(const std::vector<int>& truth_a, const std::vector<int>& truth_b,
                        const DecodeResult& decoded, const Constellation& c) {
    if (truth_a.size() != decoded.x11_hat.size() || truth_b.size() != decoded.x21_hat.size())
        throw DimensionMismatch("decoded length differs from transmitted length");
    ErrorCount out;
    auto tally = [&](const std::vector<int>& t, const std::vector<int>& d) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] < 0 || d[i] < 0 || static_cast<std::size_t>(t[i]) >= c.size() ||
                static_cast<std::size_t>(d[i]) >= c.size())
                throw DimensionMismatch("symbol index outside the constellation");
            const auto diff = static_cast<unsigned>(t[i] ^ d[i]);
            out.bit_errors += static_cast<std::uint64_t>(std::popcount(diff));
            if (diff != 0) ++out.symbol_errors;
        }
    };
    tally(truth_a, decoded.x11_hat);
    tally(truth_b, decoded.x21_hat);
    out.codeword_error = out.symbol_errors > 0;
    return out;
}

} // namespace xnet
