#include "xnet/stbc.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <regex>

#include "xnet/verify.hpp"

namespace xnet {

CVector GsFunction::operator()(const CVector& y) const {
    return conjugate_input ? CVector(p * y.conjugate()) : CVector(p * y);
}

CMatrix GsFunction::apply_columns(const CMatrix& y) const {
    return conjugate_input ? CMatrix(p * y.conjugate()) : CMatrix(p * y);
}

CMatrix encode(const StbcCode& code, const CVector& x) {
    if (x.size() != code.k)
        throw DimensionMismatch(code.name + " encodes " + std::to_string(code.k) + " symbols, got " +
                                std::to_string(x.size()));
    const RVector real = code.g_real * tilde_vec(x);
    return unvec(untilde_vec(real), code.m, code.t_block);
}

StbcCode code_from_encoder(int m, int t_block, int k,
                           const std::function<CMatrix(const CVector&)>& encoder) {
    StbcCode code;
    code.m = m;
    code.t_block = t_block;
    code.k = k;
    code.g_real.resize(2 * m * t_block, 2 * k);
    for (int j = 0; j < k; ++j) {
        for (int part = 0; part < 2; ++part) {
            CVector e = CVector::Zero(k);
            e(j) = part == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
            const CMatrix x = encoder(e);
            if (x.rows() != m || x.cols() != t_block)
                throw DimensionMismatch("encoder returned wrong codeword shape");
            code.g_real.col(2 * j + part) = tilde_vec(vec(x));
        }
    }
    return code;
}

CMatrix permute_columns(const StbcCode& code, const CMatrix& x) {
    if (!code.cc) return x;
    CMatrix out(x.rows(), x.cols());
    for (int i = 0; i < x.cols(); ++i) out.col(i) = x.col(code.cc->permutation[static_cast<std::size_t>(i)]);
    return out;
}

RMatrix transmit_generator(const StbcCode& code) {
    if (!code.cc) return code.g_real;
    const int block = 2 * code.m; // real rows per codeword column
    RMatrix out(code.g_real.rows(), code.g_real.cols());
    for (int i = 0; i < code.t_block; ++i)
        out.middleRows(i * block, block) =
            code.g_real.middleRows(code.cc->permutation[static_cast<std::size_t>(i)] * block, block);
    return out;
}

double energy_scale(const StbcCode& code) {
    return std::sqrt(2.0 * code.t_block / code.g_real.squaredNorm());
}

namespace {

using std::conj;

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

CcSpec conj_spec(int t_half, std::vector<int> perm, std::vector<CMatrix> f, std::vector<CMatrix> g) {
    CcSpec spec;
    spec.t_half = t_half;
    spec.permutation = std::move(perm);
    for (auto& p : f) spec.f_list.push_back({std::move(p), true});
    for (auto& p : g) spec.g_list.push_back({std::move(p), true});
    return spec;
}

// Entry (row, col) of thread l is thread_value * (wrapped ? gamma : 1).
CMatrix threaded_layout(int m, cplx gamma, const CMatrix& mix, const CVector& x) {
    CMatrix out = CMatrix::Zero(m, m);
    for (int l = 0; l < m; ++l) {
        const CVector u = mix * x.segment(l * m, m);
        for (int j = 0; j < m; ++j) {
            const int row = j + l;
            out(row % m, j) = row >= m ? gamma * u(j) : u(j);
        }
    }
    return out;
}

CMatrix polar_unitary(const CMatrix& a) {
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

} // namespace

StbcCode make_alamouti() {
    auto code = code_from_encoder(2, 2, 2, [](const CVector& x) {
        return mat2(x(0), -conj(x(1)), x(1), conj(x(0)));
    });
    code.name = "alamouti";
    code.cc = conj_spec(1, {0, 1}, {mat2(0, -1, 1, 0)}, {mat2(0, 1, -1, 0)});
    return code;
}

StbcCode make_srinath_rajan(double theta) {
    const cplx e = std::polar(1.0, theta);
    auto code = code_from_encoder(4, 4, 8, [e](const CVector& x) {
        auto re = [&](int i) { return x(i - 1).real(); };
        auto im = [&](int i) { return x(i - 1).imag(); };
        const cplx j(0.0, 1.0);
        CMatrix c(4, 4);
        c << re(1) + j * im(3), -re(2) + j * im(4), e * (re(5) + j * im(7)), e * (-re(6) + j * im(8)),
            re(2) + j * im(4), re(1) - j * im(3), e * (re(6) + j * im(8)), e * (re(5) - j * im(7)),
            e * (re(7) + j * im(5)), e * (-re(8) + j * im(6)), re(3) + j * im(1), -re(4) + j * im(2),
            e * (re(8) + j * im(6)), e * (re(7) - j * im(5)), re(4) + j * im(2), re(3) - j * im(1);
        return c;
    });
    code.name = "srinath-rajan";
    code.theta = theta;

    const cplx e2 = e * e;
    CMatrix p1 = CMatrix::Zero(4, 4), p2 = CMatrix::Zero(4, 4);
    p1(0, 1) = -1.0;
    p1(1, 0) = 1.0;
    p1(2, 3) = -e2;
    p1(3, 2) = e2;
    p2(0, 1) = -e2;
    p2(1, 0) = e2;
    p2(2, 3) = -1.0;
    p2(3, 2) = 1.0;
    CMatrix p3 = -p1, p4 = -p2;
    code.cc = conj_spec(2, {0, 2, 1, 3}, {p1, p2}, {p3, p4});
    return code;
}

StbcCode make_lowdelay_m3(double theta) {
    const cplx e = std::polar(1.0, theta);
    auto code = code_from_encoder(3, 4, 6, [e](const CVector& x) {
        auto re = [&](int i) { return x(i - 1).real(); };
        auto im = [&](int i) { return x(i - 1).imag(); };
        const cplx j(0.0, 1.0);
        const cplx s1 = re(1) + j * im(3);
        const cplx s2 = re(2) + j * im(4);
        const cplx s3 = re(6) + j * im(5);
        const cplx s4 = re(5) + j * im(6);
        const cplx s5 = re(4) + j * im(2);
        const cplx s6 = re(3) + j * im(1);
        CMatrix c(3, 4);
        c << s1, e * s4, -conj(s2), -e * conj(s6),
             s2, e * s5, conj(s1), e * conj(s4),
             e * s3, s6, -e * conj(s3), -conj(s5);
        return c;
    });
    code.name = "lowdelay3";
    code.theta = theta;

    const cplx e2 = e * e;
    CMatrix p1(3, 3), p2(3, 3), p3(3, 3), p4(3, 3);
    p1 << 0, -1, 0, 1, 0, 0, 0, 0, e2;
    p2 << 0, -e2, 0, 0, 0, e, e, 0, 0;
    p3 << 0, 1, 0, -1, 0, 0, 0, 0, e2;
    p4 << 0, 0, e, -e2, 0, 0, 0, e, 0;
    code.cc = conj_spec(2, {0, 1, 2, 3}, {p1, p2}, {p3, p4});
    return code;
}

CMatrix perfect3_mixing() {
    CMatrix mix(3, 3);
    mix << cplx(0.6603, 0.3273), cplx(0.0207, 0.3273), cplx(-0.4920, 0.3273),
        cplx(-0.2938, -0.1456), cplx(-0.0374, -0.5898), cplx(-0.6136, 0.4081),
        cplx(0.5295, 0.2625), cplx(-0.0467, -0.7355), cplx(0.2730, -0.1816);
    return mix;
}

StbcCode make_perfect3() {
    const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const CMatrix mix = perfect3_mixing();
    auto code = code_from_encoder(3, 3, 9, [omega, mix](const CVector& x) {
        return threaded_layout(3, omega, mix, x);
    });
    code.name = "perfect3";
    return code;
}

StbcCode make_threaded_full_rate(int m, cplx gamma, const CMatrix& rotation) {
    if (m < 1) throw UnsupportedSize("threaded code needs m >= 1");
    if (rotation.rows() != m || rotation.cols() != m)
        throw DimensionMismatch("rotation must be " + std::to_string(m) + "x" + std::to_string(m));
    if (!is_unitary(rotation)) throw NotUnitary("threaded code rotation");
    auto code = code_from_encoder(m, m, m * m, [m, gamma, rotation](const CVector& x) {
        return threaded_layout(m, gamma, rotation, x);
    });
    code.name = "threaded" + std::to_string(m);
    return code;
}

StbcCode make_threaded_default(int m) {
    using std::numbers::pi;
    const cplx j(0.0, 1.0);
    switch (m) {
    case 1:
        return make_threaded_full_rate(1, 1.0, CMatrix::Identity(1, 1));
    case 2: {
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        const double golden_bar = (1.0 - std::sqrt(5.0)) / 2.0;
        const cplx alpha = 1.0 + j - j * golden;
        const cplx alpha_bar = 1.0 + j - j * golden_bar;
        CMatrix rot(2, 2);
        rot << alpha, alpha * golden, alpha_bar, alpha_bar * golden_bar;
        rot /= std::sqrt(5.0);
        return make_threaded_full_rate(2, j, polar_unitary(rot));
    }
    case 3:
        return make_threaded_full_rate(3, std::polar(1.0, 2.0 * pi / 3.0), polar_unitary(perfect3_mixing()));
    default:
        break;
    }
    if (m < 1 || m > 6) throw UnsupportedSize("threaded default for m=" + std::to_string(m));
    // Phase-tilted DFT; full-rankness over a given alphabet is checked, not assumed.
    CMatrix rot(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            rot(r, c) = std::polar(1.0 / std::sqrt(m), 2.0 * pi * r * c / m + pi * c / (2.0 * m));
    return make_threaded_full_rate(m, std::polar(1.0, pi / (m + 1.0)), polar_unitary(rot));
}

StbcCode make_replicated(const StbcCode& base, const CMatrix& p, bool enforce_multiplicity) {
    const int m = base.m;
    if (base.t_block != m || base.k != m * m)
        throw DimensionMismatch("replication needs an m x m full-rate base code");
    if (p.rows() != m || p.cols() != m) throw DimensionMismatch("P must be m x m");
    if (!is_unitary(p)) throw NotUnitary("replication matrix P");
    if (enforce_multiplicity && !eig_multiplicity_ok(p))
        throw EigMultiplicityViolation("P has an eigenvalue with multiplicity above floor(m/2)");

    StbcCode code = code_from_encoder(m, 2 * m, base.k, [&](const CVector& x) {
        const CMatrix r = encode(base, x);
        CMatrix out(m, 2 * m);
        out << r, p * r;
        return out;
    });
    code.name = base.name + "-replicated";
    code.theta = base.theta;

    CcSpec spec;
    spec.t_half = m;
    spec.permutation.resize(static_cast<std::size_t>(2 * m));
    std::iota(spec.permutation.begin(), spec.permutation.end(), 0);
    for (int i = 0; i < m; ++i) {
        spec.f_list.push_back({-p.adjoint(), false});
        spec.g_list.push_back({-p, false});
    }
    code.cc = std::move(spec);
    return code;
}

CMatrix quarter_turn_p3() {
    CMatrix p(3, 3);
    p << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    return p;
}

StbcCode make_code(std::string_view name, double theta) {
    if (name == "alamouti") return make_alamouti();
    if (name == "srinath-rajan") return make_srinath_rajan(theta);
    if (name == "lowdelay3") return make_lowdelay_m3(theta);
    if (name == "perfect3") return make_perfect3();
    if (name == "perfect3-replicated") return make_replicated(make_perfect3(), quarter_turn_p3());

    static const std::regex threaded(R"(threaded([1-9])(-replicated)?)");
    std::cmatch match;
    if (std::regex_match(name.begin(), name.end(), match, threaded)) {
        const int m = std::stoi(match[1].str());
        StbcCode base = make_threaded_default(m);
        if (!match[2].matched) return base;
        CMatrix p = CMatrix::Zero(m, m);
        for (int i = 0; i < m; ++i) p(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * i / m);
        return make_replicated(base, p);
    }
    throw UnknownName("code '" + std::string(name) + "'");
}

std::uint64_t saturating_pow(std::uint64_t base, int exponent) {
    std::uint64_t out = 1;
    for (int i = 0; i < exponent; ++i) {
        if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base)
            return std::numeric_limits<std::uint64_t>::max();
        out *= base;
    }
    return out;
}

CodebookEnumerator::CodebookEnumerator(const StbcCode& code, const Constellation& c, std::uint64_t cap)
    : code_(code), constellation_(c), indices_(static_cast<std::size_t>(code.k), 0) {
    total_ = saturating_pow(c.size(), code.k);
    if (total_ > cap)
        throw CodebookTooLarge(std::to_string(c.size()) + "^" + std::to_string(code.k) +
                               " codewords exceeds cap " + std::to_string(cap));
}

bool CodebookEnumerator::next() {
    if (!started_) {
        started_ = true;
    } else {
        int pos = code_.k - 1;
        const int q = static_cast<int>(constellation_.size());
        while (pos >= 0 && ++indices_[static_cast<std::size_t>(pos)] == q) {
            indices_[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) return false;
    }
    CVector x(code_.k);
    for (int i = 0; i < code_.k; ++i) x(i) = constellation_.points[static_cast<std::size_t>(indices_[static_cast<std::size_t>(i)])];
    codeword_ = encode(code_, x);
    return true;
}

} // namespace xnet
