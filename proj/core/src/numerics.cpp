#include "xnet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace xnet {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

cplx complex_normal(Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

CMatrix complex_normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    CMatrix out(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = complex_normal(rng);
    return out;
}

CMatrix haar_unitary(Rng& rng, Eigen::Index m) {
    const CMatrix g = complex_normal_matrix(rng, m, m);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(m, m);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < m; ++i) {
        const double mag = std::abs(r(i, i));
        if (mag > 0) q.col(i) *= r(i, i) / mag;
    }
    return q;
}

CMatrix invert(const CMatrix& m) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("invert needs a square matrix, got " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()));
    const Eigen::Index n = m.rows();
    const double threshold = kPivotTolerance * fro_norm(m);

    CMatrix lu = m;
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});

    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index pivot = k;
        double best = std::abs(lu(k, k));
        for (Eigen::Index r = k + 1; r < n; ++r) {
            const double mag = std::abs(lu(r, k));
            if (mag > best) {
                best = mag;
                pivot = r;
            }
        }
        if (!(best > threshold))
            throw SingularMatrix("pivot " + std::to_string(best) + " below threshold at column " +
                                 std::to_string(k));
        if (pivot != k) {
            lu.row(k).swap(lu.row(pivot));
            std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(pivot)]);
        }
        for (Eigen::Index r = k + 1; r < n; ++r) {
            lu(r, k) /= lu(k, k);
            lu.row(r).tail(n - k - 1) -= lu(r, k) * lu.row(k).tail(n - k - 1);
        }
    }

    // Solve LU X = P I column by column.
    CMatrix inv(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        CVector x = CVector::Zero(n);
        for (Eigen::Index r = 0; r < n; ++r) x(r) = (perm[static_cast<std::size_t>(r)] == c) ? 1.0 : 0.0;
        for (Eigen::Index r = 0; r < n; ++r)
            for (Eigen::Index j = 0; j < r; ++j) x(r) -= lu(r, j) * x(j);
        for (Eigen::Index r = n - 1; r >= 0; --r) {
            for (Eigen::Index j = r + 1; j < n; ++j) x(r) -= lu(r, j) * x(j);
            x(r) /= lu(r, r);
        }
        inv.col(c) = x;
    }
    return inv;
}

double fro_norm(const CMatrix& m) { return m.norm(); }

HermitianEigen eig_hermitian(const CMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("eig_hermitian needs a square matrix");
    const double scale = fro_norm(m);
    if ((m - m.adjoint()).norm() > kHermitianTolerance * scale)
        throw NotHermitian("||m - m^H||_F = " + std::to_string((m - m.adjoint()).norm()));

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    const Eigen::Index n = m.rows();
    HermitianEigen out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors.resize(n, n);
    // Eigen returns ascending order.
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values[static_cast<std::size_t>(i)] = solver.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return out;
}

namespace {

template <typename Matrix>
int rank_from_singular_values(const Matrix& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return 0;
    const double cut = tol * sv(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++rank;
    return rank;
}

} // namespace

int numeric_rank(const CMatrix& m, double tol) { return rank_from_singular_values(m, tol); }
int numeric_rank(const RMatrix& m, double tol) { return rank_from_singular_values(m, tol); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

RMatrix kron(const RMatrix& a, const RMatrix& b) {
    RMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

RMatrix realify(const CMatrix& m) {
    RMatrix out(2 * m.rows(), 2 * m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const cplx x = m(i, j);
            out(2 * i, 2 * j) = x.real();
            out(2 * i, 2 * j + 1) = -x.imag();
            out(2 * i + 1, 2 * j) = x.imag();
            out(2 * i + 1, 2 * j + 1) = x.real();
        }
    }
    return out;
}

RVector tilde_vec(const CVector& v) {
    RVector out(2 * v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out(2 * i) = v(i).real();
        out(2 * i + 1) = v(i).imag();
    }
    return out;
}

CVector untilde_vec(const RVector& v) {
    if (v.size() % 2 != 0) throw DimensionMismatch("untilde_vec needs an even length");
    CVector out(v.size() / 2);
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = cplx(v(2 * i), v(2 * i + 1));
    return out;
}

CVector vec(const CMatrix& m) { return m.reshaped(); }

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) throw DimensionMismatch("unvec size mismatch");
    return v.reshaped(rows, cols);
}

bool is_unitary(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m * m.adjoint() - CMatrix::Identity(m.rows(), m.cols())).norm() <= tol;
}

} // namespace xnet
