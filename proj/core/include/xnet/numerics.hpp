#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "xnet/errors.hpp"

namespace xnet {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Monte Carlo generator. Every stream is seeded explicitly; see derive_seed().
using Rng = std::mt19937_64;

/// splitmix64 mixing of a master seed with stream coordinates, used to key
/// per-trial generators so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// One CN(0,1) sample: real and imaginary parts i.i.d. N(0, 1/2).
cplx complex_normal(Rng& rng);

/// rows x cols matrix of i.i.d. CN(0,1) entries.
CMatrix complex_normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Haar-distributed unitary (QR of a Gaussian matrix with the phase of R's diagonal removed).
CMatrix haar_unitary(Rng& rng, Eigen::Index m);

constexpr double kPivotTolerance = 1e-12;
constexpr double kRankTolerance = 1e-9;
constexpr double kHermitianTolerance = 1e-9;
constexpr double kUnitaryTolerance = 1e-9;

/// Inverse by LU with partial pivoting. Throws SingularMatrix when a pivot
/// magnitude falls below kPivotTolerance * ||m||_F.
CMatrix invert(const CMatrix& m);

double fro_norm(const CMatrix& m);

struct HermitianEigen {
    std::vector<double> values; // descending
    CMatrix vectors;            // columns ordered like values
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues in non-ascending order.
HermitianEigen eig_hermitian(const CMatrix& m);

/// Number of singular values strictly above tol * (largest singular value).
int numeric_rank(const CMatrix& m, double tol = kRankTolerance);
int numeric_rank(const RMatrix& m, double tol = kRankTolerance);

CMatrix kron(const CMatrix& a, const CMatrix& b);
RMatrix kron(const RMatrix& a, const RMatrix& b);

/// Replace every entry x by [[x_I, -x_Q], [x_Q, x_I]].
RMatrix realify(const CMatrix& m);

/// [x1_I, x1_Q, ..., xn_I, xn_Q].
RVector tilde_vec(const CVector& v);

/// Inverse of tilde_vec; v must have even length.
CVector untilde_vec(const RVector& v);

/// Column stacking.
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

bool is_unitary(const CMatrix& m, double tol = kUnitaryTolerance);

} // namespace xnet
