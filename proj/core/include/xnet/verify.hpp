#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xnet/ber.hpp"
#include "xnet/constellation.hpp"
#include "xnet/numerics.hpp"
#include "xnet/stbc.hpp"

namespace xnet {

struct CcReport {
    bool pass = false;
    double max_residual = 0.0;
};

/// Checks both column-cancellation identities on the 2k real basis vectors
/// and 100 seeded random symbol vectors. Passes iff the max residual <= 1e-10.
CcReport check_cc(const StbcCode& code);

struct FullRankReport {
    bool pass = false;
    int min_rank_found = 0;
    std::optional<CVector> witness; // first difference vector with rank < m
    std::uint64_t tuples_checked = 0;
    std::size_t difference_alphabet = 0;
};

/// Distinct pairwise differences of constellation points, sorted by (real, imag).
std::vector<cplx> difference_alphabet(const Constellation& c, double tol = 1e-9);

/// Every nonzero difference codeword encode(dx), dx drawn from the difference
/// alphabet, must have rank m. The enumeration is split across workers; the
/// reported witness is the first failure in enumeration order.
FullRankReport check_full_rank_code(const StbcCode& code, const Constellation& c,
                                    std::uint64_t cap = kDefaultCodebookCap, int workers = 1);

constexpr double kEigClusterTolerance = 1e-6;

/// Eigenvalues within cluster_tol of each other (transitively) form one cluster.
/// True iff no cluster holds more than floor(m/2) eigenvalues. Throws NotUnitary.
bool eig_multiplicity_ok(const CMatrix& p, double cluster_tol = kEigClusterTolerance);

/// Max numeric rank of A P - P A over `trials` Gaussian A.
int commutator_max_rank(const CMatrix& p, int trials, Rng& rng);

/// A with A P - P A of full rank, built from the eigenbasis of P with
/// nonsingular anti-diagonal blocks in the commutator. Throws Infeasible when
/// the eigenvalue multiplicity condition fails.
CMatrix construct_commutator_witness(const CMatrix& p, Rng& rng, double cluster_tol = kEigClusterTolerance);

struct HeqRankReport {
    double full_rank_fraction = 0.0;
    int min_rank = 0;
    int full_rank = 0; // column count of h_eff
    int draws = 0;
};

/// Fraction of channel draws for which both receivers' effective systems have full rank.
HeqRankReport heq_rank_stats(const StbcCode& code, int draws, Rng& rng);

/// Least-squares slope of -log10(BER) against SNR_dB / 10 over the `window`
/// highest-SNR points. Throws InsufficientData on fewer than two points or
/// any window point without bit errors.
double estimate_diversity_slope(const std::vector<BerPoint>& points, std::size_t window);

} // namespace xnet
