#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xnet/constellation.hpp"
#include "xnet/numerics.hpp"

namespace xnet {

/// Gaussian-stabilizer map y -> p y or y -> p conj(y) with p unitary.
struct GsFunction {
    CMatrix p;
    bool conjugate_input = false;

    CVector operator()(const CVector& y) const;
    /// Column-wise application to a matrix.
    CMatrix apply_columns(const CMatrix& y) const;
};

/// Column-cancellation data for an (M, 2T) code. permutation[i] is the
/// 0-based source column placed at position i before cancellation; after
/// permuting, column i + f_i(column i+T) = 0 and g_i(column i) + column i+T = 0.
struct CcSpec {
    int t_half = 0;
    std::vector<int> permutation;
    std::vector<GsFunction> f_list;
    std::vector<GsFunction> g_list;
};

/// Real-linear dispersion code: tilde(vec(X)) = g_real * tilde(x).
struct StbcCode {
    int m = 0;
    int t_block = 0;
    int k = 0;
    RMatrix g_real; // (2 m t_block) x (2 k)
    std::optional<CcSpec> cc;
    std::string name;
    double theta = 0.0;
};

CMatrix encode(const StbcCode& code, const CVector& x);

/// Build the generator by probing a real-linear encoder on the 2k real basis vectors.
StbcCode code_from_encoder(int m, int t_block, int k,
                           const std::function<CMatrix(const CVector&)>& encoder);

/// Columns of the codeword reordered by the CcSpec permutation (identity without one).
CMatrix permute_columns(const StbcCode& code, const CMatrix& x);

/// Generator of the column-permuted codeword.
RMatrix transmit_generator(const StbcCode& code);

/// Gain that brings E||X||^2 to t_block for unit-energy symbols with
/// equal-power, uncorrelated real and imaginary parts.
double energy_scale(const StbcCode& code);

constexpr double kDefaultTheta = std::numbers::pi / 4.0;

StbcCode make_alamouti();
StbcCode make_srinath_rajan(double theta = kDefaultTheta);
StbcCode make_lowdelay_m3(double theta = kDefaultTheta);
StbcCode make_perfect3();

/// Circulant-thread full-rate code: thread l carries rotation * x_l on the
/// l-th cyclic diagonal, entries that wrap past the last row are scaled by gamma.
StbcCode make_threaded_full_rate(int m, cplx gamma, const CMatrix& rotation);

/// Default threaded code for m in 1..6 (golden-style for 2, perfect-style for 3).
StbcCode make_threaded_default(int m);

/// Codewords [R  P R]. Throws EigMultiplicityViolation unless P satisfies the
/// eigenvalue multiplicity condition, unless enforce_multiplicity is false.
StbcCode make_replicated(const StbcCode& base, const CMatrix& p, bool enforce_multiplicity = true);

/// The 3x3 quarter-turn unitary with eigenvalues i, -i, 1.
CMatrix quarter_turn_p3();

/// The 3x3 mixing matrix of the perfect code (four decimals, not exactly unitary).
CMatrix perfect3_mixing();

/// Resolve a CLI code name: alamouti, srinath-rajan, lowdelay3,
/// perfect3-replicated, threaded{M}, threaded{M}-replicated.
StbcCode make_code(std::string_view name, double theta = kDefaultTheta);

constexpr std::uint64_t kDefaultCodebookCap = std::uint64_t{1} << 24;

/// Lexicographic enumeration of all |c|^k codewords; the last symbol varies fastest.
class CodebookEnumerator {
public:
    CodebookEnumerator(const StbcCode& code, const Constellation& c,
                       std::uint64_t cap = kDefaultCodebookCap);

    /// Advance to the next codeword; false once exhausted.
    bool next();
    const std::vector<int>& indices() const noexcept { return indices_; }
    const CMatrix& codeword() const noexcept { return codeword_; }
    std::uint64_t size() const noexcept { return total_; }

private:
    StbcCode code_;
    Constellation constellation_;
    std::vector<int> indices_;
    CMatrix codeword_;
    std::uint64_t total_ = 0;
    bool started_ = false;
};

/// |base|^exponent, saturating at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, int exponent);

} // namespace xnet
