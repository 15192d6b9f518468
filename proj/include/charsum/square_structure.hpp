#pragma once

// Combinatorics of offset tuples alpha in [h]^L: pair-deletion reduction,
// fully paired tuple counts K(r, h) and their normalisation theta, and square
// values of shifted products prod (m + gamma_i).

#include <cstdint>
#include <span>
#include <vector>

#include "charsum/arith.hpp"
#include "charsum/bigint.hpp"

namespace charsum {

/// alpha in [h]^L. Construction checks 1 <= alpha_i <= h.
class OffsetTuple {
public:
    OffsetTuple(std::vector<std::int64_t> entries, std::int64_t h);

    std::span<const std::int64_t> entries() const { return entries_; }
    std::int64_t h() const { return h_; }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<std::int64_t> entries_;
    std::int64_t h_;
};

struct TupleReduction {
    std::vector<std::int64_t> gamma;   ///< survivors, in original order
    std::size_t k = 0;                 ///< |gamma| / 2, rounded down
};

/// Left-to-right pair deletion. For the leftmost surviving coordinate, the
/// leftmost later surviving coordinate with the same value is found and both
/// are deleted; otherwise the scan advances. The survivors are exactly the
/// values of odd multiplicity, each once.
TupleReduction reduce_tuple(std::span<const std::int64_t> alpha);
inline TupleReduction reduce_tuple(const OffsetTuple& alpha)
{
    return reduce_tuple(alpha.entries());
}

/// Whether prod_i (m + offsets_i) is a perfect square, from the parity of
/// prime exponents of each factor. The product is never formed. Each factor
/// must be in [1, table.limit()].
bool shifted_product_is_square(std::uint64_t m, std::span<const std::int64_t> offsets,
                               const FactorTable& table);

struct SquarePair {
    bool full_is_square = false;
    bool reduced_is_square = false;
};

SquarePair square_iff_reduced(std::uint64_t m, const OffsetTuple& alpha, const FactorTable& table);

/// Enumeration budget for k_count_bruteforce.
inline constexpr std::uint64_t bruteforce_budget = 100'000'000;

/// #{alpha in [h]^{2r} : every value occurs an even number of times}, by
/// enumeration. Throws std::length_error when h^{2r} > bruteforce_budget.
std::uint64_t k_count_bruteforce(unsigned r, std::uint64_t h);

/// Same count as the coefficient (2r)! [x^{2r}] cosh(x)^h, evaluated exactly.
/// Writing cosh^h = sum_j C(h, j) (cosh - 1)^j, the count is
/// sum_{j <= r} C(h, j) E(r, j), where E(r, j) counts words of length 2r in j
/// fixed letters, each used a positive even number of times.
BigInt k_count_exact(unsigned r, std::uint64_t h);

struct KThetaRecord {
    unsigned r = 0;
    std::uint64_t h = 0;
    BigInt K;
    BigInt lower;   ///< mu_{2r} h (h-1) ... (h-r+1)
    BigInt upper;   ///< mu_{2r} h^r
    double theta = 0;
};

/// theta with K(r, h) = mu_{2r} (h - theta r)^r. Requires 1 <= r <= h, r <= 12.
/// Throws InvariantViolation if the sandwich lower <= K <= upper fails or
/// theta leaves [0, 1] by more than 1e-9.
KThetaRecord theta_extract(unsigned r, std::uint64_t h);

struct SquareValueCount {
    std::uint64_t count = 0;
    std::vector<std::uint64_t> witnesses;
};

/// #{1 <= m <= M : prod (m + gamma_i) is a perfect square}. Offsets must be
/// distinct and nonnegative; the table must cover M + max gamma.
SquareValueCount count_square_values(std::span<const std::int64_t> gamma, std::uint64_t M,
                                     const FactorTable& table);

/// All D in [1, M] with D (D + Z) a perfect square, from the factorisations
/// Z^2 = d e with d = 2D + Z - 2Y, e = 2D + Z + 2Y. Sorted ascending. At most
/// tau(Z^2) entries.
std::vector<std::uint64_t> k1_solutions_divisor_method(std::uint64_t Z, std::uint64_t M);

struct EvertseBound {
    BigInt discriminant;        ///< prod_{i<j} (gamma_i - gamma_j)^2
    unsigned omega = 0;         ///< distinct primes dividing the discriminant
    unsigned exponent = 0;      ///< 13 + 9 omega
    double log7_value = 0;      ///< log_7 of the bound, i.e. exponent
    BigInt value;               ///< 7^exponent
};

/// Bound 7^(13 + 9 omega(D(f))) on the integer solutions of Y^2 = f(m),
/// f(m) = prod (m + gamma_i). Requires at least three distinct offsets, so that
/// f has three simple roots.
EvertseBound evertse_bound(std::span<const std::int64_t> gamma);

}  // namespace charsum
