#pragma once

// Exact integer primitives: Legendre/Jacobi symbols, deterministic primality,
// smallest-prime-factor tables, segmented sieving.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace charsum {

using u128 = unsigned __int128;
using i128 = __int128;

/// Raised when a theorem-backed inequality or a construction invariant fails.
/// Such a failure always indicates an implementation bug.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic Miller-Rabin; the first twelve prime bases are a witness set
/// for every n < 2^64.
bool is_prime(std::uint64_t n);

/// floor(sqrt(n)), exact.
std::uint64_t isqrt(std::uint64_t n);
std::uint64_t isqrt(u128 n);

bool is_perfect_square(std::uint64_t n);
bool is_perfect_square(u128 n);

/// A validated odd prime modulus q with 3 <= q < 2^63.
class PrimeModulus {
public:
    explicit PrimeModulus(std::uint64_t q);

    std::uint64_t value() const { return q_; }
    /// (q-1)/2, the Euler-criterion exponent.
    std::uint64_t half() const { return (q_ - 1) / 2; }
    /// Reduces any signed integer into [0, q).
    std::uint64_t reduce(std::int64_t n) const;

    friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

private:
    std::uint64_t q_;
};

/// Jacobi symbol (a/n) for odd n >= 1, by the binary algorithm with
/// quadratic reciprocity.
int jacobi_symbol(std::uint64_t a, std::uint64_t n);

/// Legendre symbol (n/q) in {-1, 0, +1}.
int jacobi(std::int64_t n, const PrimeModulus& q);

/// n^((q-1)/2) mod q mapped to {-1, 0, +1}. Slow; kept as an oracle.
int euler_criterion(std::int64_t n, const PrimeModulus& q);

using Factorization = std::vector<std::pair<std::uint64_t, unsigned>>;

/// Trial division by 2, 3 and the 6k+-1 wheel. Intended for n up to ~10^14.
Factorization factorize_trial(std::uint64_t n);

std::uint64_t squarefree_part(const Factorization& f);
unsigned omega(const Factorization& f);
std::uint64_t tau(const Factorization& f);

unsigned omega(std::uint64_t n);
std::uint64_t tau(std::uint64_t n);

/// Smallest-prime-factor table for 2..limit.
class FactorTable {
public:
    static constexpr std::uint64_t max_limit = std::uint64_t{1} << 31;

    explicit FactorTable(std::uint64_t limit);

    std::uint64_t limit() const { return limit_; }
    std::uint32_t smallest_prime_factor(std::uint64_t n) const;

    Factorization factorize(std::uint64_t n) const;
    std::uint64_t squarefree_part(std::uint64_t n) const;
    unsigned omega(std::uint64_t n) const;
    std::uint64_t tau(std::uint64_t n) const;

    /// Appends the primes dividing n to an odd power.
    void odd_primes_of(std::uint64_t n, std::vector<std::uint32_t>& out) const;

private:
    void check(std::uint64_t n) const;

    std::uint64_t limit_;
    std::vector<std::uint32_t> spf_;
};

/// Primes <= n by the plain sieve of Eratosthenes.
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

/// Default memory budget for a single interval sieve (numbers covered).
inline constexpr std::uint64_t default_sieve_budget = std::uint64_t{1} << 30;

/// Exactly the primes in [lo, hi], ascending, by a segmented sieve with base
/// primes up to sqrt(hi). Throws std::length_error if hi - lo exceeds budget.
std::vector<std::uint64_t> primes_in_interval(std::uint64_t lo, std::uint64_t hi,
                                              std::uint64_t budget = default_sieve_budget);

struct PrimeDensity {
    std::uint64_t X = 0;
    double eta = 0;
    std::uint64_t length = 0;   ///< floor(X^eta)
    std::uint64_t count = 0;    ///< pi(X + length) - pi(X)
    double comparator = 0;      ///< X^eta / log X
    double ratio = 0;
};

PrimeDensity prime_density_check(std::uint64_t X, double eta,
                                 std::uint64_t budget = default_sieve_budget);

}  // namespace charsum
