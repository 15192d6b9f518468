#pragma once

// Selberg upper-bound sieve weights for the odd primes below z.
//
// Base weights lambda_d live on squarefree d | P(z) with d <= D, where P(z)
// is the product of odd primes p < z:
//
//   lambda_d = mu(d) (d / phi(d)) G_d(D / d) / G(D),
//   G_d(y) = sum_{e <= y, e | P(z), (e, d) = 1} prod_{p | e} 1/(p - 1),
//
// and G = G_1. The expanded weights rho_e = sum_{lcm(d1, d2) = e} lambda_d1 lambda_d2
// satisfy sum_{e | n} rho_e = (sum_{d | n} lambda_d)^2, which is >= 0 always and
// equal to 1 when n has no odd prime factor below z. All weights are exact
// rationals.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "charsum/bigint.hpp"

namespace charsum {

class SieveSystem {
public:
    std::uint64_t z() const { return z_; }
    std::uint64_t level() const { return D_; }
    const std::vector<std::uint64_t>& sifting_primes() const { return primes_; }

    /// (d, lambda_d) for d in the support, ascending d.
    const std::vector<std::pair<std::uint64_t, BigRational>>& lambda() const { return lambda_; }
    /// (e, rho_e) for e with nonzero rho_e, ascending e.
    const std::vector<std::pair<std::uint64_t, BigRational>>& rho() const { return rho_; }

    BigRational lambda_at(std::uint64_t d) const;
    BigRational rho_at(std::uint64_t e) const;

    /// Product of the sifting primes dividing n.
    std::uint64_t sifted_kernel(std::uint64_t n) const;

    /// sum_{e | n} rho_e.
    BigRational indicator_sum(std::uint64_t n) const;
    /// sum_{d | n} lambda_d.
    BigRational lambda_divisor_sum(std::uint64_t n) const;

private:
    friend SieveSystem build_selberg(std::uint64_t z, std::uint64_t D);

    std::uint64_t z_ = 0;
    std::uint64_t D_ = 0;
    std::vector<std::uint64_t> primes_;
    std::vector<std::pair<std::uint64_t, BigRational>> lambda_;
    std::vector<std::pair<std::uint64_t, BigRational>> rho_;
};

/// Limit on |support|^2 when expanding rho.
inline constexpr std::uint64_t selberg_pair_budget = 50'000'000;

/// Requires z >= 3 and D at least the largest odd prime below z.
SieveSystem build_selberg(std::uint64_t z, std::uint64_t D);

struct IndicatorReport {
    std::uint64_t n_max = 0;
    std::uint64_t rough_count = 0;      ///< n <= n_max with no odd prime factor < z
    std::uint64_t kernels_checked = 0;  ///< distinct sifted kernels seen
    BigRational min_sum;                ///< min over n of sum_{e | n} rho_e
};

/// Checks, exactly, for every 1 <= n <= n_max: sum_{e|n} rho_e >= 0, it equals
/// (sum_{d|n} lambda_d)^2, and it is 1 when n is z-rough. Also audits
/// rho_e = 0 for e > D^2 and lambda_1 = 1, |lambda_d| <= 1.
/// Throws InvariantViolation on the first failure.
IndicatorReport verify_indicator(const SieveSystem& sys, std::uint64_t n_max);

struct IntervalWeight {
    BigRational exact_sum;
    double sum = 0;
    double comparator = 0;   ///< delta / log Q
    double ratio = 0;
};

/// sum over integers Q < n <= Q + delta (odd n only if odd_only) of
/// sum_{e | n} rho_e.
IntervalWeight interval_weight_sum(const SieveSystem& sys, std::uint64_t Q, std::uint64_t delta,
                                   bool odd_only = true);

/// sum_e |rho_e|.
BigRational abs_weight_sum(const SieveSystem& sys);

}  // namespace charsum
