#pragma once

// Extended Rademacher random multiplicative functions: f(p) = +-1 independently
// with equal probability on primes, extended completely multiplicatively.

#include <complex>
#include <cstdint>
#include <vector>

#include "charsum/arith.hpp"

namespace charsum {

/// Coefficients a_1..a_N; real by default, complex allowed.
class CoefficientVector {
public:
    using value_type = std::complex<double>;

    CoefficientVector() = default;
    explicit CoefficientVector(std::vector<double> real);
    explicit CoefficientVector(std::vector<value_type> values);

    std::size_t size() const { return values_.size(); }
    /// a_n for 1 <= n <= size().
    value_type at(std::size_t n) const { return values_.at(n - 1); }
    const std::vector<value_type>& values() const { return values_; }
    bool is_zero() const;

    CoefficientVector scaled(value_type c) const;

private:
    std::vector<value_type> values_;
};

/// SplitMix64 finaliser (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

/// f(p) for the ensemble identified by seed: the low bit of
/// splitmix64(splitmix64(seed) ^ p). Pure, so ensembles extend lazily and do
/// not depend on evaluation order.
int rademacher_sign(std::uint64_t seed, std::uint64_t p);

/// One sampled function, tabulated for 1 <= n <= limit.
class RmfEnsemble {
public:
    RmfEnsemble(std::uint64_t seed, const FactorTable& table);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t limit() const { return values_.size() - 1; }
    int operator()(std::uint64_t n) const { return values_.at(n); }
    int sign_of_prime(std::uint64_t p) const { return rademacher_sign(seed_, p); }

private:
    std::uint64_t seed_;
    std::vector<std::int8_t> values_;
};

/// Samples f(n) for n <= table.limit().
RmfEnsemble rmf_sample(std::uint64_t seed, const FactorTable& table);

/// E |sum a_n f(n)|^2 = sum over squarefree s of |sum_{s(n) = s} a_n|^2.
/// The table must cover N.
double exact_second_moment(const CoefficientVector& a, const FactorTable& table);

/// E |sum a_n f(n)|^2 by averaging over all 2^pi(N) sign patterns.
/// Requires pi(N) <= 20.
double enumerated_second_moment(const CoefficientVector& a);

struct MonteCarloEstimate {
    double estimate = 0;
    double standard_error = 0;
    std::uint64_t trials = 0;
};

/// Mean of |sum a_n f(n)|^2 over independent ensembles; trial t uses the
/// ensemble seeded by splitmix64(seed + t).
MonteCarloEstimate mc_second_moment(const CoefficientVector& a, std::uint64_t trials,
                                    std::uint64_t seed, const FactorTable& table);

/// exact_second_moment(a) + eta_len^{-1/2} (sum |a_n| sqrt(s(n)))^2, where
/// eta_len is the realised interval length standing in for Q^eta.
double rhs_fact3(const CoefficientVector& a, std::uint64_t eta_len, const FactorTable& table);

}  // namespace charsum
