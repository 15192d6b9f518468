#include "charsum/arith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace charsum {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m)
{
    if (m == 1)
        return 0;
    std::uint64_t result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1)
            result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    static constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t p : bases) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    for (std::uint64_t a : bases) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    // r*r may overflow near 2^64; compare through division instead.
    while (r > 0 && r > n / r)
        --r;
    while (r + 1 <= n / (r + 1))
        ++r;
    return r;
}

std::uint64_t isqrt(u128 n)
{
    if (n <= std::numeric_limits<std::uint64_t>::max())
        return isqrt(static_cast<std::uint64_t>(n));
    // the root is below 2^64, so clamp before squaring
    const u128 top = std::numeric_limits<std::uint64_t>::max();
    u128 r = std::min<u128>(top, static_cast<u128>(std::sqrt(static_cast<long double>(n))));
    while (r * r > n)
        --r;
    while (r < top && (r + 1) * (r + 1) <= n)
        ++r;
    return static_cast<std::uint64_t>(r);
}

bool is_perfect_square(std::uint64_t n)
{
    std::uint64_t r = isqrt(n);
    return r * r == n;
}

bool is_perfect_square(u128 n)
{
    u128 r = isqrt(n);
    return r * r == n;
}

PrimeModulus::PrimeModulus(std::uint64_t q) : q_(q)
{
    if (q < 3 || q % 2 == 0)
        throw std::invalid_argument("modulus must be an odd prime >= 3, got " + std::to_string(q));
    if (q >= (std::uint64_t{1} << 63))
        throw std::invalid_argument("modulus must be below 2^63");
    if (!is_prime(q))
        throw std::invalid_argument("modulus is not prime: " + std::to_string(q));
}

std::uint64_t PrimeModulus::reduce(std::int64_t n) const
{
    auto qs = static_cast<std::int64_t>(q_);
    std::int64_t r = n % qs;
    if (r < 0)
        r += qs;
    return static_cast<std::uint64_t>(r);
}

int jacobi_symbol(std::uint64_t a, std::uint64_t n)
{
    if (n == 0 || n % 2 == 0)
        throw std::invalid_argument("jacobi_symbol: n must be odd and positive");
    a %= n;
    int t = 1;
    while (a != 0) {
        int z = std::countr_zero(a);
        a >>= z;
        // (2/n) = -1 iff n = 3, 5 (mod 8)
        if ((z & 1) && ((n & 7) == 3 || (n & 7) == 5))
            t = -t;
        // reciprocity
        if ((a & 3) == 3 && (n & 3) == 3)
            t = -t;
        std::swap(a, n);
        a %= n;
    }
    return n == 1 ? t : 0;
}

int jacobi(std::int64_t n, const PrimeModulus& q)
{
    return jacobi_symbol(q.reduce(n), q.value());
}

int euler_criterion(std::int64_t n, const PrimeModulus& q)
{
    std::uint64_t r = pow_mod(q.reduce(n), q.half(), q.value());
    if (r == 0)
        return 0;
    if (r == 1)
        return 1;
    if (r == q.value() - 1)
        return -1;
    throw InvariantViolation("euler_criterion: result outside {0, 1, q-1}");
}

Factorization factorize_trial(std::uint64_t n)
{
    Factorization out;
    if (n == 0)
        throw std::invalid_argument("factorize_trial: n must be positive");
    auto strip = [&](std::uint64_t p) {
        if (n % p != 0)
            return;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (std::uint64_t p = 5; p <= n / p; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

std::uint64_t squarefree_part(const Factorization& f)
{
    std::uint64_t s = 1;
    for (auto [p, e] : f)
        if (e % 2 == 1)
            s *= p;
    return s;
}

unsigned omega(const Factorization& f)
{
    return static_cast<unsigned>(f.size());
}

std::uint64_t tau(const Factorization& f)
{
    std::uint64_t t = 1;
    for (auto [p, e] : f)
        t *= e + 1;
    return t;
}

unsigned omega(std::uint64_t n)
{
    return omega(factorize_trial(n));
}

std::uint64_t tau(std::uint64_t n)
{
    return tau(factorize_trial(n));
}

FactorTable::FactorTable(std::uint64_t limit) : limit_(limit)
{
    if (limit > max_limit)
        throw std::length_error("FactorTable limit exceeds " + std::to_string(max_limit));
    spf_.assign(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf_[i] != 0)
            continue;
        spf_[i] = static_cast<std::uint32_t>(i);
        if (i > limit / i)
            continue;
        for (std::uint64_t j = i * i; j <= limit; j += i)
            if (spf_[j] == 0)
                spf_[j] = static_cast<std::uint32_t>(i);
    }
}

void FactorTable::check(std::uint64_t n) const
{
    if (n == 0 || n > limit_)
        throw std::out_of_range("FactorTable: " + std::to_string(n) + " outside [1, " +
                                std::to_string(limit_) + "]");
}

std::uint32_t FactorTable::smallest_prime_factor(std::uint64_t n) const
{
    check(n);
    if (n < 2)
        throw std::out_of_range("FactorTable: 1 has no prime factor");
    return spf_[n];
}

Factorization FactorTable::factorize(std::uint64_t n) const
{
    check(n);
    Factorization out;
    while (n > 1) {
        std::uint32_t p = spf_[n];
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    return out;
}

std::uint64_t FactorTable::squarefree_part(std::uint64_t n) const
{
    check(n);
    std::uint64_t s = 1;
    while (n > 1) {
        std::uint32_t p = spf_[n];
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e & 1)
            s *= p;
    }
    return s;
}

unsigned FactorTable::omega(std::uint64_t n) const
{
    return charsum::omega(factorize(n));
}

std::uint64_t FactorTable::tau(std::uint64_t n) const
{
    return charsum::tau(factorize(n));
}

void FactorTable::odd_primes_of(std::uint64_t n, std::vector<std::uint32_t>& out) const
{
    check(n);
    while (n > 1) {
        std::uint32_t p = spf_[n];
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e & 1)
            out.push_back(p);
    }
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n)
{
    std::vector<std::uint64_t> primes;
    if (n < 2)
        return primes;
    std::vector<char> composite(n + 1, 0);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i])
            continue;
        primes.push_back(i);
        if (i > n / i)
            continue;
        for (std::uint64_t j = i * i; j <= n; j += i)
            composite[j] = 1;
    }
    return primes;
}

std::vector<std::uint64_t> primes_in_interval(std::uint64_t lo, std::uint64_t hi,
                                              std::uint64_t budget)
{
    if (lo < 2 || lo > hi)
        throw std::invalid_argument("primes_in_interval: need 2 <= lo <= hi");
    if (hi - lo > budget)
        throw std::length_error("primes_in_interval: interval of length " +
                                std::to_string(hi - lo) + " exceeds sieve budget " +
                                std::to_string(budget));

    const std::vector<std::uint64_t> base = primes_up_to(isqrt(hi));
    constexpr std::uint64_t segment = std::uint64_t{1} << 18;
    std::vector<std::uint64_t> out;
    std::vector<char> composite;

    for (std::uint64_t seg_lo = lo;; seg_lo += segment) {
        const std::uint64_t seg_hi = std::min(hi, seg_lo + (segment - 1));
        composite.assign(seg_hi - seg_lo + 1, 0);
        for (std::uint64_t p : base) {
            if (p > seg_hi / p)
                break;
            std::uint64_t start = std::max(p * p, (seg_lo + p - 1) / p * p);
            for (std::uint64_t j = start; j <= seg_hi; j += p)
                composite[j - seg_lo] = 1;
        }
        for (std::uint64_t i = 0; i < composite.size(); ++i)
            if (!composite[i])
                out.push_back(seg_lo + i);
        if (seg_hi == hi)
            break;
    }
    return out;
}

PrimeDensity prime_density_check(std::uint64_t X, double eta, std::uint64_t budget)
{
    if (X < 100)
        throw std::invalid_argument("prime_density_check: X must be >= 100");
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("prime_density_check: eta must lie in (0, 1]");

    PrimeDensity d;
    d.X = X;
    d.eta = eta;
    const double power = std::pow(static_cast<double>(X), eta);
    // Guard against pow returning 999999.9999 for an exact integer power.
    d.length = static_cast<std::uint64_t>(std::floor(power * (1 + 1e-14)));
    if (d.length > budget)
        throw std::length_error("prime_density_check: X^eta exceeds sieve budget");
    d.count = d.length == 0 ? 0 : primes_in_interval(X + 1, X + d.length, budget).size();
    d.comparator = power / std::log(static_cast<double>(X));
    d.ratio = static_cast<double>(d.count) / d.comparator;
    return d;
}

}  // namespace charsum
