#pragma once

// Slow, obviously-correct reference implementations used only by tests.

#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
{
    unsigned __int128 r = 1, x = b % m;
    while (e) {
        if (e & 1)
            r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::uint64_t>(r);
}

inline bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

// Legendre symbol by brute-force search for a square root
inline int legendre_by_search(std::int64_t n, std::uint64_t q)
{
    const auto r = static_cast<std::uint64_t>(((n % static_cast<std::int64_t>(q)) + static_cast<std::int64_t>(q)) %
                                              static_cast<std::int64_t>(q));
    if (r == 0)
        return 0;
    for (std::uint64_t x = 1; x <= q / 2; ++x)
        if (x * x % q == r)
            return 1;
    return -1;
}

inline std::map<std::uint64_t, unsigned> factor(std::uint64_t n)
{
    std::map<std::uint64_t, unsigned> f;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            ++f[d];
            n /= d;
        }
    if (n > 1)
        ++f[n];
    return f;
}

inline std::uint64_t squarefree_part(std::uint64_t n)
{
    std::uint64_t s = 1;
    for (auto [p, e] : factor(n))
        if (e % 2)
            s *= p;
    return s;
}

inline bool is_square(unsigned __int128 n)
{
    // binary search, independent of the library's isqrt
    unsigned __int128 lo = 0, hi = 1;
    while (hi * hi <= n)
        hi *= 2;
    while (lo + 1 < hi) {
        const auto mid = (lo + hi) / 2;
        if (mid * mid <= n)
            lo = mid;
        else
            hi = mid;
    }
    return lo * lo == n;
}

inline std::vector<std::uint64_t> primes_naive(std::uint64_t lo, std::uint64_t hi)
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = lo; n <= hi; ++n)
        if (is_prime(n))
            out.push_back(n);
    return out;
}

}  // namespace oracle
