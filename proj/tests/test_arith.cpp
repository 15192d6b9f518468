#include <doctest.h>

#include <cmath>
#include <random>

#include "charsum/arith.hpp"
#include "oracles.hpp"

using namespace charsum;

TEST_CASE("prime modulus validation")
{
    CHECK_NOTHROW(PrimeModulus(3));
    CHECK_NOTHROW(PrimeModulus(10000019));
    CHECK_THROWS_AS(PrimeModulus(2), std::invalid_argument);
    CHECK_THROWS_AS(PrimeModulus(1), std::invalid_argument);
    CHECK_THROWS_AS(PrimeModulus(15), std::invalid_argument);
    CHECK_THROWS_AS(PrimeModulus(0), std::invalid_argument);
    CHECK_THROWS_AS(PrimeModulus(std::uint64_t{1} << 63), std::invalid_argument);

    const PrimeModulus q(7);
    CHECK(q.half() == 3);
    CHECK(q.reduce(-1) == 6);
    CHECK(q.reduce(-14) == 0);
    CHECK(q.reduce(23) == 2);
}

TEST_CASE("legendre symbol small values")
{
    const PrimeModulus q7(7), q11(11);
    CHECK(jacobi(2, q7) == 1);
    CHECK(jacobi(3, q7) == -1);
    CHECK(jacobi(0, q7) == 0);
    CHECK(jacobi(14, q7) == 0);
    CHECK(jacobi(-1, q7) == -1);
    CHECK(jacobi(-1, PrimeModulus(13)) == 1);
    CHECK(jacobi(10, q11) == -1);
    CHECK(euler_criterion(10, q11) == -1);
    CHECK(jacobi(2, q11) == -1);
}

TEST_CASE("jacobi agrees with square-root search and euler criterion")
{
    for (std::uint64_t q = 3; q < 400; q += 2) {
        if (!oracle::is_prime(q))
            continue;
        const PrimeModulus m(q);
        for (std::int64_t n = -5; n < static_cast<std::int64_t>(q) + 5; ++n) {
            const int ref = oracle::legendre_by_search(n, q);
            REQUIRE(jacobi(n, m) == ref);
            REQUIRE(euler_criterion(n, m) == ref);
        }
    }
}

TEST_CASE("jacobi symbol for composite moduli")
{
    // (a/n) = prod over p | n of (a/p)^e
    for (std::uint64_t n = 1; n < 300; n += 2) {
        const auto f = oracle::factor(n);
        for (std::uint64_t a = 0; a < 2 * n; ++a) {
            int ref = 1;
            for (auto [p, e] : f)
                for (unsigned i = 0; i < e; ++i)
                    ref *= oracle::legendre_by_search(static_cast<std::int64_t>(a), p);
            REQUIRE(jacobi_symbol(a, n) == ref);
        }
    }
}

TEST_CASE("symbol properties on a large prime")
{
    const PrimeModulus q(1'000'000'007);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> dist(1, 2'000'000'000);
    for (int i = 0; i < 2000; ++i) {
        const auto a = dist(rng), b = dist(rng);
        const auto ab = static_cast<std::int64_t>(mul_mod(q.reduce(a), q.reduce(b), q.value()));
        CHECK(jacobi(ab, q) == jacobi(a, q) * jacobi(b, q));
        CHECK(jacobi(a + static_cast<std::int64_t>(q.value()), q) == jacobi(a, q));
        CHECK(jacobi(a, q) == euler_criterion(a, q));
    }
}

TEST_CASE("primality")
{
    for (std::uint64_t n = 0; n < 20000; ++n)
        REQUIRE(is_prime(n) == oracle::is_prime(n));
    CHECK(is_prime((std::uint64_t{1} << 61) - 1));
    CHECK(is_prime(18446744073709551557ULL));
    CHECK_FALSE(is_prime(3215031751ULL));   // strong pseudoprime to bases 2, 3, 5, 7
    CHECK_FALSE(is_prime(3825123056546413051ULL));
    CHECK_FALSE(is_prime(18446744073709551615ULL));
}

TEST_CASE("integer square roots")
{
    for (std::uint64_t n = 0; n < 100000; ++n) {
        const auto r = isqrt(n);
        REQUIRE(r * r <= n);
        REQUIRE((r + 1) * (r + 1) > n);
        REQUIRE(is_perfect_square(n) == oracle::is_square(n));
    }
    const std::uint64_t big = 4294967295ULL;
    CHECK(isqrt(big * big) == big);
    CHECK(isqrt(big * big - 1) == big - 1);
    CHECK(isqrt(~std::uint64_t{0}) == big);
    const u128 wide = static_cast<u128>(~std::uint64_t{0}) * ~std::uint64_t{0};
    CHECK(isqrt(wide) == ~std::uint64_t{0});
    CHECK(is_perfect_square(wide));
    CHECK_FALSE(is_perfect_square(wide + 1));
}

TEST_CASE("factorisation helpers")
{
    const FactorTable table(100000);
    for (std::uint64_t n = 1; n <= 100000; ++n) {
        const auto ref = oracle::factor(n);
        const auto f = table.factorize(n);
        REQUIRE(f.size() == ref.size());
        std::uint64_t tau_ref = 1;
        for (auto [p, e] : ref)
            tau_ref *= e + 1;
        REQUIRE(table.squarefree_part(n) == oracle::squarefree_part(n));
        REQUIRE(table.omega(n) == ref.size());
        REQUIRE(table.tau(n) == tau_ref);
        if (n % 997 == 0) {
            CHECK(factorize_trial(n) == f);
            CHECK(omega(n) == ref.size());
            CHECK(tau(n) == tau_ref);
        }
    }
    CHECK(table.squarefree_part(12) == 3);
    CHECK(table.squarefree_part(1) == 1);
    CHECK(table.squarefree_part(72) == 2);
    CHECK(table.smallest_prime_factor(91) == 7);
    CHECK_THROWS_AS(table.factorize(100001), std::out_of_range);
    CHECK_THROWS_AS(table.factorize(0), std::out_of_range);

    const auto f = factorize_trial(600851475143ULL);
    CHECK(f == Factorization{{71, 1}, {839, 1}, {1471, 1}, {6857, 1}});
    CHECK(squarefree_part(factorize_trial(2ULL * 2 * 3 * 5 * 5 * 7)) == 21);
}

TEST_CASE("omega grows slowly")
{
    const FactorTable table(1000000);
    for (std::uint64_t n = 16; n <= 1000000; ++n) {
        const double l = std::log(static_cast<double>(n));
        REQUIRE(table.omega(n) <= 1.6 * l / std::log(l));
    }
}

TEST_CASE("odd-exponent primes")
{
    const FactorTable table(1000);
    std::vector<std::uint32_t> out;
    table.odd_primes_of(2 * 2 * 2 * 3 * 3 * 5, out);
    CHECK(out == std::vector<std::uint32_t>{2, 5});
}

TEST_CASE("sieves")
{
    CHECK(primes_up_to(30) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(primes_up_to(1).empty());
    CHECK(primes_in_interval(101, 200).size() == 21);
    CHECK(primes_in_interval(2, 2) == std::vector<std::uint64_t>{2});
    CHECK(primes_in_interval(1000000, 2000000).size() == 70435);
    CHECK(primes_in_interval(1000000, 1010000).size() == 753);
    CHECK(primes_in_interval(24, 28).empty());
    CHECK_THROWS_AS(primes_in_interval(1, 10), std::invalid_argument);
    CHECK_THROWS_AS(primes_in_interval(20, 10), std::invalid_argument);
    CHECK_THROWS_AS(primes_in_interval(2, 1000, 10), std::length_error);

    // crosses several segments and starts mid-segment
    const std::uint64_t lo = 99'000'000'000ULL, hi = lo + 600'000;
    const auto ps = primes_in_interval(lo, hi);
    std::size_t idx = 0;
    for (std::uint64_t n = lo; n <= hi; ++n)
        if (is_prime(n))
            REQUIRE(ps.at(idx++) == n);
    CHECK(idx == ps.size());

    for (std::uint64_t start : {2ULL, 3ULL, 97ULL, 1000ULL})
        CHECK(primes_in_interval(start, start + 3000) == oracle::primes_naive(start, start + 3000));
}

TEST_CASE("prime density check")
{
    const auto pd = prime_density_check(1000000, 0.5);
    CHECK(pd.length == 1000);
    CHECK(pd.count == 75);
    CHECK(pd.comparator == doctest::Approx(1000.0 / std::log(1e6)));
    CHECK(pd.ratio == doctest::Approx(75.0 / pd.comparator));
    CHECK_THROWS_AS(prime_density_check(50, 0.5), std::invalid_argument);
}
