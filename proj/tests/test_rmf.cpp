#include <doctest.h>

#include <cmath>
#include <random>

#include "charsum/rmf.hpp"
#include "oracles.hpp"

using namespace charsum;

namespace {

// E|sum a_n f(n)|^2 by brute force over sign patterns on the primes <= N
double enumerate(const std::vector<std::complex<double>>& a)
{
    const std::size_t N = a.size();
    std::vector<std::uint64_t> ps;
    for (std::uint64_t p = 2; p <= N; ++p)
        if (oracle::is_prime(p))
            ps.push_back(p);
    double total = 0;
    for (std::uint64_t mask = 0; mask < (1ULL << ps.size()); ++mask) {
        std::complex<double> s = 0;
        for (std::size_t n = 1; n <= N; ++n) {
            int f = 1;
            for (auto [p, e] : oracle::factor(n)) {
                const auto idx = std::find(ps.begin(), ps.end(), p) - ps.begin();
                if ((mask >> idx) & 1 && e % 2)
                    f = -f;
            }
            s += a[n - 1] * static_cast<double>(f);
        }
        total += std::norm(s);
    }
    return total / static_cast<double>(1ULL << ps.size());
}

}  // namespace

TEST_CASE("coefficient vectors")
{
    const CoefficientVector a(std::vector<double>{1, 0, -2});
    CHECK(a.size() == 3);
    CHECK(a.at(3) == std::complex<double>(-2, 0));
    CHECK_FALSE(a.is_zero());
    CHECK(CoefficientVector(std::vector<double>{0, 0}).is_zero());
    CHECK(a.scaled(2.0).at(3) == std::complex<double>(-4, 0));
    CHECK_THROWS_AS(CoefficientVector(std::vector<double>{1, NAN}), std::invalid_argument);
    CHECK_THROWS_AS(CoefficientVector(std::vector<double>{INFINITY}), std::invalid_argument);
}

TEST_CASE("sampled functions are completely multiplicative")
{
    const FactorTable table(100000);
    std::mt19937_64 rng(5);
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xdeadbeefULL}) {
        const auto f = rmf_sample(seed, table);
        CHECK(f.limit() == 100000);
        CHECK(f(1) == 1);
        CHECK(f(4) == 1);
        CHECK(f(12) == f(3));
        std::uniform_int_distribution<std::uint64_t> pick(1, 316);
        for (int t = 0; t < 10000; ++t) {
            const auto m = pick(rng), n = pick(rng);
            REQUIRE(f(m * n) == f(m) * f(n));
        }
        for (std::uint64_t n = 1; n <= 10000; ++n) {
            REQUIRE(f(n) == f(oracle::squarefree_part(n)));
            REQUIRE(std::abs(f(n)) == 1);
        }
        for (std::uint64_t p : {2ULL, 3ULL, 99991ULL})
            CHECK(f(p) == rademacher_sign(seed, p));
    }
    // different seeds give different ensembles
    const auto f0 = rmf_sample(0, table), f1 = rmf_sample(1, table);
    int differ = 0;
    for (std::uint64_t p : primes_up_to(1000))
        differ += f0(p) != f1(p);
    CHECK(differ > 50);
}

TEST_CASE("prime signs are balanced")
{
    long long sum = 0;
    const auto ps = primes_up_to(1000000);
    for (auto p : ps)
        sum += rademacher_sign(2024, p);
    CHECK(std::fabs(static_cast<double>(sum)) < 5 * std::sqrt(static_cast<double>(ps.size())));
}

TEST_CASE("orthogonality over all sign patterns")
{
    // E|1 + f(n)|^2 = 2 + 2 E f(n) for n > 1, with the primes <= 12 enumerated
    for (std::size_t n = 2; n <= 12; ++n) {
        std::vector<double> b(12, 0.0);
        b[0] = 1;
        b[n - 1] = 1;
        const double ef = (enumerated_second_moment(CoefficientVector(b)) - 2) / 2;
        CHECK(ef == doctest::Approx(oracle::is_square(n) ? 1.0 : 0.0));
    }
}

TEST_CASE("exact second moment")
{
    const FactorTable table(1000);
    CHECK(exact_second_moment(CoefficientVector(std::vector<double>{1, 1, 1, 1}), table) == 6);
    CHECK(exact_second_moment(CoefficientVector(std::vector<double>{1}), table) == 1);

    std::vector<double> squares(100, 0.0);
    double total = 0;
    for (int k = 1; k * k <= 100; ++k) {
        squares[k * k - 1] = k;
        total += k;
    }
    CHECK(exact_second_moment(CoefficientVector(squares), table) == doctest::Approx(total * total));

    const CoefficientVector c(std::vector<std::complex<double>>{{1, 1}, {0, 2}, {3, 0}, {0, -1}});
    // groups: s=1 {1,4}: (1+i) + (-i) = 1; s=2: 2i; s=3: 3
    CHECK(exact_second_moment(c, table) == doctest::Approx(1 + 4 + 9));
    CHECK(enumerated_second_moment(c) == doctest::Approx(14));
}

TEST_CASE("exact second moment matches enumeration on random vectors")
{
    const FactorTable table(100);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> len(1, 12);
    std::normal_distribution<double> coef(0, 1);
    for (int t = 0; t < 100; ++t) {
        std::vector<std::complex<double>> a(len(rng));
        for (auto& v : a)
            v = {coef(rng), t % 3 == 0 ? coef(rng) : 0.0};
        const CoefficientVector cv(a);
        const double exact = exact_second_moment(cv, table);
        REQUIRE(exact == doctest::Approx(enumerate(a)).epsilon(1e-12));
        REQUIRE(exact == doctest::Approx(enumerated_second_moment(cv)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(enumerated_second_moment(CoefficientVector(std::vector<double>(100, 1.0))), std::length_error);
}

TEST_CASE("monte carlo second moment")
{
    const FactorTable table(1000);
    const auto est = mc_second_moment(CoefficientVector(std::vector<double>{1, 1, 1, 1}), 100000, 9, table);
    CHECK(est.trials == 100000);
    CHECK(est.standard_error > 0);
    CHECK(std::fabs(est.estimate - 6) <= 5 * est.standard_error);

    const auto one = mc_second_moment(CoefficientVector(std::vector<double>{1}), 50, 9, table);
    CHECK(one.estimate == 1);
    CHECK(one.standard_error == 0);

    const auto again = mc_second_moment(CoefficientVector(std::vector<double>{1, 1, 1, 1}), 100000, 9, table);
    CHECK(again.estimate == est.estimate);
    CHECK_THROWS_AS(mc_second_moment(CoefficientVector(std::vector<double>{1}), 1, 9, table),
                    std::invalid_argument);
}

TEST_CASE("fact3 right-hand side")
{
    const FactorTable table(1000);
    CHECK(rhs_fact3(CoefficientVector(std::vector<double>{1}), 100, table) == doctest::Approx(1.1));
    const double s = 1 + std::sqrt(2.0) + std::sqrt(3.0) + 1;
    CHECK(rhs_fact3(CoefficientVector(std::vector<double>{1, 1, 1, 1}), 10000, table) ==
          doctest::Approx(6 + s * s / 100));
    CHECK(rhs_fact3(CoefficientVector(std::vector<double>{0, 0, 0}), 10000, table) == 0);
    CHECK_THROWS_AS(rhs_fact3(CoefficientVector(std::vector<double>{1}), 0, table), std::invalid_argument);
}
