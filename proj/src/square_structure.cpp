#include "charsum/square_structure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace charsum {

OffsetTuple::OffsetTuple(std::vector<std::int64_t> entries, std::int64_t h)
    : entries_(std::move(entries)), h_(h)
{
    if (h < 1)
        throw std::invalid_argument("OffsetTuple: h must be >= 1");
    for (std::int64_t a : entries_)
        if (a < 1 || a > h)
            throw std::invalid_argument("OffsetTuple: entry " + std::to_string(a) +
                                        " outside [1, " + std::to_string(h) + "]");
}

TupleReduction reduce_tuple(std::span<const std::int64_t> alpha)
{
    std::vector<char> alive(alpha.size(), 1);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (!alive[i])
            continue;
        for (std::size_t j = i + 1; j < alpha.size(); ++j) {
            if (alive[j] && alpha[j] == alpha[i]) {
                alive[i] = alive[j] = 0;
                break;
            }
        }
    }
    TupleReduction out;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        if (alive[i])
            out.gamma.push_back(alpha[i]);
    out.k = out.gamma.size() / 2;
    return out;
}

bool shifted_product_is_square(std::uint64_t m, std::span<const std::int64_t> offsets,
                               const FactorTable& table)
{
    std::vector<std::uint32_t> odd;
    for (std::int64_t a : offsets) {
        const std::int64_t v = static_cast<std::int64_t>(m) + a;
        if (v < 1)
            throw std::invalid_argument("shifted_product_is_square: factor m + offset must be >= 1");
        table.odd_primes_of(static_cast<std::uint64_t>(v), odd);
    }
    // square iff every prime has even total exponent parity
    std::sort(odd.begin(), odd.end());
    for (std::size_t i = 0; i < odd.size();) {
        std::size_t j = i;
        while (j < odd.size() && odd[j] == odd[i])
            ++j;
        if ((j - i) % 2 == 1)
            return false;
        i = j;
    }
    return true;
}

SquarePair square_iff_reduced(std::uint64_t m, const OffsetTuple& alpha, const FactorTable& table)
{
    if (m < 1)
        throw std::invalid_argument("square_iff_reduced: m must be >= 1");
    const TupleReduction red = reduce_tuple(alpha);
    return {shifted_product_is_square(m, alpha.entries(), table),
            shifted_product_is_square(m, red.gamma, table)};
}

std::uint64_t k_count_bruteforce(unsigned r, std::uint64_t h)
{
    if (h < 1)
        throw std::invalid_argument("k_count_bruteforce: h must be >= 1");
    const unsigned len = 2 * r;
    std::uint64_t total = 1;
    for (unsigned i = 0; i < len; ++i) {
        if (total > bruteforce_budget / h)
            throw std::length_error("k_count_bruteforce: h^(2r) exceeds enumeration budget");
        total *= h;
    }

    std::vector<std::uint64_t> digit(len, 0);
    std::vector<unsigned> multiplicity(h, 0);
    multiplicity[0] = len;
    unsigned odd_values = len % 2;   // values with odd multiplicity
    std::uint64_t count = 0;
    for (std::uint64_t step = 0; step < total; ++step) {
        if (odd_values == 0)
            ++count;
        // odometer increment, tracking parities incrementally
        for (unsigned pos = 0; pos < len; ++pos) {
            auto bump = [&](std::uint64_t v, int delta) {
                multiplicity[v] += delta;
                odd_values += (multiplicity[v] % 2 == 1) ? 1 : -1;
            };
            bump(digit[pos], -1);
            if (++digit[pos] < h) {
                bump(digit[pos], +1);
                break;
            }
            digit[pos] = 0;
            bump(0, +1);
        }
    }
    return count;
}

namespace {

BigInt binomial(std::uint64_t n, unsigned k)
{
    if (k > n)
        return 0;
    BigInt b = 1;
    for (unsigned i = 0; i < k; ++i) {
        b *= n - i;
        b /= i + 1;
    }
    return b;
}

BigInt double_factorial_odd(unsigned r)
{
    BigInt m = 1;
    for (unsigned k = 1; k < 2 * r; k += 2)
        m *= k;
    return m;
}

}  // namespace

BigInt k_count_exact(unsigned r, std::uint64_t h)
{
    if (r > 12)
        throw std::invalid_argument("k_count_exact: r must be <= 12");
    if (h < 1 || h > 1'000'000)
        throw std::invalid_argument("k_count_exact: h must lie in [1, 10^6]");
    if (r == 0)
        return 1;

    // words[j][n]: words of length 2n over j fixed letters, each letter used a
    // positive even number of times. Adding a letter used 2t times chooses its
    // 2t positions among 2n.
    std::vector<std::vector<BigInt>> binom2(2 * r + 1, std::vector<BigInt>(2 * r + 1, 0));
    for (unsigned n = 0; n <= 2 * r; ++n) {
        binom2[n][0] = 1;
        for (unsigned k = 1; k <= n; ++k)
            binom2[n][k] = binom2[n - 1][k - 1] + (k <= n - 1 ? binom2[n - 1][k] : BigInt(0));
    }
    std::vector<std::vector<BigInt>> words(r + 1, std::vector<BigInt>(r + 1, 0));
    words[0][0] = 1;
    for (unsigned j = 1; j <= r; ++j)
        for (unsigned n = j; n <= r; ++n)
            for (unsigned t = 1; t <= n - (j - 1); ++t)
                words[j][n] += binom2[2 * n][2 * t] * words[j - 1][n - t];

    BigInt K = 0;
    for (unsigned j = 1; j <= r; ++j)
        K += binomial(h, j) * words[j][r];
    return K;
}

KThetaRecord theta_extract(unsigned r, std::uint64_t h)
{
    if (r < 1 || r > 12)
        throw std::invalid_argument("theta_extract: r must lie in [1, 12]");
    if (h < r)
        throw std::invalid_argument("theta_extract: requires r <= h");

    KThetaRecord rec;
    rec.r = r;
    rec.h = h;
    rec.K = k_count_exact(r, h);
    const BigInt mu = double_factorial_odd(r);
    BigInt falling = 1, power = 1;
    for (unsigned i = 0; i < r; ++i) {
        falling *= h - i;
        power *= h;
    }
    rec.lower = mu * falling;
    rec.upper = mu * power;
    if (rec.K < rec.lower || rec.K > rec.upper)
        throw InvariantViolation("theta_extract: K(r, h) outside its sandwich for r = " +
                                 std::to_string(r) + ", h = " + std::to_string(h));

    const long double ratio = rec.K.convert_to<long double>() / mu.convert_to<long double>();
    const long double root = std::pow(ratio, 1.0L / static_cast<long double>(r));
    rec.theta = static_cast<double>((static_cast<long double>(h) - root) / r);
    if (rec.theta < -1e-9 || rec.theta > 1 + 1e-9)
        throw InvariantViolation("theta_extract: theta outside [0, 1]");
    rec.theta = std::clamp(rec.theta, 0.0, 1.0);
    return rec;
}

SquareValueCount count_square_values(std::span<const std::int64_t> gamma, std::uint64_t M,
                                     const FactorTable& table)
{
    std::set<std::int64_t> seen;
    std::int64_t max_gamma = 0;
    for (std::int64_t g : gamma) {
        if (g < 0)
            throw std::invalid_argument("count_square_values: offsets must be nonnegative");
        if (!seen.insert(g).second)
            throw std::invalid_argument("count_square_values: offsets must be distinct");
        max_gamma = std::max(max_gamma, g);
    }
    if (M + static_cast<std::uint64_t>(max_gamma) > table.limit())
        throw std::length_error("count_square_values: M + max offset exceeds factor table");

    SquareValueCount out;
    for (std::uint64_t m = 1; m <= M; ++m) {
        if (shifted_product_is_square(m, gamma, table)) {
            ++out.count;
            out.witnesses.push_back(m);
        }
    }
    return out;
}

std::vector<std::uint64_t> k1_solutions_divisor_method(std::uint64_t Z, std::uint64_t M)
{
    if (Z < 1)
        throw std::invalid_argument("k1_solutions_divisor_method: Z must be >= 1");
    if (Z > (std::uint64_t{1} << 31))
        throw std::invalid_argument("k1_solutions_divisor_method: Z too large");

    // divisors of Z^2 from the factorisation of Z with doubled exponents
    std::vector<std::uint64_t> divisors{1};
    for (auto [p, e] : factorize_trial(Z)) {
        const std::size_t n = divisors.size();
        std::uint64_t pk = 1;
        for (unsigned k = 1; k <= 2 * e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < n; ++i)
                divisors.push_back(divisors[i] * pk);
        }
    }

    const std::uint64_t Z2 = Z * Z;
    std::vector<std::uint64_t> out;
    for (std::uint64_t d : divisors) {
        if (d >= Z)   // d = Z gives D = 0
            continue;
        const std::uint64_t e = Z2 / d;
        const std::uint64_t sum = d + e;   // > 2Z since d < Z < e
        if ((sum - 2 * Z) % 4 != 0 || (e - d) % 4 != 0)
            continue;
        const std::uint64_t D = (sum - 2 * Z) / 4;
        if (D >= 1 && D <= M)
            out.push_back(D);
    }
    std::sort(out.begin(), out.end());
    return out;
}

EvertseBound evertse_bound(std::span<const std::int64_t> gamma)
{
    std::set<std::int64_t> distinct(gamma.begin(), gamma.end());
    if (distinct.size() != gamma.size())
        throw std::invalid_argument("evertse_bound: offsets must be distinct");
    if (gamma.size() < 3)
        throw std::invalid_argument("evertse_bound: need at least 3 distinct offsets");

    EvertseBound out;
    out.discriminant = 1;
    std::set<std::uint64_t> primes;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        for (std::size_t j = i + 1; j < gamma.size(); ++j) {
            const i128 diff = static_cast<i128>(gamma[i]) - gamma[j];
            const auto mag = static_cast<std::uint64_t>(diff < 0 ? -diff : diff);
            out.discriminant *= BigInt(mag) * mag;
            for (auto [p, e] : factorize_trial(mag))
                primes.insert(p);
        }
    }
    out.omega = static_cast<unsigned>(primes.size());
    out.exponent = 13 + 9 * out.omega;
    out.log7_value = out.exponent;
    out.value = boost::multiprecision::pow(BigInt(7), out.exponent);
    return out;
}

}  // namespace charsum
