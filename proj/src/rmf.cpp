#include "charsum/rmf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace charsum {

namespace {

std::vector<CoefficientVector::value_type> to_complex(const std::vector<double>& real)
{
    return {real.begin(), real.end()};
}

}  // namespace

CoefficientVector::CoefficientVector(std::vector<double> real) : CoefficientVector(to_complex(real)) {}

CoefficientVector::CoefficientVector(std::vector<value_type> values) : values_(std::move(values))
{
    for (const auto& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("CoefficientVector: entries must be finite");
}

bool CoefficientVector::is_zero() const
{
    return std::all_of(values_.begin(), values_.end(), [](const value_type& v) { return v == value_type{}; });
}

CoefficientVector CoefficientVector::scaled(value_type c) const
{
    std::vector<value_type> out(values_);
    for (auto& v : out)
        v *= c;
    return CoefficientVector(std::move(out));
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

int rademacher_sign(std::uint64_t seed, std::uint64_t p)
{
    return (splitmix64(splitmix64(seed) ^ p) & 1) ? 1 : -1;
}

RmfEnsemble::RmfEnsemble(std::uint64_t seed, const FactorTable& table) : seed_(seed)
{
    values_.assign(table.limit() + 1, 0);
    if (table.limit() >= 1)
        values_[1] = 1;
    for (std::uint64_t n = 2; n <= table.limit(); ++n) {
        const std::uint32_t p = table.smallest_prime_factor(n);
        values_[n] = static_cast<std::int8_t>(rademacher_sign(seed, p) * values_[n / p]);
    }
}

RmfEnsemble rmf_sample(std::uint64_t seed, const FactorTable& table)
{
    return RmfEnsemble(seed, table);
}

namespace {

void require_table(const CoefficientVector& a, const FactorTable& table)
{
    if (a.size() > table.limit())
        throw std::length_error("coefficient vector longer than factor table");
}

// group sums A_s = sum_{s(n) = s} a_n, keyed by squarefree part
std::map<std::uint64_t, std::complex<long double>> squarefree_groups(const CoefficientVector& a,
                                                                     const FactorTable& table)
{
    std::map<std::uint64_t, std::complex<long double>> groups;
    for (std::size_t n = 1; n <= a.size(); ++n) {
        const auto v = a.at(n);
        if (v == CoefficientVector::value_type{})
            continue;
        const std::uint64_t s = n == 1 ? 1 : table.squarefree_part(n);
        groups[s] += std::complex<long double>(v.real(), v.imag());
    }
    return groups;
}

}  // namespace

double exact_second_moment(const CoefficientVector& a, const FactorTable& table)
{
    require_table(a, table);
    long double total = 0;
    for (const auto& [s, sum] : squarefree_groups(a, table))
        total += std::norm(sum);
    return static_cast<double>(total);
}

double enumerated_second_moment(const CoefficientVector& a)
{
    const auto primes = primes_up_to(a.size());
    if (primes.size() > 20)
        throw std::length_error("enumerated_second_moment: too many primes to enumerate");
    std::vector<Factorization> factors(a.size() + 1);
    for (std::size_t n = 2; n <= a.size(); ++n)
        factors[n] = factorize_trial(n);

    const std::uint64_t patterns = std::uint64_t{1} << primes.size();
    long double total = 0;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        std::complex<long double> x = 0;
        for (std::size_t n = 1; n <= a.size(); ++n) {
            int f = 1;
            for (auto [p, e] : factors[n]) {
                const auto idx = std::lower_bound(primes.begin(), primes.end(), p) - primes.begin();
                const int sign = (mask >> idx) & 1 ? -1 : 1;
                if (e % 2 == 1)
                    f *= sign;
            }
            const auto v = a.at(n);
            x += static_cast<long double>(f) * std::complex<long double>(v.real(), v.imag());
        }
        total += std::norm(x);
    }
    return static_cast<double>(total / static_cast<long double>(patterns));
}

MonteCarloEstimate mc_second_moment(const CoefficientVector& a, std::uint64_t trials,
                                    std::uint64_t seed, const FactorTable& table)
{
    if (trials < 2)
        throw std::invalid_argument("mc_second_moment: need at least 2 trials");
    require_table(a, table);

    struct Group {
        std::vector<std::uint64_t> primes;
        std::complex<long double> sum;
    };
    std::vector<Group> groups;
    for (const auto& [s, sum] : squarefree_groups(a, table)) {
        Group g{{}, sum};
        if (s > 1)
            for (auto [p, e] : table.factorize(s))
                g.primes.push_back(p);
        groups.push_back(std::move(g));
    }

    // Welford accumulation of |X|^2
    long double mean = 0, m2 = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::uint64_t ens = splitmix64(seed + t);
        std::complex<long double> x = 0;
        for (const auto& g : groups) {
            int f = 1;
            for (std::uint64_t p : g.primes)
                f *= rademacher_sign(ens, p);
            x += static_cast<long double>(f) * g.sum;
        }
        const long double v = std::norm(x);
        const long double delta = v - mean;
        mean += delta / static_cast<long double>(t + 1);
        m2 += delta * (v - mean);
    }
    MonteCarloEstimate out;
    out.trials = trials;
    out.estimate = static_cast<double>(mean);
    const long double var = m2 / static_cast<long double>(trials - 1);
    out.standard_error = static_cast<double>(std::sqrt(var / static_cast<long double>(trials)));
    return out;
}

double rhs_fact3(const CoefficientVector& a, std::uint64_t eta_len, const FactorTable& table)
{
    if (eta_len < 1)
        throw std::invalid_argument("rhs_fact3: eta_len must be >= 1");
    require_table(a, table);
    long double weighted = 0;
    for (std::size_t n = 1; n <= a.size(); ++n) {
        const double mag = std::abs(a.at(n));
        if (mag == 0)
            continue;
        const std::uint64_t s = n == 1 ? 1 : table.squarefree_part(n);
        weighted += mag * std::sqrt(static_cast<long double>(s));
    }
    return exact_second_moment(a, table) +
           static_cast<double>(weighted * weighted / std::sqrt(static_cast<long double>(eta_len)));
}

}  // namespace charsum
