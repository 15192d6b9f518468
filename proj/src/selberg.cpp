#include "charsum/selberg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "charsum/arith.hpp"

namespace charsum {

namespace {

struct Squarefree {
    std::uint64_t d;
    std::vector<std::uint64_t> primes;
};

// squarefree products of `primes` not exceeding limit
std::vector<Squarefree> squarefree_products(const std::vector<std::uint64_t>& primes, std::uint64_t limit)
{
    std::vector<Squarefree> out{{1, {}}};
    for (std::uint64_t p : primes) {
        const std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (out[i].d > limit / p)
                continue;
            Squarefree next = out[i];
            next.d *= p;
            next.primes.push_back(p);
            out.push_back(std::move(next));
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.d < b.d; });
    return out;
}

BigRational h_weight(const std::vector<std::uint64_t>& primes)
{
    BigRational w = 1;
    for (std::uint64_t p : primes)
        w /= p - 1;
    return w;
}

BigRational lookup(const std::vector<std::pair<std::uint64_t, BigRational>>& table, std::uint64_t key)
{
    auto it = std::lower_bound(table.begin(), table.end(), key,
                               [](const auto& entry, std::uint64_t k) { return entry.first < k; });
    if (it != table.end() && it->first == key)
        return it->second;
    return 0;
}

}  // namespace

BigRational SieveSystem::lambda_at(std::uint64_t d) const
{
    return lookup(lambda_, d);
}

BigRational SieveSystem::rho_at(std::uint64_t e) const
{
    return lookup(rho_, e);
}

std::uint64_t SieveSystem::sifted_kernel(std::uint64_t n) const
{
    std::uint64_t k = 1;
    for (std::uint64_t p : primes_)
        if (n % p == 0)
            k *= p;
    return k;
}

BigRational SieveSystem::indicator_sum(std::uint64_t n) const
{
    BigRational s = 0;
    for (const auto& [e, w] : rho_)
        if (n % e == 0)
            s += w;
    return s;
}

BigRational SieveSystem::lambda_divisor_sum(std::uint64_t n) const
{
    BigRational s = 0;
    for (const auto& [d, w] : lambda_)
        if (n % d == 0)
            s += w;
    return s;
}

SieveSystem build_selberg(std::uint64_t z, std::uint64_t D)
{
    if (z < 3)
        throw std::invalid_argument("build_selberg: z must be >= 3");
    if (D > (std::uint64_t{1} << 31))
        throw std::length_error("build_selberg: level too large");

    SieveSystem sys;
    sys.z_ = z;
    sys.D_ = D;
    for (std::uint64_t p : primes_up_to(z - 1))
        if (p != 2)
            sys.primes_.push_back(p);
    if (!sys.primes_.empty() && D < sys.primes_.back())
        throw std::invalid_argument("build_selberg: level D must be >= the largest sifting prime");

    const auto support = squarefree_products(sys.primes_, D);
    if (static_cast<std::uint64_t>(support.size()) * support.size() > selberg_pair_budget)
        throw std::length_error("build_selberg: support too large to expand");

    std::vector<BigRational> h(support.size());
    for (std::size_t i = 0; i < support.size(); ++i)
        h[i] = h_weight(support[i].primes);

    BigRational G = 0;
    for (const auto& w : h)
        G += w;

    for (std::size_t i = 0; i < support.size(); ++i) {
        const auto& [d, dprimes] = support[i];
        // G_d(D / d): support elements e <= D / d coprime to d
        BigRational Gd = 0;
        for (std::size_t j = 0; j < support.size() && support[j].d <= D / d; ++j)
            if (std::gcd(support[j].d, d) == 1)
                Gd += h[j];
        BigRational lam = BigRational(d) * h[i] * Gd / G;   // d h(d) = d / phi(d)
        if (dprimes.size() % 2 == 1)
            lam = -lam;
        if (lam != 0)
            sys.lambda_.emplace_back(d, lam);
    }

    std::map<std::uint64_t, BigRational> rho;
    for (const auto& [d1, l1] : sys.lambda_)
        for (const auto& [d2, l2] : sys.lambda_)
            rho[d1 / std::gcd(d1, d2) * d2] += l1 * l2;
    for (auto& [e, w] : rho)
        if (w != 0)
            sys.rho_.emplace_back(e, w);
    return sys;
}

IndicatorReport verify_indicator(const SieveSystem& sys, std::uint64_t n_max)
{
    const std::uint64_t D = sys.level();
    if (sys.lambda_at(1) != 1)
        throw InvariantViolation("selberg: lambda_1 != 1");
    for (const auto& [d, w] : sys.lambda())
        if (abs(w) > 1)
            throw InvariantViolation("selberg: |lambda_" + std::to_string(d) + "| > 1");
    for (const auto& [e, w] : sys.rho())
        if (e > D * D && w != 0)
            throw InvariantViolation("selberg: rho_" + std::to_string(e) + " nonzero beyond D^2");

    IndicatorReport report;
    report.n_max = n_max;
    report.min_sum = 1;
    // both sides depend on n only through its sifted kernel
    std::map<std::uint64_t, BigRational> memo;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const std::uint64_t k = sys.sifted_kernel(n);
        auto it = memo.find(k);
        if (it == memo.end()) {
            BigRational s = sys.indicator_sum(k);
            const BigRational l = sys.lambda_divisor_sum(k);
            if (s != l * l)
                throw InvariantViolation("selberg: sum_{e|n} rho_e != (sum_{d|n} lambda_d)^2 at n = " +
                                         std::to_string(n));
            if (s < 0)
                throw InvariantViolation("selberg: negative indicator sum at n = " + std::to_string(n));
            it = memo.emplace(k, std::move(s)).first;
        }
        if (k == 1) {
            ++report.rough_count;
            if (it->second != 1)
                throw InvariantViolation("selberg: indicator sum != 1 at rough n = " + std::to_string(n));
        }
        if (it->second < report.min_sum)
            report.min_sum = it->second;
    }
    report.kernels_checked = memo.size();
    return report;
}

IntervalWeight interval_weight_sum(const SieveSystem& sys, std::uint64_t Q, std::uint64_t delta, bool odd_only)
{
    if (Q < 2)
        throw std::invalid_argument("interval_weight_sum: Q must be >= 2");
    IntervalWeight out;
    out.exact_sum = 0;
    std::map<std::uint64_t, std::uint64_t> kernel_counts;
    for (std::uint64_t n = Q + 1; n <= Q + delta; ++n) {
        if (odd_only && n % 2 == 0)
            continue;
        ++kernel_counts[sys.sifted_kernel(n)];
    }
    for (const auto& [k, count] : kernel_counts)
        out.exact_sum += sys.indicator_sum(k) * count;
    out.sum = out.exact_sum.convert_to<double>();
    out.comparator = static_cast<double>(delta) / std::log(static_cast<double>(Q));
    out.ratio = delta == 0 ? 0.0 : out.sum / out.comparator;
    return out;
}

BigRational abs_weight_sum(const SieveSystem& sys)
{
    BigRational total = 0;
    for (const auto& [e, w] : sys.rho())
        total += abs(w);
    return total;
}

}  // namespace charsum
