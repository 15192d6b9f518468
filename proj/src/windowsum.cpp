#include "charsum/windowsum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace charsum {

void WindowConfig::validate(const PrimeModulus& q) const
{
    if (h < 1 || h >= q.value())
        throw std::invalid_argument("window length h must satisfy 1 <= h < q (h = " +
                                    std::to_string(h) + ")");
    if (g < 1)
        throw std::invalid_argument("number of starting points g must be >= 1");
    if (g >= (std::uint64_t{1} << 63) - h)
        throw std::invalid_argument("g + h must stay below 2^63");
}

CharacterTable::CharacterTable(const PrimeModulus& q) : q_(q.value())
{
    if (q_ > (std::uint64_t{1} << 32))
        throw std::length_error("CharacterTable: modulus too large to tabulate");
    table_.assign(q_, -1);
    table_[0] = 0;
    for (std::uint64_t i = 1; i <= q_ / 2; ++i)
        table_[i * i % q_] = 1;
}

std::int64_t window_sum(const PrimeModulus& q, std::uint64_t x, std::uint64_t h)
{
    if (h < 1 || h >= q.value())
        throw std::invalid_argument("window_sum: need 1 <= h < q");
    std::int64_t s = 0;
    for (std::uint64_t n = x + 1; n <= x + h; ++n)
        s += jacobi_symbol(n % q.value(), q.value());
    return s;
}

WindowSeries window_series(const PrimeModulus& q, const WindowConfig& cfg)
{
    cfg.validate(q);
    const std::uint64_t qv = q.value();
    const std::uint64_t h = cfg.h;
    const std::uint64_t x0 = cfg.first_start();

    WindowSeries series{q, cfg, {}};
    series.sums.resize(cfg.g);

    // ring[i % h] holds chi(x0 + 1 + i), the symbols currently in the window
    std::vector<std::int8_t> ring(h);
    std::int64_t s = 0;
    for (std::uint64_t i = 0; i < h; ++i) {
        int c = jacobi_symbol((x0 + 1 + i) % qv, qv);
        ring[i] = static_cast<std::int8_t>(c);
        s += c;
    }
    series.sums[0] = static_cast<std::int32_t>(s);
    for (std::uint64_t m = 1; m < cfg.g; ++m) {
        // window (x0+m, x0+m+h]: drop x0+m, add x0+m+h
        const std::uint64_t slot = (m - 1) % h;
        int incoming = jacobi_symbol((x0 + m + h) % qv, qv);
        s += incoming - ring[slot];
        ring[slot] = static_cast<std::int8_t>(incoming);
        series.sums[m] = static_cast<std::int32_t>(s);
    }
    return series;
}

EmpiricalSummary::EmpiricalSummary(const WindowSeries& series, unsigned max_moment)
    : h_(series.config.h), sample_count_(series.sums.size())
{
    if (series.sums.empty())
        throw std::invalid_argument("empirical_summary: empty series");
    if (max_moment > max_supported_moment)
        throw std::invalid_argument("empirical_summary: max_moment must be <= 12");

    histogram_.assign(2 * h_ + 1, 0);
    for (std::int32_t s : series.sums) {
        const auto idx = static_cast<std::int64_t>(s) + static_cast<std::int64_t>(h_);
        if (idx < 0 || idx > static_cast<std::int64_t>(2 * h_))
            throw InvariantViolation("window sum exceeds window length");
        ++histogram_[static_cast<std::size_t>(idx)];
    }

    // Moments from the exact histogram: one long double term per distinct value.
    const long double sqrt_h = std::sqrt(static_cast<long double>(h_));
    const auto g = static_cast<long double>(sample_count_);
    moments_.assign(max_moment + 1, 0.0);
    for (unsigned j = 0; j <= max_moment; ++j) {
        long double acc = 0;
        for (std::size_t i = 0; i < histogram_.size(); ++i) {
            if (histogram_[i] == 0)
                continue;
            const long double z = (static_cast<long double>(i) - static_cast<long double>(h_)) / sqrt_h;
            acc += static_cast<long double>(histogram_[i]) * std::pow(z, static_cast<long double>(j));
        }
        moments_[j] = static_cast<double>(acc / g);
    }
}

i128 EmpiricalSummary::raw_power_sum(unsigned j) const
{
    i128 total = 0;
    for (std::size_t i = 0; i < histogram_.size(); ++i) {
        if (histogram_[i] == 0)
            continue;
        const i128 s = static_cast<i128>(i) - static_cast<i128>(h_);
        i128 term = static_cast<i128>(histogram_[i]);
        for (unsigned k = 0; k < j; ++k)
            if (__builtin_mul_overflow(term, s, &term))
                throw std::overflow_error("raw_power_sum: exceeds 128 bits");
        if (__builtin_add_overflow(total, term, &total))
            throw std::overflow_error("raw_power_sum: exceeds 128 bits");
    }
    return total;
}

double EmpiricalSummary::cdf(double lambda) const
{
    const double t = lambda * std::sqrt(static_cast<double>(h_));
    // tolerance so that lambda*sqrt(h) landing a rounding error below a lattice
    // point still counts that point
    const double cut = std::floor(t + 1e-9 * std::max(1.0, std::fabs(t)));
    const double hd = static_cast<double>(h_);
    if (cut < -hd)
        return 0.0;
    if (cut >= hd)
        return 1.0;
    const auto last = static_cast<std::size_t>(cut + hd);
    std::uint64_t count = 0;
    for (std::size_t i = 0; i <= last; ++i)
        count += histogram_[i];
    return static_cast<double>(count) / static_cast<double>(sample_count_);
}

EmpiricalSummary empirical_summary(const WindowSeries& series, unsigned max_moment)
{
    return EmpiricalSummary(series, max_moment);
}

std::uint64_t gaussian_moment(unsigned j)
{
    if (j > 24)
        throw std::invalid_argument("gaussian_moment: j must be <= 24");
    if (j % 2 == 1)
        return 0;
    std::uint64_t m = 1;
    for (unsigned k = j; k >= 2; k -= 2)
        m *= k - 1;
    return m;
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

CdfComparison cdf_vs_gaussian(const EmpiricalSummary& summary, std::span<const double> lambdas,
                              bool continuity_correction)
{
    CdfComparison out;
    out.continuity_corrected = continuity_correction;
    const double shift = continuity_correction ? 1.0 / std::sqrt(static_cast<double>(summary.h())) : 0.0;
    for (double lambda : lambdas) {
        CdfRow row;
        row.lambda = lambda;
        row.empirical = summary.cdf(lambda);
        row.phi = normal_cdf(lambda + shift);
        row.diff = std::fabs(row.empirical - row.phi);
        out.max_diff = std::max(out.max_diff, row.diff);
        out.rows.push_back(row);
    }
    return out;
}

PolyaVinogradov polya_vinogradov_check(const PrimeModulus& q)
{
    PolyaVinogradov out;
    out.q = q.value();
    std::int64_t partial = 0;
    for (std::uint64_t n = 1; n <= q.value(); ++n) {
        partial += jacobi_symbol(n % q.value(), q.value());
        out.max_partial_sum = std::max(out.max_partial_sum, partial < 0 ? -partial : partial);
    }
    const double qd = static_cast<double>(q.value());
    out.bound = std::sqrt(qd) * std::log(qd);
    out.ratio = static_cast<double>(out.max_partial_sum) / out.bound;
    return out;
}

namespace {

std::vector<std::uint64_t> reduced_offsets(std::uint64_t qv, std::span<const std::int64_t> gamma,
                                           std::uint64_t Y)
{
    if (gamma.empty())
        throw std::invalid_argument("incomplete_poly_sum: need at least one offset");
    if (Y == 0 || Y > qv)
        throw std::invalid_argument("incomplete_poly_sum: need 0 < Y <= q");
    std::vector<std::uint64_t> red;
    red.reserve(gamma.size());
    const auto qs = static_cast<std::int64_t>(qv);
    for (std::int64_t g : gamma) {
        std::int64_t r = g % qs;
        if (r < 0)
            r += qs;
        red.push_back(static_cast<std::uint64_t>(r));
    }
    auto sorted = red;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("incomplete_poly_sum: offsets must be distinct mod q");
    return red;
}

template <class Chi>
std::int64_t poly_sum(Chi&& chi, std::uint64_t qv, const std::vector<std::uint64_t>& red,
                      std::uint64_t X, std::uint64_t Y)
{
    std::int64_t total = 0;
    const std::uint64_t base = X % qv;
    for (std::uint64_t i = 1; i <= Y; ++i) {
        const std::uint64_t n = (base + i) % qv;
        int prod = 1;
        for (std::uint64_t g : red) {
            std::uint64_t v = n + g;
            if (v >= qv)
                v -= qv;
            prod *= chi(v);
            if (prod == 0)
                break;
        }
        total += prod;
    }
    return total;
}

WeilCheck make_weil(std::int64_t value, std::uint64_t qv, std::size_t K)
{
    WeilCheck w;
    w.value = value;
    const double qd = static_cast<double>(qv);
    w.bound = 9.0 * static_cast<double>(K) * std::sqrt(qd) * std::log(qd);
    w.holds = std::fabs(static_cast<double>(value)) < w.bound;
    return w;
}

}  // namespace

std::int64_t incomplete_poly_sum(const PrimeModulus& q, std::span<const std::int64_t> gamma,
                                 std::uint64_t X, std::uint64_t Y)
{
    const std::uint64_t qv = q.value();
    const auto red = reduced_offsets(qv, gamma, Y);
    return poly_sum([qv](std::uint64_t v) { return jacobi_symbol(v, qv); }, qv, red, X, Y);
}

std::int64_t incomplete_poly_sum(const CharacterTable& chi, std::span<const std::int64_t> gamma,
                                 std::uint64_t X, std::uint64_t Y)
{
    const std::uint64_t qv = chi.modulus();
    const auto red = reduced_offsets(qv, gamma, Y);
    return poly_sum(chi, qv, red, X, Y);
}

WeilCheck weil_bound_check(const PrimeModulus& q, std::span<const std::int64_t> gamma,
                           std::uint64_t X, std::uint64_t Y)
{
    return make_weil(incomplete_poly_sum(q, gamma, X, Y), q.value(), gamma.size());
}

WeilCheck weil_bound_check(const CharacterTable& chi, std::span<const std::int64_t> gamma,
                           std::uint64_t X, std::uint64_t Y)
{
    return make_weil(incomplete_poly_sum(chi, gamma, X, Y), chi.modulus(), gamma.size());
}

}  // namespace charsum
