#include "charsum/prime_average.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "charsum/bigint.hpp"
#include "charsum/parallel.hpp"
#include "charsum/square_structure.hpp"
#include "charsum/windowsum.hpp"

namespace charsum {

void IntervalSpec::validate() const
{
    if (Q < 3)
        throw std::invalid_argument("interval: Q must be >= 3");
    if (delta < 1)
        throw std::invalid_argument("interval: delta must be >= 1");
    if (!(eta_nominal > 0 && eta_nominal <= 1))
        throw std::invalid_argument("interval: eta must lie in (0, 1]");
}

std::vector<std::uint64_t> IntervalSpec::primes() const
{
    validate();
    auto ps = primes_in_interval(Q, Q + delta);
    std::erase(ps, std::uint64_t{2});
    return ps;
}

double avg_character_variance(const IntervalSpec& spec, const CoefficientVector& a, unsigned threads)
{
    const auto primes = spec.primes();
    if (primes.empty())
        throw EmptyInterval("no odd primes in [" + std::to_string(spec.Q) + ", " +
                            std::to_string(spec.Q + spec.delta) + "]");

    std::vector<long double> per_prime(primes.size(), 0);
    parallel_for(primes.size(), threads, [&](std::size_t i) {
        const PrimeModulus q(primes[i]);
        std::complex<long double> inner = 0;
        for (std::size_t n = 1; n <= a.size(); ++n) {
            const auto v = a.at(n);
            if (v == CoefficientVector::value_type{})
                continue;
            const int chi = jacobi_symbol(n % q.value(), q.value());
            inner += static_cast<long double>(chi) * std::complex<long double>(v.real(), v.imag());
        }
        per_prime[i] = std::norm(inner);
    });
    long double total = 0;
    for (long double v : per_prime)
        total += v;
    const long double scale = std::log(static_cast<long double>(spec.Q)) / static_cast<long double>(spec.delta);
    return static_cast<double>(scale * total);
}

Fact3Ratio fact3_ratio(const IntervalSpec& spec, const CoefficientVector& a, const FactorTable& table,
                       unsigned threads)
{
    Fact3Ratio out;
    if (a.is_zero()) {
        spec.validate();
        return out;
    }
    out.lhs = avg_character_variance(spec, a, threads);
    out.rhs = rhs_fact3(a, spec.delta, table);
    if (out.rhs == 0)
        throw InvariantViolation("fact3_ratio: zero right-hand side for a nonzero vector");
    out.ratio = out.lhs / out.rhs;
    return out;
}

namespace {

BigInt power_sum(const std::vector<std::uint64_t>& histogram, std::uint64_t h, unsigned j)
{
    BigInt total = 0;
    for (std::size_t i = 0; i < histogram.size(); ++i) {
        if (histogram[i] == 0)
            continue;
        const auto s = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(h);
        total += BigInt(histogram[i]) * boost::multiprecision::pow(BigInt(s), j);
    }
    return total;
}

DeviationRecord deviation_from_histogram(std::uint64_t q, const std::vector<std::uint64_t>& histogram,
                                         std::uint64_t g, std::uint64_t h, unsigned r, bool even,
                                         const BigInt& K, double threshold_g, double threshold_scale)
{
    DeviationRecord rec;
    rec.q = q;
    rec.r = r;
    rec.even = even;
    rec.g = g;
    rec.h = h;
    const unsigned j = even ? 2 * r : 2 * r - 1;
    BigInt numerator = power_sum(histogram, h, j);
    if (even)
        numerator -= K * g;
    rec.deviation = static_cast<double>(numerator.convert_to<long double>() / static_cast<long double>(g));
    rec.threshold = threshold_scale * std::pow(threshold_g, -0.125);
    rec.exceptional = std::fabs(rec.deviation) >= rec.threshold;
    return rec;
}

std::vector<std::uint64_t> histogram_of(const PrimeModulus& q, std::uint64_t g, std::uint64_t h)
{
    const WindowSeries series = window_series(q, WindowConfig{h, g, StartConvention::one_based});
    std::vector<std::uint64_t> hist(2 * h + 1, 0);
    for (std::int32_t s : series.sums)
        ++hist[static_cast<std::size_t>(s + static_cast<std::int64_t>(h))];
    return hist;
}

}  // namespace

DeviationRecord moment_deviation(const PrimeModulus& q, std::uint64_t g, std::uint64_t h, unsigned r,
                                 bool even, double threshold_g, double threshold_scale)
{
    if (r < 1)
        throw std::invalid_argument("moment_deviation: r must be >= 1");
    if (h < r)
        throw std::invalid_argument("moment_deviation: requires r <= h");
    if (h >= q.value())
        throw std::invalid_argument("moment_deviation: requires h < q");
    const BigInt K = even ? k_count_exact(r, h) : BigInt(0);
    const auto hist = histogram_of(q, g, h);
    const double tg = threshold_g > 0 ? threshold_g : static_cast<double>(g);
    return deviation_from_histogram(q.value(), hist, g, h, r, even, K, tg, threshold_scale);
}

GSchedule GSchedule::log_power(double A)
{
    if (!(A > 0))
        throw std::invalid_argument("g schedule log_power: A must be > 0");
    GSchedule s;
    s.kind_ = Kind::log_power;
    s.param_ = A;
    return s;
}

GSchedule GSchedule::small_power(double eps)
{
    if (!(eps > 0))
        throw std::invalid_argument("g schedule small_power: exponent must be > 0");
    GSchedule s;
    s.kind_ = Kind::small_power;
    s.param_ = eps;
    return s;
}

GSchedule GSchedule::constant(double C)
{
    if (!(C >= 1))
        throw std::invalid_argument("g schedule const: C must be >= 1");
    GSchedule s;
    s.kind_ = Kind::constant;
    s.param_ = C;
    return s;
}

GSchedule GSchedule::table(std::vector<std::pair<double, double>> points)
{
    if (points.empty())
        throw std::invalid_argument("g schedule table: no points");
    std::sort(points.begin(), points.end());
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].first == points[i - 1].first)
            throw std::invalid_argument("g schedule table: duplicate q");
        if (points[i].second < points[i - 1].second)
            throw std::invalid_argument("g schedule table: schedule must be nondecreasing");
    }
    if (points.front().second < 1)
        throw std::invalid_argument("g schedule table: values must be >= 1");
    GSchedule s;
    s.kind_ = Kind::table;
    s.points_ = std::move(points);
    return s;
}

GSchedule GSchedule::parse(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("g schedule: expected kind:value, got '" + text + "'");
    const std::string kind = text.substr(0, colon);
    double value = 0;
    try {
        std::size_t used = 0;
        value = std::stod(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1)
            throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw std::invalid_argument("g schedule: bad number in '" + text + "'");
    }
    if (kind == "log_power")
        return log_power(value);
    if (kind == "small_power")
        return small_power(value);
    if (kind == "const")
        return constant(value);
    throw std::invalid_argument("g schedule: unknown kind '" + kind + "'");
}

double GSchedule::operator()(double q) const
{
    switch (kind_) {
    case Kind::log_power:
        return std::pow(std::log(q), param_);
    case Kind::small_power:
        return std::pow(q, param_);
    case Kind::constant:
        return param_;
    case Kind::table: {
        if (q <= points_.front().first)
            return points_.front().second;
        if (q >= points_.back().first)
            return points_.back().second;
        auto it = std::upper_bound(points_.begin(), points_.end(), std::make_pair(q, -1e300));
        const auto& [q1, g1] = *(it - 1);
        const auto& [q2, g2] = *it;
        return g1 + (g2 - g1) * (q - q1) / (q2 - q1);
    }
    }
    return param_;
}

std::string GSchedule::describe() const
{
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case Kind::log_power:
        os << "log_power:" << param_;
        break;
    case Kind::small_power:
        os << "small_power:" << param_;
        break;
    case Kind::constant:
        os << "const:" << param_;
        break;
    case Kind::table:
        os << "table:" << points_.size() << " points";
        break;
    }
    return os.str();
}

DerivativeCheck check_g_derivative(const GSchedule& g, std::uint64_t Q,
                                   const std::vector<std::uint64_t>& primes, double c)
{
    DerivativeCheck out;
    const double Qd = static_cast<double>(Q);
    const double scale = std::pow(g(Qd), 0.99) * std::pow(Qd, -0.01);
    for (std::size_t i = 1; i < primes.size(); ++i) {
        const double q1 = static_cast<double>(primes[i - 1]);
        const double q2 = static_cast<double>(primes[i]);
        const double slope = std::fabs(g(q2) - g(q1)) / (q2 - q1);
        out.max_ratio = std::max(out.max_ratio, slope / scale);
    }
    out.satisfied = out.max_ratio <= c;
    return out;
}

HSchedule HSchedule::constant(std::uint64_t H)
{
    if (H < 1)
        throw std::invalid_argument("h schedule const: H must be >= 1");
    HSchedule s;
    s.kind_ = Kind::constant;
    s.H_ = H;
    return s;
}

HSchedule HSchedule::quarter()
{
    HSchedule s;
    s.kind_ = Kind::quarter;
    return s;
}

HSchedule HSchedule::strict()
{
    HSchedule s;
    s.kind_ = Kind::strict;
    return s;
}

HSchedule HSchedule::parse(const std::string& text)
{
    if (text == "sched:quarter")
        return quarter();
    if (text == "sched:strict")
        return strict();
    if (text.rfind("const:", 0) == 0) {
        const std::string num = text.substr(6);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("h schedule: bad integer in '" + text + "'");
        return constant(std::stoull(num));
    }
    throw std::invalid_argument("h schedule: expected const:H, sched:quarter or sched:strict, got '" +
                                text + "'");
}

std::uint64_t HSchedule::operator()(double g, unsigned r) const
{
    switch (kind_) {
    case Kind::constant:
        return H_;
    case Kind::quarter:
        return static_cast<std::uint64_t>(std::floor(std::pow(g, 0.25) + 1e-12));
    case Kind::strict:
        return static_cast<std::uint64_t>(std::floor(std::pow(g, 1.0 / (2500.0 * r * r)) + 1e-12));
    }
    return H_;
}

std::string HSchedule::describe() const
{
    switch (kind_) {
    case Kind::constant:
        return "const:" + std::to_string(H_);
    case Kind::quarter:
        return "sched:quarter";
    case Kind::strict:
        return "sched:strict";
    }
    return "";
}

ExceptionalReport exceptional_sets(const IntervalSpec& spec, const GSchedule& g, const HSchedule& h,
                                   const ExceptionalOptions& options)
{
    if (options.r_max < 1 || options.r_max > 12)
        throw std::invalid_argument("exceptional_sets: r_max must lie in [1, 12]");
    if (!(options.threshold_scale > 0))
        throw std::invalid_argument("exceptional_sets: threshold scale must be > 0");

    ExceptionalReport report;
    const auto primes = spec.primes();
    if (primes.empty())
        throw EmptyInterval("no odd primes in [" + std::to_string(spec.Q) + ", " +
                            std::to_string(spec.Q + spec.delta) + "]");
    report.prime_count = primes.size();
    if (primes.size() < min_primes_for_statistics)
        report.warnings.push_back("interval holds only " + std::to_string(primes.size()) +
                                  " primes (< " + std::to_string(min_primes_for_statistics) + ")");
    report.g_at_Q = g(static_cast<double>(spec.Q));

    if (options.mode == ScheduleMode::strict_paper) {
        const auto dc = check_g_derivative(g, spec.Q, primes);
        if (!dc.satisfied)
            report.warnings.push_back("g schedule violates the slope condition (max ratio " +
                                      std::to_string(dc.max_ratio) + ")");
    } else {
        report.warnings.push_back("relaxed mode: h_q capped at g^(1/4) instead of g^(1/(2500 r^2))");
    }

    const unsigned R = options.r_max;
    std::vector<std::vector<BigInt>> K_cache;   // built lazily per distinct h below
    std::vector<std::uint64_t> hs(primes.size());
    std::vector<double> gq(primes.size());
    std::vector<char> over_cap(primes.size(), 0), clamped(primes.size(), 0);
    for (std::size_t i = 0; i < primes.size(); ++i) {
        gq[i] = g(static_cast<double>(primes[i]));
        std::uint64_t hq = h(gq[i], R);
        if (hq < R) {
            if (options.mode != ScheduleMode::strict_paper)
                throw std::invalid_argument("h_q = " + std::to_string(hq) + " is below r_max = " +
                                            std::to_string(R));
            hq = R;
            clamped[i] = 1;
        }
        if (hq >= primes[i])
            throw std::invalid_argument("h_q must be below q");
        const double cap = options.mode == ScheduleMode::strict_paper
                               ? std::pow(gq[i], 1.0 / (2500.0 * R * R))
                               : std::pow(gq[i], 0.25);
        over_cap[i] = static_cast<double>(hq) > cap + 1e-12;
        hs[i] = hq;
    }

    // exact K(r, h) for each distinct h
    std::vector<std::uint64_t> distinct_h(hs);
    std::sort(distinct_h.begin(), distinct_h.end());
    distinct_h.erase(std::unique(distinct_h.begin(), distinct_h.end()), distinct_h.end());
    for (std::uint64_t hv : distinct_h) {
        std::vector<BigInt> Ks(R + 1);
        for (unsigned r = 1; r <= R; ++r)
            Ks[r] = k_count_exact(r, hv);
        K_cache.push_back(std::move(Ks));
    }
    auto K_for = [&](std::uint64_t hv) -> const std::vector<BigInt>& {
        const auto idx = std::lower_bound(distinct_h.begin(), distinct_h.end(), hv) - distinct_h.begin();
        return K_cache[static_cast<std::size_t>(idx)];
    };

    const double gQ = report.g_at_Q;
    std::vector<std::vector<DeviationRecord>> per_prime(primes.size());
    parallel_for(primes.size(), options.threads, [&](std::size_t i) {
        const PrimeModulus q(primes[i]);
        const double inner_g = options.convention == GConvention::per_prime ? gq[i] : gQ;
        const auto g_count = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(inner_g)));
        const auto hist = histogram_of(q, g_count, hs[i]);
        const auto& Ks = K_for(hs[i]);
        auto& out = per_prime[i];
        for (unsigned r = 1; r <= R; ++r) {
            out.push_back(deviation_from_histogram(q.value(), hist, g_count, hs[i], r, true, Ks[r], gq[i],
                                                   options.threshold_scale));
            out.push_back(deviation_from_histogram(q.value(), hist, g_count, hs[i], r, false, Ks[r], gq[i],
                                                   options.threshold_scale));
        }
    });

    const auto n = static_cast<double>(primes.size());
    report.by_r.resize(R);
    for (unsigned r = 1; r <= R; ++r)
        report.by_r[r - 1].r = r;
    std::size_t e1 = 0, e2 = 0, eu = 0;
    for (auto& recs : per_prime) {
        bool any_even = false, any_odd = false;
        for (const auto& rec : recs) {
            auto& row = report.by_r[rec.r - 1];
            if (rec.even) {
                row.fraction_E1 += rec.exceptional;
                row.mean_sq_dev_even += rec.deviation * rec.deviation;
                any_even |= rec.exceptional;
            } else {
                row.fraction_E2 += rec.exceptional;
                row.mean_sq_dev_odd += rec.deviation * rec.deviation;
                any_odd |= rec.exceptional;
            }
        }
        e1 += any_even;
        e2 += any_odd;
        eu += any_even || any_odd;
        report.records.insert(report.records.end(), recs.begin(), recs.end());
    }
    for (auto& row : report.by_r) {
        row.fraction_E1 /= n;
        row.fraction_E2 /= n;
        row.mean_sq_dev_even /= n;
        row.mean_sq_dev_odd /= n;
    }
    report.fraction_E1 = static_cast<double>(e1) / n;
    report.fraction_E2 = static_cast<double>(e2) / n;
    report.fraction_union = static_cast<double>(eu) / n;

    const auto n_over = std::count(over_cap.begin(), over_cap.end(), 1);
    if (n_over > 0)
        report.warnings.push_back(std::to_string(n_over) + " primes have h_q above the " +
                                  (options.mode == ScheduleMode::strict_paper ? "strict-paper" : "relaxed") +
                                  " cap");
    const auto n_clamped = std::count(clamped.begin(), clamped.end(), 1);
    if (n_clamped > 0)
        report.warnings.push_back(std::to_string(n_clamped) + " primes had h_q raised to r_max");
    return report;
}

}  // namespace charsum
