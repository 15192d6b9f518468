#pragma once

// Averages over primes q in a short interval [Q, Q + delta]: the character
// variance of a coefficient vector, per-prime deviations of window-sum
// moments, and the resulting exceptional sets.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "charsum/arith.hpp"
#include "charsum/rmf.hpp"

namespace charsum {

/// Raised when an interval contains no odd primes.
class EmptyInterval : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Primes in [Q, Q + delta]. delta is the realised interval length; at desk
/// scale Q^eta for small eta is below 2, so the length is set directly and
/// eta_nominal is only recorded.
struct IntervalSpec {
    std::uint64_t Q = 0;
    std::uint64_t delta = 0;
    double eta_nominal = 1.0;

    void validate() const;
    /// Odd primes in [Q, Q + delta], ascending.
    std::vector<std::uint64_t> primes() const;
};

/// Intervals with fewer primes than this are flagged as statistically thin.
inline constexpr std::size_t min_primes_for_statistics = 50;

/// (log Q / delta) sum_q |sum_n a_n (n/q)|^2 over odd primes q in the interval.
double avg_character_variance(const IntervalSpec& spec, const CoefficientVector& a,
                              unsigned threads = 1);

struct Fact3Ratio {
    double lhs = 0;
    double rhs = 0;
    double ratio = 0;
};

/// lhs = avg_character_variance, rhs = rhs_fact3(a, delta). a = 0 gives (0, 0, 0).
Fact3Ratio fact3_ratio(const IntervalSpec& spec, const CoefficientVector& a,
                       const FactorTable& table, unsigned threads = 1);

struct DeviationRecord {
    std::uint64_t q = 0;
    unsigned r = 0;
    bool even = true;
    std::uint64_t g = 0;   ///< starting points averaged over
    std::uint64_t h = 0;
    double deviation = 0;
    double threshold = 0;
    bool exceptional = false;
};

/// even: g^{-1} sum_{m <= g} S_h(m,q)^{2r} - mu_{2r} (h - theta r)^r, where the
/// subtracted term is K(r, h) exactly. odd: g^{-1} sum S_h(m,q)^{2r-1}.
/// threshold = threshold_scale * threshold_g^{-1/8}; threshold_g defaults to g.
DeviationRecord moment_deviation(const PrimeModulus& q, std::uint64_t g, std::uint64_t h,
                                 unsigned r, bool even, double threshold_g = 0,
                                 double threshold_scale = 1.0);

/// Increasing schedule g(q) for the number of starting points.
class GSchedule {
public:
    enum class Kind { log_power, small_power, constant, table };

    static GSchedule log_power(double A);
    static GSchedule small_power(double eps);
    static GSchedule constant(double C);
    /// Piecewise-linear through (q, g) points, constant outside them.
    static GSchedule table(std::vector<std::pair<double, double>> points);
    /// "log_power:A", "small_power:E", "const:C".
    static GSchedule parse(const std::string& text);

    double operator()(double q) const;
    Kind kind() const { return kind_; }
    std::string describe() const;

private:
    Kind kind_ = Kind::constant;
    double param_ = 1;
    std::vector<std::pair<double, double>> points_;
};

struct DerivativeCheck {
    double max_ratio = 0;   ///< max |dg/dq| / (g(Q)^0.99 Q^-0.01) over consecutive primes
    bool satisfied = true;  ///< max_ratio <= c
};

/// Discrete slope condition |g(q2) - g(q1)| <= c g(Q)^0.99 Q^-0.01 |q2 - q1|.
DerivativeCheck check_g_derivative(const GSchedule& g, std::uint64_t Q,
                                   const std::vector<std::uint64_t>& primes, double c = 1.0);

enum class ScheduleMode { relaxed, strict_paper };

/// Window length schedule h_q.
class HSchedule {
public:
    enum class Kind { constant, quarter, strict };

    static HSchedule constant(std::uint64_t H);
    /// floor(g^{1/4}), the relaxed cap.
    static HSchedule quarter();
    /// floor(g^{1/(2500 r^2)}).
    static HSchedule strict();
    /// "const:H", "sched:quarter", "sched:strict".
    static HSchedule parse(const std::string& text);

    std::uint64_t operator()(double g, unsigned r) const;
    std::string describe() const;

private:
    Kind kind_ = Kind::constant;
    std::uint64_t H_ = 1;
};

/// Which g enters the inner average: g(q) for each prime, or g(Q) for the
/// whole interval. Thresholds always use g(q).
enum class GConvention { per_prime, interval_base };

struct ExceptionalOptions {
    unsigned r_max = 1;
    double threshold_scale = 1.0;
    GConvention convention = GConvention::per_prime;
    ScheduleMode mode = ScheduleMode::relaxed;
    unsigned threads = 1;
};

struct ExceptionalByR {
    unsigned r = 0;
    double fraction_E1 = 0;       ///< even-moment exceptional fraction
    double fraction_E2 = 0;       ///< odd-moment exceptional fraction
    double mean_sq_dev_even = 0;  ///< mean over primes of deviation^2
    double mean_sq_dev_odd = 0;
};

struct ExceptionalReport {
    std::size_t prime_count = 0;
    std::vector<DeviationRecord> records;   ///< ordered by q, then r, then even before odd
    std::vector<ExceptionalByR> by_r;
    double fraction_E1 = 0;                 ///< exceptional in some even record
    double fraction_E2 = 0;                 ///< exceptional in some odd record
    double fraction_union = 0;
    double g_at_Q = 0;
    std::vector<std::string> warnings;
};

ExceptionalReport exceptional_sets(const IntervalSpec& spec, const GSchedule& g,
                                   const HSchedule& h, const ExceptionalOptions& options);

}  // namespace charsum
