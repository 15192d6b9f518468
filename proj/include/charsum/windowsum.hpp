#pragma once

// Window character sums S_h(x, q) = sum_{x < n <= x+h} (n/q), their empirical
// moments and distribution over starting points, and the classical bounds used
// to control them.

#include <cstdint>
#include <span>
#include <vector>

#include "charsum/arith.hpp"

namespace charsum {

/// Starting-point convention for a window series. `one_based` takes
/// m = 1..g; `zero_based` takes m = 0..g-1 (the full-period convention
/// {0, ..., q-1} when g = q).
enum class StartConvention { one_based, zero_based };

struct WindowConfig {
    std::uint64_t h = 1;   ///< window length
    std::uint64_t g = 1;   ///< number of starting points
    StartConvention start = StartConvention::one_based;

    /// Throws std::invalid_argument unless 1 <= h < q, g >= 1 and g + h < 2^63.
    void validate(const PrimeModulus& q) const;
    std::uint64_t first_start() const { return start == StartConvention::one_based ? 1 : 0; }
};

/// Quadratic character of q tabulated over one period, built by marking the
/// squares i^2 mod q. Memory is q bytes.
class CharacterTable {
public:
    explicit CharacterTable(const PrimeModulus& q);

    int operator()(std::uint64_t n) const { return table_[n % q_]; }
    std::uint64_t modulus() const { return q_; }

private:
    std::uint64_t q_;
    std::vector<std::int8_t> table_;
};

/// sum_{x < n <= x+h} (n/q). Windows may cross multiples of q.
std::int64_t window_sum(const PrimeModulus& q, std::uint64_t x, std::uint64_t h);

struct WindowSeries {
    PrimeModulus q;
    WindowConfig config;
    /// sums[i] = S_h(first_start + i, q), i = 0..g-1
    std::vector<std::int32_t> sums;

    /// The starting point of sums[i].
    std::uint64_t start_of(std::size_t i) const { return config.first_start() + i; }
};

/// Builds the series by sliding: each symbol is evaluated once, so the total
/// number of evaluations is g + h. Ring-buffers the last h symbol values.
WindowSeries window_series(const PrimeModulus& q, const WindowConfig& cfg);

/// Empirical moments and CDF of h^{-1/2} S over the series.
class EmpiricalSummary {
public:
    EmpiricalSummary(const WindowSeries& series, unsigned max_moment);

    static constexpr unsigned max_supported_moment = 12;

    std::uint64_t sample_count() const { return sample_count_; }
    std::uint64_t h() const { return h_; }
    unsigned max_moment() const { return static_cast<unsigned>(moments_.size() - 1); }

    /// g^{-1} sum_m (h^{-1/2} S_m)^j for j <= max_moment.
    double moment(unsigned j) const { return moments_.at(j); }
    const std::vector<double>& moments() const { return moments_; }

    /// Exact sum_m S_m^j; throws std::overflow_error if it does not fit in 128 bits.
    i128 raw_power_sum(unsigned j) const;

    /// g^{-1} #{m : S_m <= lambda sqrt(h)}.
    double cdf(double lambda) const;

    /// Multiplicity of each value: histogram()[s + h] = #{m : S_m = s}.
    const std::vector<std::uint64_t>& histogram() const { return histogram_; }

private:
    std::uint64_t h_;
    std::uint64_t sample_count_;
    std::vector<std::uint64_t> histogram_;
    std::vector<double> moments_;
};

EmpiricalSummary empirical_summary(const WindowSeries& series, unsigned max_moment);

/// j-th moment of the standard normal: (j-1)!! for even j, 0 for odd j. j <= 24.
std::uint64_t gaussian_moment(unsigned j);

/// Standard normal CDF, 0.5 * erfc(-x / sqrt 2). libm's erfc is accurate to a
/// few ulp, far below 1e-10 absolute.
double normal_cdf(double x);

struct CdfRow {
    double lambda = 0;
    double empirical = 0;
    double phi = 0;
    double diff = 0;
};

struct CdfComparison {
    std::vector<CdfRow> rows;
    double max_diff = 0;
    bool continuity_corrected = false;
};

/// Compares the empirical CDF with Phi on the given grid. With continuity
/// correction the reference is Phi(lambda + 1/sqrt(h)), which removes the
/// half-step bias of a lattice with spacing 2/sqrt(h).
CdfComparison cdf_vs_gaussian(const EmpiricalSummary& summary, std::span<const double> lambdas,
                              bool continuity_correction = false);

struct PolyaVinogradov {
    std::uint64_t q = 0;
    std::int64_t max_partial_sum = 0;
    double bound = 0;   ///< sqrt(q) log q
    double ratio = 0;
};

/// max over 1 <= h <= q of |sum_{n <= h} (n/q)| against sqrt(q) log q.
PolyaVinogradov polya_vinogradov_check(const PrimeModulus& q);

/// sum_{X < n <= X+Y} prod_i ((n + gamma_i)/q), multiplying symbols termwise.
/// Offsets must be distinct mod q and 0 < Y <= q.
std::int64_t incomplete_poly_sum(const PrimeModulus& q, std::span<const std::int64_t> gamma,
                                 std::uint64_t X, std::uint64_t Y);

/// Same sum, reading symbols from a precomputed table of q.
std::int64_t incomplete_poly_sum(const CharacterTable& chi, std::span<const std::int64_t> gamma,
                                 std::uint64_t X, std::uint64_t Y);

struct WeilCheck {
    std::int64_t value = 0;
    double bound = 0;   ///< 9 K sqrt(q) log q
    bool holds = false;
};

WeilCheck weil_bound_check(const PrimeModulus& q, std::span<const std::int64_t> gamma,
                           std::uint64_t X, std::uint64_t Y);
WeilCheck weil_bound_check(const CharacterTable& chi, std::span<const std::int64_t> gamma,
                           std::uint64_t X, std::uint64_t Y);

}  // namespace charsum
