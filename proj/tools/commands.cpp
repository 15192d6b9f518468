#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <json.hpp>

#include "charsum/arith.hpp"
#include "charsum/prime_average.hpp"
#include "charsum/rmf.hpp"
#include "charsum/selberg.hpp"
#include "charsum/square_structure.hpp"
#include "charsum/windowsum.hpp"

namespace charsum::cli {

namespace {

using json = nlohmann::ordered_json;

/// Largest series the single-prime experiment will hold in memory.
constexpr std::uint64_t max_series_length = std::uint64_t{1} << 28;

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string to_string(const BigRational& x)
{
    std::ostringstream os;
    os << x;
    return os.str();
}

json big_to_json(const BigInt& x)
{
    if (x >= 0 && x <= std::numeric_limits<std::uint64_t>::max())
        return x.convert_to<std::uint64_t>();
    return x.str();
}

/// Counter-based stream: value i is splitmix64(seed + i), so draws never
/// depend on thread scheduling or library implementation details.
class SeededStream {
public:
    explicit SeededStream(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next() { return splitmix64(seed_ + counter_++); }
    /// Uniform on [lo, hi]; modulo bias is below 2^-40 for the ranges used here.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) { return lo + next() % (hi - lo + 1); }
    double unit() { return static_cast<double>(next() >> 11) * 0x1p-53; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

struct Interval {
    std::uint64_t Q = 0;
    std::uint64_t delta = 0;
};

Interval parse_interval(const std::string& text)
{
    const auto colon = text.find(':');
    auto digits = [](const std::string& s) {
        return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
    };
    if (colon == std::string::npos || !digits(text.substr(0, colon)) || !digits(text.substr(colon + 1)))
        throw std::invalid_argument("--interval: expected Q:DELTA with nonnegative integers, got '" + text + "'");
    return {std::stoull(text.substr(0, colon)), std::stoull(text.substr(colon + 1))};
}

std::vector<double> parse_lambdas(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("--lambdas: bad number '" + item + "'");
        }
    }
    if (out.empty())
        throw std::invalid_argument("--lambdas: empty grid");
    return out;
}

bool all_digits(const std::string& s)
{
    return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

/// g for a single prime: an integer, "q-K", or a schedule evaluated at q.
std::uint64_t resolve_g(const std::string& text, std::uint64_t q, std::uint64_t h)
{
    if (text.empty())
        return q - h;
    if (all_digits(text))
        return std::stoull(text);
    if (text.rfind("q-", 0) == 0 && all_digits(text.substr(2))) {
        const auto k = std::stoull(text.substr(2));
        if (k >= q)
            throw std::invalid_argument("--g: q-K needs K < q");
        return q - k;
    }
    const double g = GSchedule::parse(text)(static_cast<double>(q));
    return static_cast<std::uint64_t>(std::floor(g));
}

/// h for a single prime: an integer or a const:H schedule.
std::uint64_t resolve_h(const std::string& text)
{
    if (all_digits(text))
        return std::stoull(text);
    if (text.rfind("const:", 0) == 0 && all_digits(text.substr(6)))
        return std::stoull(text.substr(6));
    throw std::invalid_argument("--h: expected an integer or const:H for a single prime, got '" + text + "'");
}

struct Common {
    std::string format = "json";
    std::string out_path;
    std::string mode = "relaxed";
    unsigned threads = 1;
    std::uint64_t seed = 1;

    ScheduleMode schedule_mode() const
    {
        return mode == "strict" ? ScheduleMode::strict_paper : ScheduleMode::relaxed;
    }
};

/// What a subcommand hands back: the echo of its configuration, the payload,
/// a CSV projection and an exit status.
struct Outcome {
    json config = json::object();
    json results = json::object();
    std::vector<std::string> warnings;
    std::string csv;
    int status = ok;
};

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json versions()
{
    return json{{"charsum", tool_version},
                {"schema", schema_version},
                {"boost", BOOST_LIB_VERSION},
                {"cli11", CLI11_VERSION},
                {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                {"compiler", __VERSION__}};
}

// --- clt-single -------------------------------------------------------------

struct CltSingleArgs {
    std::uint64_t q = 0;
    std::string g;
    std::string h = "100";
    unsigned moments = 4;
    std::string lambdas = "-2,-1,0,1,2";
    std::string start = "one";
};

Outcome clt_single(const CltSingleArgs& a, const Common& common)
{
    Outcome o;
    const PrimeModulus q(a.q);
    const std::uint64_t h = resolve_h(a.h);
    if (h < 1 || h >= a.q)
        throw std::invalid_argument("--h: need 1 <= h < q");
    const std::uint64_t g = resolve_g(a.g, a.q, h);
    if (g < 1)
        throw std::invalid_argument("--g: need g >= 1");
    if (g > max_series_length)
        throw std::invalid_argument("--g: " + std::to_string(g) + " starting points exceed the budget of " +
                                    std::to_string(max_series_length));
    if (a.moments > EmpiricalSummary::max_supported_moment)
        throw std::invalid_argument("--moments: at most " +
                                    std::to_string(EmpiricalSummary::max_supported_moment));
    if (a.start != "one" && a.start != "zero")
        throw std::invalid_argument("--start: expected one or zero");
    const auto lambdas = parse_lambdas(a.lambdas);

    o.config = {{"q", a.q}, {"g", g}, {"h", h}, {"moments", a.moments}, {"lambdas", lambdas},
                {"start", a.start}, {"mode", common.mode}};

    const double qd = static_cast<double>(a.q);
    if (common.schedule_mode() == ScheduleMode::strict_paper && static_cast<double>(g) < std::sqrt(qd) * std::log(qd))
        o.warnings.push_back("strict mode: g is below sqrt(q) log q, outside the single-prime theorem's range");
    const WindowConfig cfg{h, g, a.start == "one" ? StartConvention::one_based : StartConvention::zero_based};
    if (cfg.first_start() + g - 1 + h > a.q)
        o.warnings.push_back("some windows run past q");
    const auto series = window_series(q, cfg);
    const EmpiricalSummary summary(series, a.moments);
    const auto plain = cdf_vs_gaussian(summary, lambdas, false);
    const auto corrected = cdf_vs_gaussian(summary, lambdas, true);

    json moments = json::array();
    double max_moment_diff = 0;
    std::ostringstream csv;
    csv << "section,key,empirical,reference,diff\n";
    for (unsigned j = 0; j <= a.moments; ++j) {
        const double mu = static_cast<double>(gaussian_moment(j));
        const double diff = std::fabs(summary.moment(j) - mu);
        max_moment_diff = std::max(max_moment_diff, diff);
        moments.push_back({{"j", j}, {"empirical", summary.moment(j)}, {"gaussian", mu}, {"diff", diff}});
        csv << "moment," << j << ',' << fmt17(summary.moment(j)) << ',' << fmt17(mu) << ',' << fmt17(diff) << '\n';
    }
    auto table = [&](const CdfComparison& cmp, const char* section) {
        json rows = json::array();
        for (const auto& r : cmp.rows) {
            rows.push_back({{"lambda", r.lambda}, {"empirical", r.empirical}, {"phi", r.phi}, {"diff", r.diff}});
            csv << section << ',' << fmt17(r.lambda) << ',' << fmt17(r.empirical) << ',' << fmt17(r.phi) << ','
                << fmt17(r.diff) << '\n';
        }
        return json{{"rows", rows}, {"max_diff", cmp.max_diff}};
    };
    o.results = {{"sample_count", summary.sample_count()},
                 {"moments", moments},
                 {"max_moment_diff", max_moment_diff},
                 {"cdf", table(plain, "cdf")},
                 {"cdf_continuity_corrected", table(corrected, "cdf_cc")}};
    o.csv = csv.str();
    return o;
}

// --- clt-interval -----------------------------------------------------------

struct CltIntervalArgs {
    std::string interval;
    double eta = 1.0;
    std::string g = "log_power:3";
    std::string h = "const:5";
    unsigned r_max = 1;
    double threshold_scale = 1.0;
    std::string g_convention = "per_prime";
};

Outcome clt_interval(const CltIntervalArgs& a, const Common& common)
{
    Outcome o;
    const auto iv = parse_interval(a.interval);
    const IntervalSpec spec{iv.Q, iv.delta, a.eta};
    const auto g = GSchedule::parse(a.g);
    const auto h = HSchedule::parse(a.h);
    if (a.g_convention != "per_prime" && a.g_convention != "interval_base")
        throw std::invalid_argument("--g-convention: expected per_prime or interval_base");

    ExceptionalOptions opt;
    opt.r_max = a.r_max;
    opt.threshold_scale = a.threshold_scale;
    opt.convention = a.g_convention == "per_prime" ? GConvention::per_prime : GConvention::interval_base;
    opt.mode = common.schedule_mode();
    opt.threads = common.threads;

    o.config = {{"interval", {{"Q", iv.Q}, {"delta", iv.delta}, {"eta_nominal", a.eta}}},
                {"g", g.describe()},
                {"h", h.describe()},
                {"rmax", a.r_max},
                {"threshold_scale", a.threshold_scale},
                {"g_convention", a.g_convention},
                {"mode", common.mode}};

    const auto rep = exceptional_sets(spec, g, h, opt);
    o.warnings = rep.warnings;

    json by_r = json::array();
    for (const auto& row : rep.by_r)
        by_r.push_back({{"r", row.r},
                        {"fraction_E1", row.fraction_E1},
                        {"fraction_E2", row.fraction_E2},
                        {"mean_sq_dev_even", row.mean_sq_dev_even},
                        {"mean_sq_dev_odd", row.mean_sq_dev_odd}});
    json records = json::array();
    std::ostringstream csv;
    csv << "q,r,parity,deviation,threshold,exceptional\n";
    for (const auto& rec : rep.records) {
        records.push_back({{"q", rec.q},
                           {"r", rec.r},
                           {"parity", rec.even ? "even" : "odd"},
                           {"g", rec.g},
                           {"h", rec.h},
                           {"deviation", rec.deviation},
                           {"threshold", rec.threshold},
                           {"exceptional", rec.exceptional}});
        csv << rec.q << ',' << rec.r << ',' << (rec.even ? "even" : "odd") << ',' << fmt17(rec.deviation) << ','
            << fmt17(rec.threshold) << ',' << (rec.exceptional ? "true" : "false") << '\n';
    }
    o.results = {{"prime_count", rep.prime_count},
                 {"g_at_Q", rep.g_at_Q},
                 {"fraction_E1", rep.fraction_E1},
                 {"fraction_E2", rep.fraction_E2},
                 {"fraction_union", rep.fraction_union},
                 {"by_r", by_r},
                 {"records", records}};
    o.csv = csv.str();
    return o;
}

// --- rmf-compare ------------------------------------------------------------

struct RmfCompareArgs {
    std::string interval;
    double eta = 1.0;
    unsigned vectors = 50;
    std::uint64_t length = 100;
    unsigned nonzeros = 5;
};

Outcome rmf_compare(const RmfCompareArgs& a, const Common& common)
{
    Outcome o;
    const auto iv = parse_interval(a.interval);
    const IntervalSpec spec{iv.Q, iv.delta, a.eta};
    spec.validate();
    if (a.length < 1 || a.length > FactorTable::max_limit)
        throw std::invalid_argument("--length: out of range");
    if (a.nonzeros < 1 || a.nonzeros > a.length)
        throw std::invalid_argument("--nonzeros: need 1 <= nonzeros <= length");
    if (a.vectors < 1)
        throw std::invalid_argument("--vectors: need at least one vector");

    o.config = {{"interval", {{"Q", iv.Q}, {"delta", iv.delta}, {"eta_nominal", a.eta}}},
                {"vectors", a.vectors},
                {"length", a.length},
                {"nonzeros", a.nonzeros},
                {"seed", common.seed}};
    if (a.length > iv.delta)
        o.warnings.push_back("coefficient length exceeds delta (the bound assumes N <= delta)");
    const auto prime_count = spec.primes().size();
    if (prime_count < min_primes_for_statistics)
        o.warnings.push_back("interval holds only " + std::to_string(prime_count) + " primes");

    const FactorTable table(std::max<std::uint64_t>(a.length, 2));
    SeededStream rng(common.seed);
    json rows = json::array();
    std::ostringstream csv;
    csv << "vector,nonzeros,lhs,rhs,ratio\n";
    double max_ratio = 0;
    for (unsigned v = 0; v < a.vectors; ++v) {
        std::vector<double> coeffs(a.length, 0.0);
        unsigned placed = 0;
        while (placed < a.nonzeros) {
            const auto n = rng.uniform(0, a.length - 1);
            if (coeffs[n] != 0)
                continue;
            double c = 0;
            while (c == 0)
                c = 2 * rng.unit() - 1;
            coeffs[n] = c;
            ++placed;
        }
        const auto r = fact3_ratio(spec, CoefficientVector(coeffs), table, common.threads);
        max_ratio = std::max(max_ratio, r.ratio);
        rows.push_back({{"vector", v}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"ratio", r.ratio}});
        csv << v << ',' << a.nonzeros << ',' << fmt17(r.lhs) << ',' << fmt17(r.rhs) << ',' << fmt17(r.ratio) << '\n';
    }

    // single-coefficient identity on the smallest non-square n0 >= 2 below Q
    const std::uint64_t n0 = 2;
    std::vector<double> e(n0, 0.0);
    e[n0 - 1] = 1;
    const double lhs = avg_character_variance(spec, CoefficientVector(e), common.threads);
    std::uint64_t coprime = 0;
    for (auto q : spec.primes())
        coprime += n0 % q != 0;
    const long double scale = std::log(static_cast<long double>(iv.Q)) / static_cast<long double>(iv.delta);
    const double expected = static_cast<double>(scale * static_cast<long double>(coprime));
    const bool identity = lhs == expected;

    o.results = {{"prime_count", prime_count},
                 {"rows", rows},
                 {"max_ratio", max_ratio},
                 {"single_coefficient_identity",
                  {{"n0", n0}, {"value", lhs}, {"expected", expected}, {"holds", identity}}}};
    o.csv = csv.str();
    if (!identity) {
        o.warnings.push_back("single-coefficient identity failed");
        o.status = invariant_violation;
    }
    return o;
}

// --- sieve-verify -----------------------------------------------------------

struct SieveArgs {
    std::uint64_t z = 10;
    std::uint64_t D = 0;
    std::uint64_t n_max = 100000;
    std::string interval;
};

Outcome sieve_verify(const SieveArgs& a, const Common&)
{
    Outcome o;
    const std::uint64_t D = a.D == 0 ? a.z : a.D;
    o.config = {{"z", a.z}, {"D", D}, {"nmax", a.n_max}, {"interval", a.interval}};
    const auto sys = build_selberg(a.z, D);
    const auto rep = verify_indicator(sys, a.n_max);
    const auto mass = abs_weight_sum(sys);

    o.results = {{"sifting_primes", sys.sifting_primes()},
                 {"lambda_support", sys.lambda().size()},
                 {"rho_support", sys.rho().size()},
                 {"n_max", rep.n_max},
                 {"rough_count", rep.rough_count},
                 {"kernels_checked", rep.kernels_checked},
                 {"min_sum", to_string(rep.min_sum)},
                 {"abs_weight_sum", to_string(mass)},
                 {"abs_weight_sum_value", mass.convert_to<double>()},
                 {"violations", 0}};
    std::ostringstream csv;
    csv << "key,value\n";
    csv << "z," << a.z << "\nD," << D << "\nn_max," << rep.n_max << "\nrough_count," << rep.rough_count
        << "\nkernels_checked," << rep.kernels_checked << "\nmin_sum," << fmt17(rep.min_sum.convert_to<double>())
        << "\nabs_weight_sum," << fmt17(mass.convert_to<double>()) << "\nviolations,0\n";
    if (!a.interval.empty()) {
        const auto iv = parse_interval(a.interval);
        const auto w = interval_weight_sum(sys, iv.Q, iv.delta);
        o.results["interval_weight"] = {{"Q", iv.Q},
                                        {"delta", iv.delta},
                                        {"sum", to_string(w.exact_sum)},
                                        {"comparator", w.comparator},
                                        {"ratio", w.ratio}};
        csv << "interval_sum," << fmt17(w.sum) << "\ninterval_comparator," << fmt17(w.comparator)
            << "\ninterval_ratio," << fmt17(w.ratio) << '\n';
    }
    o.csv = csv.str();
    return o;
}

// --- weil-check -------------------------------------------------------------

struct WeilArgs {
    unsigned trials = 1000;
    std::uint64_t q_min = 1000;
    std::uint64_t q_max = 100000;
    unsigned k_max = 4;
};

Outcome weil_check(const WeilArgs& a, const Common& common)
{
    Outcome o;
    if (a.q_min < 3 || a.q_min > a.q_max)
        throw std::invalid_argument("--qmin/--qmax: need 3 <= qmin <= qmax");
    if (a.q_max > (std::uint64_t{1} << 32))
        throw std::invalid_argument("--qmax: at most 2^32");
    if (a.k_max < 1)
        throw std::invalid_argument("--kmax: need at least one offset");
    o.config = {{"trials", a.trials}, {"qmin", a.q_min}, {"qmax", a.q_max}, {"kmax", a.k_max}, {"seed", common.seed}};

    auto primes = primes_in_interval(a.q_min, a.q_max);
    std::erase(primes, std::uint64_t{2});
    if (primes.empty())
        throw std::invalid_argument("no odd primes in [qmin, qmax]");

    SeededStream rng(common.seed);
    std::ostringstream csv;
    csv << "trial,q,k,X,Y,value,bound,holds\n";
    json rows = json::array();
    unsigned held = 0;
    double max_ratio = 0;
    for (unsigned t = 0; t < a.trials; ++t) {
        const std::uint64_t q = primes[rng.uniform(0, primes.size() - 1)];
        const auto k = static_cast<unsigned>(rng.uniform(1, std::min<std::uint64_t>(a.k_max, q)));
        std::vector<std::int64_t> gamma;
        while (gamma.size() < k) {
            const auto c = static_cast<std::int64_t>(rng.uniform(0, q - 1));
            if (std::find(gamma.begin(), gamma.end(), c) == gamma.end())
                gamma.push_back(c);
        }
        const std::uint64_t X = rng.uniform(0, q - 1);
        const std::uint64_t Y = rng.uniform(1, q);
        const auto w = weil_bound_check(PrimeModulus(q), gamma, X, Y);
        held += w.holds;
        max_ratio = std::max(max_ratio, std::fabs(static_cast<double>(w.value)) / w.bound);
        rows.push_back({{"q", q}, {"gamma", gamma}, {"X", X}, {"Y", Y}, {"value", w.value}, {"bound", w.bound},
                        {"holds", w.holds}});
        csv << t << ',' << q << ',' << k << ',' << X << ',' << Y << ',' << w.value << ',' << fmt17(w.bound) << ','
            << (w.holds ? "true" : "false") << '\n';
    }
    o.results = {{"trials", a.trials}, {"held", held}, {"max_ratio", max_ratio}, {"instances", rows}};
    o.csv = csv.str();
    if (held != a.trials) {
        o.warnings.push_back(std::to_string(a.trials - held) + " instances violate the incomplete-sum bound");
        o.status = invariant_violation;
    }
    return o;
}

// --- ktheta -----------------------------------------------------------------

struct KThetaArgs {
    unsigned r_max = 3;
    std::uint64_t h_max = 8;
};

Outcome ktheta(const KThetaArgs& a, const Common&)
{
    Outcome o;
    if (a.r_max < 1 || a.r_max > 12)
        throw std::invalid_argument("--rmax: need 1 <= rmax <= 12");
    if (a.h_max < 1 || a.h_max > 100000)
        throw std::invalid_argument("--hmax: need 1 <= hmax <= 10^5");
    o.config = {{"rmax", a.r_max}, {"hmax", a.h_max}};
    json rows = json::array();
    std::ostringstream csv;
    csv << "r,h,K,theta\n";
    for (unsigned r = 1; r <= a.r_max; ++r)
        for (std::uint64_t h = r; h <= a.h_max; ++h) {
            const auto rec = theta_extract(r, h);
            rows.push_back({{"r", r}, {"h", h}, {"K", big_to_json(rec.K)}, {"theta", rec.theta}});
            csv << r << ',' << h << ',' << rec.K.str() << ',' << fmt17(rec.theta) << '\n';
        }
    o.results = {{"rows", rows}};
    o.csv = csv.str();
    return o;
}

// --- prime-density ----------------------------------------------------------

struct DensityArgs {
    std::uint64_t X = 1000000;
    double eta = 0.525;
};

Outcome prime_density(const DensityArgs& a, const Common&)
{
    Outcome o;
    o.config = {{"X", a.X}, {"eta", a.eta}};
    const auto d = prime_density_check(a.X, a.eta);
    o.results = {{"length", d.length}, {"count", d.count}, {"comparator", d.comparator}, {"ratio", d.ratio}};
    std::ostringstream csv;
    csv << "X,eta,length,count,comparator,ratio\n"
        << d.X << ',' << fmt17(d.eta) << ',' << d.length << ',' << d.count << ',' << fmt17(d.comparator) << ','
        << fmt17(d.ratio) << '\n';
    o.csv = csv.str();
    if (d.count == 0)
        o.warnings.push_back("no primes in (X, X + X^eta]");
    return o;
}

int emit(const std::string& command, const Outcome& o, const Common& common, double seconds, std::ostream& out,
         std::ostream& err)
{
    std::string text;
    if (common.format == "csv") {
        text = o.csv;
        for (const auto& w : o.warnings)
            err << "warning: " << w << '\n';
    } else {
        json env;
        env["schema_version"] = schema_version;
        env["command"] = command;
        env["config"] = o.config;
        env["results"] = o.results;
        env["warnings"] = o.warnings;
        env["versions"] = versions();
        env["runtime"] = {{"timestamp", utc_timestamp()}, {"seconds", seconds}, {"threads", common.threads}};
        text = env.dump(2) + "\n";
    }
    if (common.out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(common.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << common.out_path << " for writing\n";
            return invalid_input;
        }
        file << text;
    }
    return o.status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Short Legendre-symbol sums: window statistics and the arithmetic behind them", "charsum"};
    app.set_help_flag("--help", "Print this help message and exit");   // -h would clash with --h
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read options from an INI/TOML file; command-line flags win");
    app.set_version_flag("--version", tool_version);

    Common common;
    app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", common.out_path, "Write output to this file instead of stdout");
    app.add_option("--mode", common.mode, "Schedule mode")->check(CLI::IsMember({"strict", "relaxed"}));
    app.add_option("--threads", common.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--seed", common.seed, "Seed for all randomised choices");

    CltSingleArgs single;
    auto* cs = app.add_subcommand("clt-single", "Window-sum moments and CDF against the Gaussian for one prime");
    cs->add_option("--q", single.q, "Odd prime modulus")->required();
    cs->add_option("--g", single.g, "Starting points: N, q-K, or a g schedule (default q-h)");
    cs->add_option("--h", single.h, "Window length: H or const:H");
    cs->add_option("--moments", single.moments, "Highest moment reported");
    cs->add_option("--lambdas", single.lambdas, "Comma-separated CDF grid");
    cs->add_option("--start", single.start, "Starting point convention: one (m = 1..g) or zero (m = 0..g-1)");

    CltIntervalArgs interval;
    auto* ci = app.add_subcommand("clt-interval", "Moment deviations and exceptional sets over primes in an interval");
    ci->add_option("--interval", interval.interval, "Q:DELTA")->required();
    ci->add_option("--eta", interval.eta, "Nominal eta, recorded only");
    ci->add_option("--g", interval.g, "log_power:A | small_power:E | const:C");
    ci->add_option("--h", interval.h, "const:H | sched:quarter | sched:strict");
    ci->add_option("--rmax", interval.r_max, "Largest r");
    ci->add_option("--threshold-scale", interval.threshold_scale, "Multiplier on g^(-1/8)");
    ci->add_option("--g-convention", interval.g_convention, "per_prime or interval_base");

    RmfCompareArgs rmf;
    auto* cr = app.add_subcommand("rmf-compare", "Interval character variance against the random model bound");
    cr->add_option("--interval", rmf.interval, "Q:DELTA")->required();
    cr->add_option("--eta", rmf.eta, "Nominal eta, recorded only");
    cr->add_option("--vectors", rmf.vectors, "Number of random coefficient vectors");
    cr->add_option("--length", rmf.length, "Coefficient vector length N");
    cr->add_option("--nonzeros", rmf.nonzeros, "Nonzero entries per vector");

    SieveArgs sieve;
    auto* sv = app.add_subcommand("sieve-verify", "Build Selberg weights and check the indicator property exactly");
    sv->add_option("--z", sieve.z, "Sift by odd primes below z");
    sv->add_option("--D", sieve.D, "Level of the base weights (default z)");
    sv->add_option("--nmax", sieve.n_max, "Check every n up to this bound");
    sv->add_option("--interval", sieve.interval, "Optional Q:DELTA for the interval weight sum");

    WeilArgs weil;
    auto* wc = app.add_subcommand("weil-check", "Random incomplete polynomial character sums against 9K sqrt(q) log q");
    wc->add_option("--trials", weil.trials, "Number of random instances");
    wc->add_option("--qmin", weil.q_min, "Smallest modulus");
    wc->add_option("--qmax", weil.q_max, "Largest modulus");
    wc->add_option("--kmax", weil.k_max, "Largest number of offsets");

    KThetaArgs kt;
    auto* kc = app.add_subcommand("ktheta", "Table of K(r, h) and theta(r, h)");
    kc->add_option("--rmax", kt.r_max, "Largest r");
    kc->add_option("--hmax", kt.h_max, "Largest h");

    DensityArgs density;
    auto* pd = app.add_subcommand("prime-density", "Primes in (X, X + X^eta] against X^eta / log X");
    pd->add_option("--X", density.X, "Base point");
    pd->add_option("--eta", density.eta, "Exponent in (0, 1]");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::CallForVersion&) {
        out << tool_version << '\n';
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return invalid_input;
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        Outcome outcome;
        std::string name;
        if (cs->parsed()) {
            name = "clt-single";
            outcome = clt_single(single, common);
        } else if (ci->parsed()) {
            name = "clt-interval";
            outcome = clt_interval(interval, common);
        } else if (cr->parsed()) {
            name = "rmf-compare";
            outcome = rmf_compare(rmf, common);
        } else if (sv->parsed()) {
            name = "sieve-verify";
            outcome = sieve_verify(sieve, common);
        } else if (wc->parsed()) {
            name = "weil-check";
            outcome = weil_check(weil, common);
        } else if (kc->parsed()) {
            name = "ktheta";
            outcome = ktheta(kt, common);
        } else {
            name = "prime-density";
            outcome = prime_density(density, common);
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        return emit(name, outcome, common, seconds, out, err);
    } catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << '\n';
        return invariant_violation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return invalid_input;
    }
}

}  // namespace charsum::cli
