#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"

using json = nlohmann::json;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int status = charsum::cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

json run_json(std::vector<std::string> args)
{
    const auto r = run(std::move(args));
    REQUIRE(r.status == 0);
    return json::parse(r.out);
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("charsum_test_" + name);
}

}  // namespace

TEST_CASE("envelope layout")
{
    const auto env = run_json({"ktheta", "--rmax", "2", "--hmax", "4"});
    CHECK(env["schema_version"] == charsum::cli::schema_version);
    CHECK(env["command"] == "ktheta");
    CHECK(env["config"]["rmax"] == 2);
    CHECK(env["warnings"].is_array());
    CHECK(env["versions"]["charsum"] == charsum::cli::tool_version);
    CHECK(env["runtime"]["timestamp"].is_string());
    CHECK(env["runtime"]["seconds"].is_number());
    const auto& rows = env["results"]["rows"];
    REQUIRE(rows.size() == 4 + 3);
    CHECK(rows[5]["r"] == 2);
    CHECK(rows[5]["h"] == 3);
    CHECK(rows[5]["K"] == 21);
}

TEST_CASE("ktheta csv")
{
    const auto r = run({"ktheta", "--rmax", "3", "--hmax", "8", "--format", "csv"});
    REQUIRE(r.status == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "r,h,K,theta");
    int rows = 0;
    bool saw = false;
    while (std::getline(in, line)) {
        ++rows;
        if (line.rfind("2,3,21,", 0) == 0) {
            saw = true;
            CHECK(std::stod(line.substr(7)) == doctest::Approx(0.17712434446770464).epsilon(1e-15));
        }
    }
    CHECK(rows == 8 + 7 + 6);
    CHECK(saw);
}

TEST_CASE("clt-single degenerate run")
{
    const auto env = run_json({"clt-single", "--q", "101", "--g", "1", "--h", "1"});
    CHECK(env["results"]["sample_count"] == 1);
    const double m2 = env["results"]["moments"][2]["empirical"];
    CHECK((m2 == 0 || m2 == 1));
    CHECK(env["config"]["g"] == 1);

    const auto minus = run_json({"clt-single", "--q", "1009", "--g", "q-11", "--h", "10"});
    CHECK(minus["config"]["g"] == 998);
    const auto sched = run_json({"clt-single", "--q", "1009", "--g", "log_power:2", "--h", "const:3"});
    CHECK(sched["config"]["g"] == 47);   // floor(log(1009)^2)
    CHECK(sched["config"]["h"] == 3);

    const auto strict = run_json({"clt-single", "--q", "1009", "--g", "10", "--h", "3", "--mode", "strict"});
    CHECK(strict["warnings"].size() == 1);
}

TEST_CASE("clt-single defaults to the full period")
{
    const auto env = run_json({"clt-single", "--q", "10007", "--h", "20", "--moments", "6"});
    CHECK(env["config"]["g"] == 10007 - 20);
    CHECK(env["results"]["moments"].size() == 7);
    CHECK(env["warnings"].empty());
    const double m2 = env["results"]["moments"][2]["empirical"];
    CHECK(std::fabs(m2 - 1) < 0.1);
}

TEST_CASE("exit codes")
{
    CHECK(run({"clt-interval", "--interval", "24:4"}).status == 2);
    CHECK(run({"clt-interval", "--interval", "garbage"}).status == 2);
    CHECK(run({"clt-single", "--q", "100"}).status == 2);
    CHECK(run({"clt-single", "--q", "101", "--h", "101"}).status == 2);
    CHECK(run({"clt-single", "--q", "101", "--lambdas", "1,x"}).status == 2);
    CHECK(run({"clt-single"}).status == 2);
    CHECK(run({}).status == 2);
    CHECK(run({"nonsense"}).status == 2);
    CHECK(run({"ktheta", "--format", "xml"}).status == 2);
    CHECK(run({"ktheta", "--rmax", "0"}).status == 2);
    CHECK(run({"ktheta", "--threads", "0"}).status == 2);
    CHECK(run({"sieve-verify", "--z", "10", "--D", "5"}).status == 2);
    CHECK(run({"prime-density", "--X", "10"}).status == 2);
    CHECK(run({"ktheta", "--out", "/nonexistent/dir/file.json"}).status == 2);

    const auto help = run({"--help"});
    CHECK(help.status == 0);
    CHECK(help.out.find("clt-interval") != std::string::npos);
}

TEST_CASE("clt-interval outputs")
{
    const std::vector<std::string> base{"clt-interval", "--interval", "100000:2000", "--rmax", "2"};
    auto args = base;
    args.insert(args.end(), {"--format", "csv"});
    const auto csv = run(args);
    REQUIRE(csv.status == 0);
    CHECK(csv.out.rfind("q,r,parity,deviation,threshold,exceptional\n", 0) == 0);
    CHECK(csv.err.find("relaxed mode") != std::string::npos);

    const auto env = run_json(base);
    const auto& res = env["results"];
    CHECK(res["records"].size() == res["prime_count"].get<std::size_t>() * 4);
    CHECK(res["by_r"].size() == 2);
    CHECK(env["config"]["g"] == "log_power:3");
    CHECK(env["config"]["h"] == "const:5");

    // CSV keeps full precision
    std::istringstream in(csv.out);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    const auto c1 = first.find(',', first.find(',', first.find(',') + 1) + 1);
    const double dev = std::stod(first.substr(c1 + 1, first.find(',', c1 + 1) - c1 - 1));
    CHECK(dev == res["records"][0]["deviation"].get<double>());

    // larger threshold scale never increases the exceptional fractions
    auto big = base;
    big.insert(big.end(), {"--threshold-scale", "10"});
    const auto env10 = run_json(big);
    CHECK(env10["results"]["fraction_E1"].get<double>() <= res["fraction_E1"].get<double>());
    CHECK(env10["results"]["fraction_E2"].get<double>() <= res["fraction_E2"].get<double>());
}

TEST_CASE("determinism across thread counts and runs")
{
    for (const char* cmd : {"clt-interval", "rmf-compare"}) {
        std::vector<std::string> args{cmd, "--interval", "100000:3000", "--seed", "5", "--format", "csv"};
        auto a1 = args, a3 = args;
        a1.insert(a1.end(), {"--threads", "1"});
        a3.insert(a3.end(), {"--threads", "3"});
        const auto r1 = run(a1), r3 = run(a3), again = run(a1);
        REQUIRE(r1.status == 0);
        CHECK(r1.out == r3.out);
        CHECK(r1.out == again.out);
    }
    const auto w1 = run_json({"weil-check", "--trials", "50", "--seed", "9"});
    const auto w2 = run_json({"weil-check", "--trials", "50", "--seed", "9"});
    const auto w3 = run_json({"weil-check", "--trials", "50", "--seed", "10"});
    CHECK(w1["results"] == w2["results"]);
    CHECK(w1["results"] != w3["results"]);
}

TEST_CASE("theorem checks through the CLI")
{
    const auto w = run_json({"weil-check", "--trials", "200", "--seed", "1"});
    CHECK(w["results"]["held"] == 200);

    const auto s = run_json({"sieve-verify", "--z", "10", "--D", "9", "--nmax", "100000"});
    CHECK(s["results"]["violations"] == 0);
    CHECK(s["results"]["sifting_primes"] == json::array({3, 5, 7}));

    const auto r = run_json({"rmf-compare", "--interval", "100000:10000", "--vectors", "5"});
    CHECK(r["results"]["single_coefficient_identity"]["holds"] == true);
    CHECK(r["results"]["rows"].size() == 5);

    const auto d = run_json({"prime-density", "--X", "100", "--eta", "1"});
    CHECK(d["results"]["count"] == 21);
}

TEST_CASE("config file with flag overrides")
{
    const auto path = temp_file("config.ini");
    {
        std::ofstream f(path);
        f << "format=csv\n"
             "[ktheta]\n"
             "rmax=2\n"
             "hmax=5\n";
    }
    const auto from_file = run({"--config", path.string(), "ktheta"});
    REQUIRE(from_file.status == 0);
    CHECK(from_file.out.rfind("r,h,K,theta\n", 0) == 0);
    CHECK(std::count(from_file.out.begin(), from_file.out.end(), '\n') == 1 + 5 + 4);

    const auto overridden = run({"--config", path.string(), "ktheta", "--hmax", "3", "--format", "json"});
    REQUIRE(overridden.status == 0);
    const auto env = json::parse(overridden.out);
    CHECK(env["config"]["rmax"] == 2);
    CHECK(env["config"]["hmax"] == 3);
    std::filesystem::remove(path);

    CHECK(run({"--config", "/nonexistent/charsum.ini", "ktheta"}).status == 2);
}

TEST_CASE("output file")
{
    const auto path = temp_file("out.csv");
    const auto r = run({"ktheta", "--rmax", "1", "--hmax", "2", "--format", "csv", "--out", path.string()});
    REQUIRE(r.status == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == "r,h,K,theta\n1,1,1,0\n1,2,2,0\n");
    std::filesystem::remove(path);
}
