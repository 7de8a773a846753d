// End-to-end checks of the liouville-lab binary: output contracts, exit
// codes, determinism across reruns/threads/simd, and the golden workflow.
// argv[1] is the path to the built binary.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "liouville/kernels.hpp"
#include "liouville/sieve.hpp"
#include "subprocess.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using liouville::u64;

static std::string g_cli;

namespace {

CmdResult run(const std::string& args) { return run_cmd(sh_quote(g_cli) + " " + args); }

CmdResult run_merged(const std::string& args) {
    return run_cmd(sh_quote(g_cli) + " " + args + " 2>&1");
}

json out_json(const std::string& args) {
    CmdResult r = run(args);
    REQUIRE(r.exit_code == 0);
    return json::parse(r.out);
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

fs::path fresh_dir(const char* tag) {
    fs::path d = fs::temp_directory_path() /
                 (std::string("liouville-cli-") + tag + "-" +
                  std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("variance: csv contract and json mirror") {
    CmdResult r = run("variance --x 50000 --h 50");
    REQUIRE(r.exit_code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "x_start,h,count,mean_sq,normalized_variance,max_abs");

    CmdResult rt = run("variance --x 50000 --h 50 --thresholds 0.1,0.25");
    REQUIRE(rt.exit_code == 0);
    auto lst = lines_of(rt.out);
    CHECK(lst[0] ==
          "x_start,h,count,mean_sq,normalized_variance,max_abs,exc_0.1,exc_0.25");

    json j = out_json("variance --x 50000 --h 50 --thresholds 0.1,0.25 --format json");
    CHECK(j["command"] == "variance");
    std::istringstream row(lst[1]);
    std::string cell;
    std::vector<std::string> cols;
    while (std::getline(row, cell, ',')) cols.push_back(cell);
    REQUIRE(cols.size() == 8);
    CHECK(std::stoull(cols[0]) == j["results"]["x_start"].get<u64>());
    CHECK(std::stoull(cols[1]) == j["results"]["h"].get<u64>());
    CHECK(std::stoull(cols[2]) == j["results"]["count"].get<u64>());
    CHECK(std::stoull(cols[6]) ==
          j["results"]["exceptional"][0]["count"].get<u64>());
}

TEST_CASE("correlate: documented example and envelope") {
    json j = out_json("correlate --n 8 --shifts 0,1");
    CHECK(j["command"] == "correlate");
    CHECK(j["seed"] == 0);
    CHECK(j["params"]["n"] == 8);
    CHECK(j["results"]["sum"] == -4);
    CHECK(j["results"]["normalized"] == -0.5);
}

TEST_CASE("exit codes: usage errors are 2, runtime failures are 1") {
    CHECK(run("correlate --n 10 --shifts 0,0").exit_code == 2);
    CHECK(run_merged("correlate --n 10 --shifts 0,0").out.find("distinct") !=
          std::string::npos);
    CHECK(run("correlate --n 10 --shifts 0,-1").exit_code == 2);
    CHECK(run_merged("correlate --n 10 --shifts 0,-1")
              .out.find("shifts must be >= 0") != std::string::npos);

    CHECK(run("frobnicate --x 1").exit_code == 2);
    CHECK(run("variance --x abc --h 10").exit_code == 2);
    CHECK(run("variance --h 10").exit_code == 2);          // missing required
    CHECK(run("").exit_code == 2);                          // no subcommand
    CHECK(run("--help").exit_code == 0);
    CHECK(run("variance --x 1000 --h 10 --format xml").exit_code == 2);
    CHECK(run("variance --x 1000 --h 10 --simd sse9").exit_code == 2);
    CHECK(run("smooth --n 3 --eps 0.5 --c 1").exit_code == 2);  // module precondition
    CHECK(run("sieve --lo 1 --hi 1000 --output /nonexistent-dir-xyz/out.json")
              .exit_code == 1);
}

TEST_CASE("reruns are byte-identical; thread count never changes bytes") {
    std::string cmd = "patterns --n 20000 --k 3 --seed 5";
    CmdResult a = run(cmd), b = run(cmd);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    CmdResult t1 = run("variance --x 50000 --h 32 --format json --threads 1");
    CmdResult t4 = run("variance --x 50000 --h 32 --format json --threads 4");
    REQUIRE(t1.exit_code == 0);
    CHECK(t1.out == t4.out);

    CmdResult c1 = run("correlate --n 100000 --shifts 0,1 --threads 1");
    CmdResult c4 = run("correlate --n 100000 --shifts 0,1 --threads 4");
    CHECK(c1.out == c4.out);
}

TEST_CASE("simd dispatch: integer paths bit-exact, fp paths near-identical") {
    if (!liouville::kernels::avx2_available()) return;

    CmdResult s = run("variance --x 50000 --h 64 --format json --simd scalar");
    CmdResult v = run("variance --x 50000 --h 64 --format json --simd avx2");
    REQUIRE(s.exit_code == 0);
    CHECK(s.out == v.out);

    json ps = json::parse(run("plancherel --random-n 40 --t 2 --seed 3 --simd scalar").out);
    json pv = json::parse(run("plancherel --random-n 40 --t 2 --seed 3 --simd avx2").out);
    double ls = ps["results"]["lhs"].get<double>();
    double lv = pv["results"]["lhs"].get<double>();
    double rs = ps["results"]["rhs"].get<double>();
    double rv = pv["results"]["rhs"].get<double>();
    CHECK(std::abs(ls - lv) <= 1e-9 * std::abs(ls));
    CHECK(std::abs(rs - rv) <= 1e-9 * std::abs(rs));
    CHECK(ps["results"]["rel_err"].get<double>() < 1e-3);
    CHECK(pv["results"]["rel_err"].get<double>() < 1e-3);
}

TEST_CASE("golden workflow: write, match, refuse, env precedence") {
    fs::path A = fresh_dir("golden-a");
    fs::path B = fresh_dir("golden-b");
    std::string base = "correlate --n 5000 --shifts 0,2 --golden corr-a --golden-dir " +
                       sh_quote(A.string());

    CmdResult w = run_merged(base);
    REQUIRE(w.exit_code == 0);
    CHECK(w.out.find("golden 'corr-a': written") != std::string::npos);
    CHECK(fs::exists(A / "corr-a.json"));

    CmdResult m = run_merged(base);
    REQUIRE(m.exit_code == 0);
    CHECK(m.out.find("golden 'corr-a': matched") != std::string::npos);

    CmdResult refuse = run_merged(
        "correlate --n 5001 --shifts 0,2 --golden corr-a --golden-dir " +
        sh_quote(A.string()));
    CHECK(refuse.exit_code == 1);
    CHECK(refuse.out.find("comparison refused") != std::string::npos);

    CmdResult env = run_cmd("LIOUVILLE_LAB_GOLDEN=" + sh_quote(B.string()) + " " +
                            sh_quote(g_cli) +
                            " correlate --n 700 --shifts 0,1 --golden env-test"
                            " --golden-dir " + sh_quote(A.string()) + " 2>&1");
    REQUIRE(env.exit_code == 0);
    CHECK(fs::exists(B / "env-test.json"));
    CHECK_FALSE(fs::exists(A / "env-test.json"));

    fs::remove_all(A);
    fs::remove_all(B);
}

TEST_CASE("sieve results agree with the library") {
    using namespace liouville;
    FactorTable t = sieve_segment(1, 100000);
    u64 primes = 0, squarefree = 0, max_omega = 0;
    long long lambda_sum = 0;
    for (u64 n = 1; n <= 100000; ++n) {
        if (t.is_prime(n)) ++primes;
        if (t.is_squarefree(n)) ++squarefree;
        max_omega = std::max<u64>(max_omega, t.omega(n));
        lambda_sum += t.lambda(n);
    }
    json j = out_json("sieve --lo 1 --hi 100000");
    CHECK(j["results"]["prime_count"] == primes);
    CHECK(j["results"]["squarefree_count"] == squarefree);
    CHECK(j["results"]["lambda_sum"] == lambda_sum);
    CHECK(j["results"]["max_omega"] == max_omega);
    CHECK(j["results"]["count"] == 100000);
}

TEST_CASE("output routing: --output file, --csv shorthand, kv fallback") {
    fs::path dir = fresh_dir("out");
    fs::path f = dir / "out.json";
    CmdResult r = run("sieve --lo 1 --hi 1000 --output " + sh_quote(f.string()));
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.empty());
    std::ifstream in(f);
    json j = json::parse(in);
    CHECK(j["command"] == "sieve");

    fs::path v = dir / "v.csv";
    CmdResult rv = run("variance --x 20000 --h 16 --csv " + sh_quote(v.string()));
    REQUIRE(rv.exit_code == 0);
    CHECK(rv.out.empty());
    std::ifstream vin(v);
    std::string head;
    std::getline(vin, head);
    CHECK(head == "x_start,h,count,mean_sq,normalized_variance,max_abs");

    CmdResult kv = run("correlate --n 1000 --shifts 0,1 --format csv");
    REQUIRE(kv.exit_code == 0);
    auto ls = lines_of(kv.out);
    REQUIRE(!ls.empty());
    CHECK(ls[0] == "key,value");
    bool saw_cmd = false, saw_sum = false;
    for (const auto& l : ls) {
        if (l == "command,correlate") saw_cmd = true;
        if (l.rfind("results.sum,", 0) == 0) saw_sum = true;
    }
    CHECK(saw_cmd);
    CHECK(saw_sum);

    fs::remove_all(dir);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-liouville-lab>\n");
        return 1;
    }
    g_cli = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(1, argv);
    return ctx.run();
}
