#include <doctest.h>

#include "robusched/csv.hpp"
#include "robusched/economics.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <algorithm>
#include <cmath>
#include <string>

namespace {

std::string cli_path() {
    const char* p = std::getenv("ROBUSCHED_BIN");
    REQUIRE(p != nullptr);
    return p;
}

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    return RunResult{WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("eval prints the comparison table") {
    const RunResult res = run("eval --m 3 --s 2");
    CHECK(res.exit_code == 0);
    CHECK(res.out.rfind("quantity,exact,closed,abs_gap\n", 0) == 0);
    CHECK(res.out.find("profit,") != std::string::npos);
}

namespace {

// value of `column` in the CSV row starting with `prefix`
double csv_field(const std::string& csv, const std::string& prefix, int column) {
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) != 0) continue;
        std::istringstream ls(line);
        std::string cell;
        for (int i = 0; i <= column; ++i) std::getline(ls, cell, ',');
        return std::stod(cell);
    }
    REQUIRE(false);
    return 0.0;
}

} // namespace

TEST_CASE("eval closed forms stay near the exact values") {
    const RunResult res = run("eval --m 3 --s 2");
    REQUIRE(res.exit_code == 0);
    for (const char* row : {"t_mean", "profit", "fw_at_deadline"}) {
        const double exact = csv_field(res.out, row, 1);
        const double gap = csv_field(res.out, row, 3);
        CHECK(gap <= 0.05 * (1.0 + std::abs(exact)));
    }
}

TEST_CASE("non-ergodic point exits 2") {
    CHECK(run("eval --m 3 --s 1").exit_code == 2);
}

TEST_CASE("malformed config exits 1") {
    const std::string path = "/tmp/robusched_bad_config.json";
    std::ofstream(path) << "{ not json";
    CHECK(run("eval --m 3 --s 2 --config " + path).exit_code == 1);
    std::remove(path.c_str());
}

TEST_CASE("dump-config round-trips through the parser") {
    const std::string path = "/tmp/robusched_dumped.json";
    CHECK(run("--dump-config --out " + path).exit_code == 0);
    const RunResult reread = run("eval --m 3 --s 2 --config " + path);
    CHECK(reread.exit_code == 0);
    // dumping again through the loaded config is byte-identical
    const std::string path2 = "/tmp/robusched_dumped2.json";
    CHECK(run("--dump-config --config " + path + " --out " + path2).exit_code == 0);
    CHECK(slurp(path) == slurp(path2));
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("surface grid has the right shape") {
    const RunResult res = run("surface --metric wait --grid-n 5");
    CHECK(res.exit_code == 0);
    size_t lines = 0;
    for (char c : res.out)
        if (c == '\n') ++lines;
    CHECK(lines == 26); // header + 5x5
    CHECK(res.out.find("nan") == std::string::npos);
    CHECK(res.out.find("inf") == std::string::npos);
}

TEST_CASE("wait surface peaks at the slow corner") {
    const RunResult res = run("surface --metric wait --grid-n 9");
    REQUIRE(res.exit_code == 0);
    std::istringstream in(res.out);
    std::string line;
    std::getline(in, line); // header
    double first = -1.0, max_seen = -1.0;
    while (std::getline(in, line)) {
        const auto p1 = line.find(','), p2 = line.rfind(',');
        const double v = std::stod(line.substr(p2 + 1));
        if (first < 0) first = v; // row for (m_min, s_min)
        max_seen = std::max(max_seen, v);
    }
    CHECK(first == max_seen);
}

TEST_CASE("trace emits residual-bounded vertices") {
    const RunResult res = run("trace --metric profit --columns 11");
    CHECK(res.exit_code == 0);
    CHECK(res.out.rfind("m,s,residual\n", 0) == 0);
}

TEST_CASE("radius reports both methods") {
    const RunResult res = run("radius --m 3.2 --s 2.2 --metric profit");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("BruteForce") != std::string::npos);
    CHECK(res.out.find("SampledOracle") != std::string::npos);
}

TEST_CASE("radius exits 3 when no contact is reachable") {
    // tiny r_max via a custom config
    const std::string cfg_path = "/tmp/robusched_rmax.json";
    RunResult dump = run("--dump-config");
    REQUIRE(dump.exit_code == 0);
    std::string text = dump.out;
    const std::string key = "\"r_max\": 10000.0";
    const auto pos = text.find(key);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, key.size(), "\"r_max\": 0.01");
    std::ofstream(cfg_path) << text;
    CHECK(run("radius --m 3.2 --s 2.2 --metric profit --config " + cfg_path).exit_code == 3);
    std::remove(cfg_path.c_str());
}

TEST_CASE("simulate emits a summary row") {
    const RunResult res = run("simulate --m 3 --s 2 --arrivals 20000 --warmup 1000 --seed 4");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("mean_wait") != std::string::npos);
    CHECK(res.out.find("\n3,3,2,") != std::string::npos); // m_requested,m_simulated,s
}

TEST_CASE("simulate can dump per-request waits") {
    const std::string path = "/tmp/robusched_waits.csv";
    const RunResult res = run("simulate --m 3 --s 2 --arrivals 5000 --warmup 100 --seed 3 "
                              "--dump-waits " + path);
    CHECK(res.exit_code == 0);
    const std::string dump = slurp(path);
    CHECK(dump.rfind("arrival_time,wait\n", 0) == 0);
    size_t lines = 0;
    for (char c : dump)
        if (c == '\n') ++lines;
    CHECK(lines == 4901); // header + (arrivals - warmup)
    std::remove(path.c_str());
}

TEST_CASE("surface profit values match library point queries exactly") {
    const RunResult res = run("surface --metric profit --grid-n 3");
    REQUIRE(res.exit_code == 0);
    const robusched::economics::EconomicParams econ(15, 3, 1, 0.7, 4, 2, 2.1, 1.0);
    // corner cell (m_min, s_min): same code path, same 12-digit rendering
    const std::string expect =
        "3,2," + robusched::fmt12(robusched::economics::profit_closed(3, 2, 4, econ)) + "\n";
    CHECK(res.out.find(expect) != std::string::npos);
}

TEST_CASE("compare emits algos x runs rows") {
    const std::string cfg_path = "/tmp/robusched_fast.json";
    RunResult dump = run("--dump-config");
    std::string text = dump.out;
    const std::string key = "\"max_iters\": 100";
    const auto pos = text.find(key);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, key.size(), "\"max_iters\": 10");
    std::ofstream(cfg_path) << text;
    const RunResult res = run("compare --algos dbo,de --runs 2 --config " + cfg_path);
    CHECK(res.exit_code == 0);
    size_t lines = 0;
    for (char c : res.out)
        if (c == '\n') ++lines;
    CHECK(lines == 5); // header + 2 algos x 2 runs
    std::remove(cfg_path.c_str());
}

TEST_CASE("seeded commands are byte-identical across runs") {
    const std::string a = run("optimize --scenario profit_only --algo de --seed 11").out;
    const std::string b = run("optimize --scenario profit_only --algo de --seed 11").out;
    CHECK(a == b);
    CHECK(!a.empty());

    const std::string s1 = run("simulate --m 3 --s 2 --arrivals 20000 --warmup 500 --seed 9").out;
    const std::string s2 = run("simulate --m 3 --s 2 --arrivals 20000 --warmup 500 --seed 9").out;
    CHECK(s1 == s2);
}
