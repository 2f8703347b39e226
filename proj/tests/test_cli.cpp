#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "wordrank/io.hpp"
#include "wordrank/selftest.hpp"

#include "fixtures.hpp"

using namespace wordrank;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Runs the CLI binary named by WORDRANK_CLI. Tests that need it are
// skipped when the variable is missing (e.g. running the test binary by
// hand outside ctest).
std::string temp_path(const std::string& tag) {
    static int counter = 0;
    return "/tmp/wordrank_test_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++) + "_" + tag;
}

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("WORDRANK_CLI");
    REQUIRE(bin != nullptr);
    std::string out_path = temp_path("out");
    std::string cmd = std::string(bin) + " " + args + " > " + out_path + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    std::ifstream f(out_path);
    std::ostringstream ss;
    ss << f.rdbuf();
    r.out = ss.str();
    std::remove(out_path.c_str());
    return r;
}

bool have_cli() { return std::getenv("WORDRANK_CLI") != nullptr; }

std::string chain_path(const std::string& name) { return fixtures::chains_dir() + "/" + name; }

std::string write_temp_chain(const nlohmann::json& j) {
    std::string path = temp_path("chain.json");
    std::ofstream f(path);
    f << j.dump(2);
    return path;
}

}  // namespace

TEST_CASE("chain specs round-trip through JSON") {
    auto spec = fixtures::two_block_cascade();
    auto j = chain_to_json(spec);
    auto back = chain_from_json(j);
    CHECK(back.n == spec.n);
    CHECK(back.p0 == spec.p0);
    CHECK(back.initial == spec.initial);
}

TEST_CASE("malformed chain specs are rejected with context") {
    CHECK_THROWS_AS(chain_from_json(nlohmann::json::array()), IoError);
    CHECK_THROWS_AS(chain_from_json({{"n", 2}}), IoError);
    nlohmann::json j = chain_to_json(fixtures::single_cycle());
    j["matrix"][1].erase(2);
    CHECK_THROWS_AS(chain_from_json(j), IoError);
    j = chain_to_json(fixtures::single_cycle());
    j["labels"] = {"only-one"};
    CHECK_THROWS_AS(chain_from_json(j), IoError);
}

TEST_CASE("bundled chain files match the reference constructions") {
    struct Row {
        const char* file;
        ChainSpec spec;
    };
    const Row rows[] = {
        {"acyclic.json", fixtures::acyclic()},
        {"golden_mean.json", fixtures::golden_mean()},
        {"cascaded_loops.json", fixtures::cascaded_loops()},
        {"parallel_loops.json", fixtures::parallel_loops()},
        {"single_cycle.json", fixtures::single_cycle()},
        {"single_cycle_start1.json", fixtures::single_cycle(false)},
        {"two_block_cascade.json", fixtures::two_block_cascade()},
    };
    for (const auto& row : rows) {
        INFO(row.file);
        auto spec = load_chain(chain_path(row.file));
        CHECK(spec.n == row.spec.n);
        CHECK(spec.p0 == row.spec.p0);
        CHECK(spec.initial == row.spec.initial);
    }
    auto letters = load_chain(chain_path("letters.json"));
    auto expect = from_letter_probabilities({0.2, 0.4, 0.4});
    CHECK(letters.p0 == expect.p0);
}

TEST_CASE("selftest is deterministic for a fixed seed") {
    SelftestOptions st;
    st.seed = 31337;
    st.chains = 12;
    auto a = run_selftest(st);
    auto b = run_selftest(st);
    CHECK(a.total_failed() == 0);
    REQUIRE(a.suites.size() == b.suites.size());
    for (std::size_t i = 0; i < a.suites.size(); ++i) {
        CHECK(a.suites[i].passed == b.suites[i].passed);
        CHECK(a.suites[i].failed == b.suites[i].failed);
    }
}

TEST_CASE("injected fault produces a counterexample dump") {
    SelftestOptions st;
    st.seed = 31337;
    st.chains = 6;
    st.inject_fault = true;
    auto report = run_selftest(st);
    CHECK(report.total_failed() >= 1);
    CHECK_FALSE(report.first_failure.empty());
    CHECK_FALSE(report.counterexample_json.empty());
    CHECK(nlohmann::json::parse(report.counterexample_json).contains("matrix"));
}

TEST_CASE("cli classify reports the power regime", "[cli]") {
    if (!have_cli()) SKIP("WORDRANK_CLI not set");
    auto r = run_cli("classify " + chain_path("golden_mean.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("regime: Power") != std::string::npos);
    CHECK(r.out.find("0.6942419136") != std::string::npos);
    CHECK(r.out.find("exact_order: true") != std::string::npos);
}

TEST_CASE("cli nu honors the initial distribution", "[cli]") {
    if (!have_cli()) SKIP("WORDRANK_CLI not set");
    auto r = run_cli("nu " + chain_path("single_cycle_start1.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("nu: 0.693147180559945") != std::string::npos);
}

TEST_CASE("cli validate rejects a broken chain with exit 1", "[cli]") {
    if (!have_cli()) SKIP("WORDRANK_CLI not set");
    auto j = chain_to_json(fixtures::single_cycle());
    j["matrix"][1][2] = 0.6;  // row sums to 1.1
    auto path = write_temp_chain(j);
    auto r = run_cli("validate " + path);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("sums to") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("cli output is byte-identical across runs", "[cli]") {
    if (!have_cli()) SKIP("WORDRANK_CLI not set");
    const std::string cmd = "report " + chain_path("parallel_loops.json") + " --top 500";
    auto a = run_cli(cmd);
    auto b = run_cli(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    auto c = run_cli("enumerate " + chain_path("golden_mean.json") + " --top 50");
    auto d = run_cli("enumerate " + chain_path("golden_mean.json") + " --top 50");
    CHECK(c.out == d.out);
    CHECK(c.out.find("rank,probability,log10_probability,word") == 0);
}

TEST_CASE("cli enumerate jsonl carries labeled words", "[cli]") {
    if (!have_cli()) SKIP("WORDRANK_CLI not set");
    auto r = run_cli("enumerate " + chain_path("letters.json") + " --top 3 --format jsonl");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"word\":\"a-space\"") != std::string::npos);
}

TEST_CASE("cli selftest exits cleanly and fails under fault injection", "[cli]") {
    if (!have_cli()) SKIP("WORDRANK_CLI not set");
    auto ok = run_cli("selftest --seed 5 --chains 8");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("all properties hold") != std::string::npos);
    auto bad = run_cli("selftest --seed 5 --chains 8 --inject-fault");
    CHECK(bad.exit_code == 2);
    CHECK(bad.out.find("counterexample") != std::string::npos);
}

TEST_CASE("cli rejects unknown flags", "[cli]") {
    if (!have_cli()) SKIP("WORDRANK_CLI not set");
    auto r = run_cli("classify --no-such-flag x.json");
    CHECK(r.exit_code != 0);
}
