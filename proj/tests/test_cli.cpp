#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "latflow/maps.hpp"

// Drives the installed binary end to end. LATFLOW_CLI_PATH is injected by the
// build so the test always runs the binary it was built with.

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_name(const std::string& tag) {
    return "/tmp/latflow_cli_" + std::to_string(getpid()) + "_" + tag;
}

RunResult run_cli(const std::string& args) {
    std::string capture = temp_name("capture");
    std::string cmd = std::string(LATFLOW_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = slurp(capture);
    std::remove(capture.c_str());
    return r;
}

}  // namespace

TEST_CASE("maps-list names the builtins") {
    auto r = run_cli("maps-list");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("mahler2") != std::string::npos);
    CHECK(r.output.find("nonextremal") != std::string::npos);
    CHECK(r.output.find("line_iz") != std::string::npos);
}

TEST_CASE("exponent reports are reproducible byte for byte") {
    std::string out = temp_name("exp");
    std::string args = "exponent --map mahler2 --x 0.31 --y 0.43 --hmax 120 --no-timestamp --out " + out;
    auto r1 = run_cli(args);
    REQUIRE(r1.exit_code == 0);
    std::string report1 = slurp(out), csv1 = slurp(out + ".csv");
    CHECK(report1.find("omega") != std::string::npos);
    CHECK(csv1.find("height") != std::string::npos);
    auto r2 = run_cli(args);
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(out) == report1);
    CHECK(slurp(out + ".csv") == csv1);
    std::remove(out.c_str());
    std::remove((out + ".csv").c_str());
}

TEST_CASE("sampled exponent runs are worker independent") {
    std::string a = temp_name("expw1"), b = temp_name("expw3");
    std::string common =
        "exponent --map mahler2 --seed 5 --samples 6 --hmax 60 --no-timestamp --out ";
    auto r1 = run_cli(common + a + " --workers 1");
    auto r3 = run_cli(common + b + " --workers 3");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r3.exit_code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a + ".csv") == slurp(b + ".csv"));
    for (const auto& f : {a, b}) {
        std::remove(f.c_str());
        std::remove((f + ".csv").c_str());
    }
}

TEST_CASE("a config file overrides command-line flags") {
    std::string cfg = temp_name("cfg");
    {
        std::ofstream c(cfg);
        c << "# pin the point\n";
        c << "x = 0.125\n";
        c << "hmax = 40\n";
    }
    auto r = run_cli("exponent --map mahler2 --x 0.9 --no-timestamp --config " + cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("x = 0.125") != std::string::npos);
    std::remove(cfg.c_str());
    // unknown keys are configuration errors
    {
        std::ofstream c(cfg);
        c << "no_such_option = 3\n";
    }
    auto bad = run_cli("exponent --config " + cfg);
    CHECK(bad.exit_code == 2);
    std::remove(cfg.c_str());
}

TEST_CASE("usage errors exit with the configuration code") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("exponent --map no_such_map").exit_code == 2);
    CHECK(run_cli("goodfit --fn not_a_function --seed 1").exit_code == 2);
    // sampled runs refuse to invent a seed
    CHECK(run_cli("goodfit --fn x").exit_code == 2);
}

TEST_CASE("numeric guards exit with their own code") {
    // a one-dimensional map file keeps the time sweep cheap before the cap trips
    std::string mpath = temp_name("guardmap");
    std::ofstream(mpath) << latflow::serialize_map(latflow::builtin_map("mahler1"));
    auto r = run_cli("orbit --map " + mpath + " --x 0.31 --y 0.24 --tmax 250 --gamma 0.1");
    CHECK(r.exit_code == 3);
    std::remove(mpath.c_str());
}

TEST_CASE("goodfit over a closed form prints a certificate") {
    auto r = run_cli("goodfit --fn x --seed 3 --samples 20000 --square");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("alpha") != std::string::npos);
    CHECK(r.output.find("degenerate = false") != std::string::npos);
}
