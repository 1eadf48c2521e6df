// End-to-end tests of the installed command-line binary: exit codes, artifact
// files, and config/flag precedence, all via subprocess invocations.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "vbgk/config.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(VBGK_CLI_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

constexpr const char* kQuiet = " > /dev/null 2>&1";

}  // namespace

TEST_CASE("help and usage errors")
{
    CHECK(run_cli(std::string("--help") + kQuiet) == 0);
    CHECK(run_cli(std::string("run --help") + kQuiet) == 0);
    // A subcommand is mandatory.
    CHECK(run_cli(std::string("") + kQuiet) == 1);
    CHECK(run_cli(std::string("frobnicate") + kQuiet) == 1);
    CHECK(run_cli(std::string("run --no-such-flag 1") + kQuiet) == 1);
}

TEST_CASE("a small run succeeds and writes its artifacts")
{
    const fs::path dir = "cli_test_out";
    fs::remove_all(dir);
    const int code = run_cli(
        "run --solver limit --case 1 --nx 32 --nv 16 --dt 1e-4 --tfinal 0.01 "
        "--snapshots 0,0.01 --out " +
        dir.string() + kQuiet);
    CHECK(code == 0);
    CHECK(fs::exists(dir / "config.txt"));
    CHECK(fs::exists(dir / "diagnostics.csv"));
    CHECK(fs::exists(dir / "density_t0.csv"));
    CHECK(fs::exists(dir / "density_t0.01.csv"));
    CHECK(fs::exists(dir / "timing.csv"));
    CHECK(slurp(dir / "timing.csv").find("limit,1,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("configuration errors exit with code 1")
{
    CHECK(run_cli(std::string("run --case 9") + kQuiet) == 1);
    CHECK(run_cli(std::string("run --solver euler") + kQuiet) == 1);
    CHECK(run_cli(std::string("run --eps-profile bump") + kQuiet) == 1);
    CHECK(run_cli(std::string("run --nx 7") + kQuiet) == 1);
    // dt above the parabolic bound is rejected...
    CHECK(run_cli(std::string("run --nx 200 --nv 16 --dt 7.4e-5 --tfinal 7.4e-4") + kQuiet) ==
          1);
    // ...unless explicitly allowed.
    CHECK(run_cli(std::string("run --nx 200 --nv 16 --dt 7.4e-5 --tfinal 7.4e-4 "
                              "--allow-unstable-dt") +
                  kQuiet) == 0);
    // Missing config file.
    CHECK(run_cli(std::string("run --config does_not_exist.cfg") + kQuiet) == 1);
}

TEST_CASE("numerical blow-up exits with code 2")
{
    CHECK(run_cli(std::string("run --solver limit --case 1 --nx 32 --nv 16 --dt 0.01 "
                              "--tfinal 10 --allow-unstable-dt --diag-every 0") +
                  kQuiet) == 2);
}

TEST_CASE("command-line flags override the config file")
{
    const fs::path cfg = "cli_test_config.cfg";
    const fs::path dir = "cli_test_override_out";
    fs::remove_all(dir);
    {
        std::ofstream out(cfg);
        out << "solver = limit\ncase = 1\nnx = 32\nnv = 16\ndt = 1e-4\nt_final = 0.001\n"
               "snapshots = 0\n";
    }
    const int code = run_cli("run --config " + cfg.string() + " --case 3 --out " +
                             dir.string() + kQuiet);
    CHECK(code == 0);
    const vbgk::RunConfig echoed = vbgk::parse_config_file((dir / "config.txt").string());
    CHECK(echoed.case_id == 3);                          // flag wins
    CHECK(echoed.solver == vbgk::SolverKind::Limit);     // file value kept
    CHECK(echoed.nx == 32);
    CHECK(echoed.t_final == 0.001);
    fs::remove(cfg);
    fs::remove_all(dir);
}

TEST_CASE("bench reports a median timing line")
{
    const fs::path out = "cli_bench_stdout.txt";
    fs::remove(out);
    const int code = run_cli(
        "bench --solver limit --case 1 --nx 32 --nv 16 --dt 1e-4 --tfinal 0.005 > " +
        out.string() + " 2> /dev/null");
    CHECK(code == 0);
    const std::string text = slurp(out);
    CHECK(text.find("solver,case,epsilon,seconds") != std::string::npos);
    CHECK(text.find("limit,1,") != std::string::npos);
    fs::remove(out);
}
