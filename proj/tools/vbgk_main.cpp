// Command-line front end: `vbgk run` executes one configuration and writes
// its artifacts; `vbgk bench` repeats the stepping phase three times and
// reports the median wall time.
//
// Exit codes: 0 success, 1 configuration/setup error, 2 numerical failure.

#include <algorithm>
#include <array>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "vbgk/config.hpp"
#include "vbgk/runner.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::string solver;
    int case_id = 0;
    double epsilon = 0.0;
    std::string eps_profile;
    int nx = 0, nv = 0;
    double dt = 0.0, t_final = 0.0;
    double eta0 = 0.0, delta0 = 0.0;
    std::string out_dir;
    std::string snapshots;
    long diag_every = 0;
    unsigned long seed = 0;
    bool allow_unstable_dt = false;

    CLI::App* sub = nullptr;

    void attach(CLI::App* s)
    {
        sub = s;
        s->add_option("--config", config_path, "flat key=value config file");
        s->add_option("--solver", solver, "kinetic|limit|hybrid");
        s->add_option("--case", case_id, "benchmark case 1..4");
        s->add_option("--epsilon", epsilon, "Knudsen number (constant profile)");
        s->add_option("--eps-profile", eps_profile, "constant|arctan_bump");
        s->add_option("--nx", nx, "number of spatial cells");
        s->add_option("--nv", nv, "number of velocity cells (even)");
        s->add_option("--dt", dt, "time step");
        s->add_option("--tfinal", t_final, "final time");
        s->add_option("--eta0", eta0, "remainder threshold");
        s->add_option("--delta0", delta0, "perturbation threshold");
        s->add_option("--out", out_dir, "output directory for CSV artifacts");
        s->add_option("--snapshots", snapshots, "comma-separated snapshot times");
        s->add_option("--diag-every", diag_every, "norm-diagnostics cadence (0: endpoints)");
        s->add_option("--seed", seed, "seed echoed into the config");
        s->add_flag("--allow-unstable-dt", allow_unstable_dt,
                    "demote the parabolic dt bound to a warning");
    }

    vbgk::RunConfig build() const
    {
        vbgk::RunConfig c;
        if (!config_path.empty()) c = vbgk::parse_config_file(config_path);
        const auto set = [this](const char* flag) { return sub->count(flag) > 0; };
        if (set("--solver")) c.solver = vbgk::solver_from_string(solver);
        if (set("--case")) c.case_id = case_id;
        if (set("--epsilon")) c.epsilon = epsilon;
        if (set("--eps-profile")) c.eps_profile = vbgk::eps_kind_from_string(eps_profile);
        if (set("--nx")) c.nx = nx;
        if (set("--nv")) c.nv = nv;
        if (set("--dt")) c.dt = dt;
        if (set("--tfinal")) c.t_final = t_final;
        if (set("--eta0")) c.eta0 = eta0;
        if (set("--delta0")) c.delta0 = delta0;
        if (set("--out")) c.out_dir = out_dir;
        if (set("--snapshots")) {
            c.snapshot_times.clear();
            std::string item;
            std::size_t start = 0;
            while (start <= snapshots.size()) {
                const auto comma = snapshots.find(',', start);
                item = snapshots.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start);
                if (!item.empty()) c.snapshot_times.push_back(std::stod(item));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        }
        if (set("--diag-every")) c.diag_every = diag_every;
        if (set("--seed")) c.seed = seed;
        if (allow_unstable_dt) c.allow_unstable_dt = true;
        return c;
    }
};

int do_run(const vbgk::RunConfig& config)
{
    vbgk::RunRecord record = vbgk::run(config);
    if (!config.out_dir.empty()) vbgk::write_outputs(record, config.out_dir);
    const vbgk::DiagRow& last = record.diagnostics.back();
    std::printf("solver=%s case=%d t=%.6f steps=%ld mass=%.12g stepping_seconds=%.6f\n",
                vbgk::to_string(config.solver).c_str(), config.case_id, last.t,
                record.final_state.step, last.mass, record.stepping_seconds);
    return 0;
}

int do_bench(const vbgk::RunConfig& config)
{
    std::array<double, 3> seconds{};
    vbgk::RunRecord record;
    for (double& s : seconds) {
        record = vbgk::run(config);
        s = record.stepping_seconds;
    }
    std::sort(seconds.begin(), seconds.end());
    std::printf("solver,case,epsilon,seconds\n%s,%d,%.17g,%.6f\n",
                vbgk::to_string(config.solver).c_str(), config.case_id, config.epsilon,
                seconds[1]);
    if (!config.out_dir.empty()) {
        record.stepping_seconds = seconds[1];
        vbgk::write_outputs(record, config.out_dir);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-volume micro-macro solver for the 1D-1V linear Vlasov-BGK "
                 "equation in diffusive scaling"};
    app.require_subcommand(1);

    CliOverrides run_opts, bench_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "execute one configuration");
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "median-of-3 timing of the stepping loop");
    run_opts.attach(run_cmd);
    bench_opts.attach(bench_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed()) return do_run(run_opts.build());
        return do_bench(bench_opts.build());
    } catch (const vbgk::NumericalFailure& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
