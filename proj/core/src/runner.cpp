#include "vbgk/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "vbgk/scenario.hpp"

namespace vbgk {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b)
{
    return std::chrono::duration<double>(b - a).count();
}

void scan_finite(std::span<const double> values, long step, const char* what)
{
    for (double v : values)
        if (!std::isfinite(v))
            throw NumericalFailure(step, std::string("non-finite ") + what + " at step " +
                                             std::to_string(step));
}

struct RunContext {
    const RunConfig& config;
    const PhaseMesh& mesh;
    const DiscreteMaxwellian& maxw;
    const EquilibriumReference& ref_primal;
    const EquilibriumReference& ref_dual;
    const std::vector<double>& rho_F;  ///< <F>_Delta at primal centers
};

DiagRow make_diag_row(const RunContext& ctx, const KineticState& state, double delta_m,
                      int n_kinetic)
{
    DiagRow row;
    row.step = state.step;
    row.t = state.time;
    row.mass = total_mass(state.rho, ctx.mesh);
    row.delta_m = delta_m;
    row.n_kinetic_cells = n_kinetic;

    const bool has_g = !state.g.empty();
    if (has_g) {
        std::vector<double> f = reconstruct_f(state, ctx.mesh, ctx.maxw);
        for (std::size_t k = 0; k < f.size(); ++k) f[k] -= ctx.ref_primal.F_grid[k];
        row.norm_f_minus_F = norm_weighted(f, ctx.ref_primal, ctx.mesh);
        row.norm_g = norm_weighted(state.g, ctx.ref_dual, ctx.mesh);
        scan_finite(state.g, state.step, "distribution perturbation");
    }
    std::vector<double> drho(state.rho.size());
    for (std::size_t i = 0; i < drho.size(); ++i) drho[i] = state.rho[i] - ctx.rho_F[i];
    row.norm_rho_minus_rhoF = norm_L2_space(drho, ctx.mesh);
    return row;
}

std::string format_time_tag(double t)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

void append_csv_double(std::string& out, double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp)
        throw std::runtime_error("cannot open for writing: " + path.string());
    if (std::fwrite(text.data(), 1, text.size(), fp) != text.size()) {
        std::fclose(fp);
        throw std::runtime_error("short write: " + path.string());
    }
    std::fclose(fp);
}

}  // namespace

RunRecord run(const RunConfig& config)
{
    validate_config(config);
    const auto t_setup = Clock::now();

    RunRecord record;
    record.config = config;
    record.mesh = build_mesh(config.nx, config.nv, config.x_star, config.v_star);
    const PhaseMesh& mesh = record.mesh;
    const DiscreteMaxwellian maxw = build_maxwellian(mesh);
    const InitialData data = make_initial_data(config.case_id, mesh);

    FieldConfig fields;
    fields.E_dual = sample_dual(data.E, mesh);
    fields.eps_dual = make_eps_profile(config.eps_profile, config.epsilon, mesh);
    fields.dt = config.dt;

    KineticState state = make_initial_state(data, mesh, maxw);
    const bool is_limit = (config.solver == SolverKind::Limit);
    if (is_limit) state.g.clear();

    const double M0 = total_mass(state.rho, mesh);
    const EquilibriumReference ref_primal =
        make_equilibrium(sample_primal(data.V, mesh), M0, maxw, mesh);
    const EquilibriumReference ref_dual =
        make_equilibrium(sample_dual(data.V, mesh), M0, maxw, mesh);
    std::vector<double> rho_F(static_cast<std::size_t>(mesh.nx));
    for (int i = 0; i < mesh.nx; ++i)
        rho_F[static_cast<std::size_t>(i)] =
            bracket(std::span<const double>(
                        ref_primal.F_grid.data() + static_cast<std::size_t>(i) * mesh.nv,
                        static_cast<std::size_t>(mesh.nv)),
                    mesh);
    const RunContext ctx{config, mesh, maxw, ref_primal, ref_dual, rho_F};

    const long n_steps = std::lround(config.t_final / config.dt);
    std::vector<long> snap_steps(config.snapshot_times.size(), -1);
    for (std::size_t k = 0; k < config.snapshot_times.size(); ++k) {
        const long s = std::lround(config.snapshot_times[k] / config.dt);
        if (s <= n_steps) snap_steps[k] = s;
    }
    auto take_snapshots = [&](long step) {
        for (std::size_t k = 0; k < snap_steps.size(); ++k) {
            if (snap_steps[k] != step) continue;
            SnapshotRecord snap;
            snap.requested_time = config.snapshot_times[k];
            snap.actual_time = state.time;
            snap.step = step;
            snap.rho = state.rho;
            if (!is_limit) snap.f = reconstruct_f(state, mesh, maxw);
            record.snapshots.push_back(std::move(snap));
        }
    };

    // Hybrid machinery (unused by the pure solvers).
    DomainDecomposition dec;
    HybridWorkspace ws;
    HybridFields hfields;
    if (config.solver == SolverKind::Hybrid) {
        dec = make_initial_decomposition(mesh.nx, config.eta0, config.delta0);
        hfields.scheme = fields;
        hfields.E_primal = make_field_derivs(data, mesh);
        hfields.eps_primal = make_eps_profile_primal(config.eps_profile, config.epsilon, mesh);
        record.trace.push_back({0, 0.0, rle_labels(dec)});
        record.delta_m_series.reserve(static_cast<std::size_t>(n_steps));
    }
    auto kinetic_cells_now = [&]() -> int {
        if (config.solver == SolverKind::Hybrid) return count_kinetic(dec);
        return is_limit ? 0 : mesh.nx;
    };

    long last_diag_step = -1;
    auto emit_diag = [&](double delta_m) {
        record.diagnostics.push_back(make_diag_row(ctx, state, delta_m, kinetic_cells_now()));
        last_diag_step = state.step;
    };
    emit_diag(0.0);
    take_snapshots(0);

    const auto t_loop = Clock::now();
    record.setup_seconds = seconds_between(t_setup, t_loop);

    for (long step = 1; step <= n_steps; ++step) {
        double delta_m = 0.0;
        switch (config.solver) {
            case SolverKind::Kinetic:
                kinetic_step(state, mesh, maxw, fields);
                break;
            case SolverKind::Limit: {
                state.rho = step_limit(state.rho, mesh, maxw, fields);
                state.step += 1;
                state.time = static_cast<double>(state.step) * fields.dt;
                break;
            }
            case SolverKind::Hybrid: {
                const HybridStepResult res = hybrid_step(state, dec, mesh, maxw, hfields, ws);
                delta_m = res.delta_m;
                record.delta_m_series.push_back(delta_m);
                if (res.changed)
                    record.trace.push_back({state.step, state.time, rle_labels(dec)});
                break;
            }
        }
        // A non-finite value persists once produced, so scanning on a cadence
        // is as safe as scanning per step and keeps the fluid phase O(nx).
        if ((step & 31) == 0 || step == n_steps)
            scan_finite(state.rho, state.step, "density");
        if ((config.diag_every > 0 && step % config.diag_every == 0) || step == n_steps)
            emit_diag(delta_m);
        take_snapshots(step);
    }
    record.stepping_seconds = seconds_between(t_loop, Clock::now());

    if (last_diag_step != state.step) emit_diag(0.0);
    if (!state.g.empty()) scan_finite(state.g, state.step, "distribution perturbation");
    record.final_state = std::move(state);
    return record;
}

void write_outputs(const RunRecord& record, const std::string& dir)
{
    namespace fs = std::filesystem;
    const fs::path root(dir);
    fs::create_directories(root);

    write_text_file(root / "config.txt", echo_config(record.config));

    std::string diag = "step,t,mass,delta_m,norm_f_minus_F,norm_g,norm_rho_minus_rhoF,"
                       "n_kinetic_cells\n";
    for (const DiagRow& row : record.diagnostics) {
        diag += std::to_string(row.step);
        for (double v : {row.t, row.mass, row.delta_m, row.norm_f_minus_F, row.norm_g,
                         row.norm_rho_minus_rhoF}) {
            diag += ',';
            append_csv_double(diag, v);
        }
        diag += ',';
        diag += std::to_string(row.n_kinetic_cells);
        diag += '\n';
    }
    write_text_file(root / "diagnostics.csv", diag);

    const PhaseMesh& mesh = record.mesh;
    for (const SnapshotRecord& snap : record.snapshots) {
        const std::string tag = format_time_tag(snap.requested_time);
        std::string density = "x,rho\n";
        for (int i = 0; i < mesh.nx; ++i) {
            append_csv_double(density, mesh.x_center[static_cast<std::size_t>(i)]);
            density += ',';
            append_csv_double(density, snap.rho[static_cast<std::size_t>(i)]);
            density += '\n';
        }
        write_text_file(root / ("density_t" + tag + ".csv"), density);

        if (snap.f.empty()) continue;
        std::string dist = "x,v,f\n";
        for (int i = 0; i < mesh.nx; ++i) {
            for (int j = 0; j < mesh.nv; ++j) {
                append_csv_double(dist, mesh.x_center[static_cast<std::size_t>(i)]);
                dist += ',';
                append_csv_double(dist, mesh.v_center[static_cast<std::size_t>(j)]);
                dist += ',';
                append_csv_double(dist,
                                  snap.f[static_cast<std::size_t>(i) * mesh.nv +
                                         static_cast<std::size_t>(j)]);
                dist += '\n';
            }
        }
        write_text_file(root / ("distribution_t" + tag + ".csv"), dist);
    }

    if (!record.trace.empty()) {
        std::string trace = "step,t,labels\n";
        for (const TraceRow& row : record.trace) {
            trace += std::to_string(row.step);
            trace += ',';
            append_csv_double(trace, row.t);
            trace += ',';
            trace += row.labels;
            trace += '\n';
        }
        write_text_file(root / "trace.csv", trace);
    }

    std::string timing = "solver,case,epsilon,seconds\n";
    timing += to_string(record.config.solver);
    timing += ',';
    timing += std::to_string(record.config.case_id);
    timing += ',';
    append_csv_double(timing, record.config.epsilon);
    timing += ',';
    append_csv_double(timing, record.stepping_seconds);
    timing += '\n';
    write_text_file(root / "timing.csv", timing);
}

}  // namespace vbgk
