#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vbgk/config.hpp"
#include "vbgk/diagnostics.hpp"
#include "vbgk/hybrid.hpp"
#include "vbgk/kinetic.hpp"
#include "vbgk/mesh.hpp"

namespace vbgk {

/// Raised when the evolving state stops being finite; carries the step at
/// which the scan tripped.  The CLI maps this to exit code 2.
struct NumericalFailure : std::runtime_error {
    NumericalFailure(long at_step, const std::string& what_arg)
        : std::runtime_error(what_arg), step(at_step) {}
    long step;
};

struct DiagRow {
    long step = 0;
    double t = 0.0;
    double mass = 0.0;
    double delta_m = 0.0;              ///< hybrid only; 0 for pure solvers
    double norm_f_minus_F = 0.0;
    double norm_g = 0.0;
    double norm_rho_minus_rhoF = 0.0;
    int n_kinetic_cells = 0;           ///< nx for kinetic, 0 for limit
};

struct SnapshotRecord {
    double requested_time = 0.0;
    double actual_time = 0.0;
    long step = 0;
    std::vector<double> rho;  ///< nx
    std::vector<double> f;    ///< nx*nv reconstruction (empty for the limit solver)
};

struct TraceRow {
    long step = 0;
    double t = 0.0;
    std::string labels;  ///< run-length encoding, e.g. "32K4F64K"
};

struct RunRecord {
    RunConfig config;
    PhaseMesh mesh;
    std::vector<DiagRow> diagnostics;
    std::vector<SnapshotRecord> snapshots;
    std::vector<TraceRow> trace;          ///< hybrid: recorded at t=0 and on change
    std::vector<double> delta_m_series;   ///< hybrid: one entry per step
    double setup_seconds = 0.0;
    double stepping_seconds = 0.0;        ///< stepping loop only, excludes output
    KineticState final_state;             ///< g is empty for the limit solver
};

/// Executes config.solver to t_final.  Snapshots are taken at the steps
/// nearest the requested times (within dt/2).  Expensive norm diagnostics are
/// recorded every `diag_every` steps (0: first and last step only); the
/// hybrid Δm and cell-count series are always recorded per step.
/// Throws std::invalid_argument for bad configs, NumericalFailure for
/// non-finite states.
RunRecord run(const RunConfig& config);

/// Writes the record's CSV artifacts plus a config echo into directory `dir`
/// (created if absent): config.txt, diagnostics.csv, density_t*.csv,
/// distribution_t*.csv, trace.csv, timing.csv.
void write_outputs(const RunRecord& record, const std::string& dir);

}  // namespace vbgk
