#pragma once

#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "vbgk/scenario.hpp"

namespace vbgk {

enum class SolverKind { Kinetic, Limit, Hybrid };

std::string to_string(SolverKind kind);
std::string to_string(EpsKind kind);
SolverKind solver_from_string(std::string_view name);
EpsKind eps_kind_from_string(std::string_view name);

struct RunConfig {
    SolverKind solver = SolverKind::Kinetic;
    int case_id = 1;
    double epsilon = 1.0;
    EpsKind eps_profile = EpsKind::Constant;
    int nx = 100;
    int nv = 256;
    double x_star = std::numbers::pi;
    double v_star = 8.0;
    double dt = 1e-4;
    double t_final = 1.0;
    double eta0 = 1e-4;
    double delta0 = 1e-4;
    std::string out_dir;  ///< empty: keep results in memory only
    std::vector<double> snapshot_times{0.0, 0.2, 1.0, 5.0};
    unsigned long seed = 0;
    long diag_every = 1;  ///< cadence of the expensive norm diagnostics; 0: endpoints only
    bool allow_unstable_dt = false;

    bool operator==(const RunConfig&) const = default;
};

/// Throws std::invalid_argument on any malformed field.  The parabolic bound
/// dt <= 0.25 dx^2 / m2 is enforced here; with allow_unstable_dt it degrades
/// to a warning on stderr.
void validate_config(const RunConfig& config);

/// Flat `key = value` text, one pair per line, '#' comments.  Unknown keys are
/// rejected.  parse_config_text(echo_config(c)) == c for any valid c.
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config_file(const std::string& path);
std::string echo_config(const RunConfig& config);

}  // namespace vbgk
