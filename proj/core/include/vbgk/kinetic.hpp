#pragma once

#include <span>
#include <vector>

#include "vbgk/mesh.hpp"

namespace vbgk {

// Electric field and Knudsen number as the scheme consumes them: sampled at
// dual cell centers (where g lives and where both macroscopic fluxes are
// evaluated), plus the time step.
struct FieldConfig {
    std::vector<double> E_dual;    // E(x_dual[d]), size nx
    std::vector<double> eps_dual;  // eps(x_dual[d]) > 0, size nx
    double dt = 0.0;
};

// Micro-macro state: f is represented as rho*M + g with rho on primal cells
// and the mean-free perturbation g on dual cells (row-major, g[d*nv + j]).
struct KineticState {
    std::vector<double> rho;  // nx
    std::vector<double> g;    // nx*nv
    double time = 0.0;
    long step = 0;
};

struct UpwindParts {
    double plus;   // max(r, 0)
    double minus;  // min(r, 0)
};

inline UpwindParts upwind_split(double r) {
    return (r >= 0.0) ? UpwindParts{r, 0.0} : UpwindParts{0.0, r};
}

// =============================================================================
// Scalar reference operations.
//
// These evaluate one flux/term at a time, following the scheme formulas
// verbatim.  The grid steppers below reuse the same accumulation helpers so
// that both paths produce bitwise-identical values; the scalar forms exist so
// tests can probe individual cells without running a whole sweep.
// =============================================================================

// Position flux F_{i,j} through primal cell i at velocity j:
//   F = [ v_j+ gL_j + v_j- gR_j  -  M_j <v+ gL + v- gR>  +  v_j M_j rho_i ] dv
// where gL/gR are the g columns on the dual cells left/right of primal cell i.
// The middle term removes the velocity average of the upwind part so that g
// stays mean-free; periodic wraparound applies in i.
double flux_position(const KineticState& state, int i, int j,
                     const PhaseMesh& mesh, const DiscreteMaxwellian& maxw);

// Velocity flux G through velocity interface j_half (0..nv) of dual cell d:
//   G = (E+ g_{d,j_half-1} + E- g_{d,j_half}) dx
//     + E_d rho_{d+1/2} (M_{j_half} + M_{j_half-1})/2 dx
// and exactly 0 at the extreme interfaces j_half = 0 and j_half = nv (the
// closed velocity-boundary condition).
double flux_velocity(const KineticState& state, int d, int j_half,
                     const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
                     const FieldConfig& fields);

// Full transport term on dual cell d at velocity j:
//   T_{d,j} = F_{d+1,j} - F_{d,j} + G_{d,j+1/2} - G_{d,j-1/2}.
double transport(const KineticState& state, int d, int j,
                 const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
                 const FieldConfig& fields);

// Splitting T = P + Q into the part carried by (rho, E) and the part carried
// by g.  Both use the same zero-flux convention at the velocity boundary as
// the assembled transport term, so the identity holds on every cell including
// j = 0 and j = nv-1 (where a ghost-value reading of the split would not
// reproduce T).
double split_P(const KineticState& state, int d, int j,
               const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
               const FieldConfig& fields);
double split_Q(const KineticState& state, int d, int j,
               const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
               const FieldConfig& fields);

// Kinetic macroscopic flux J^K at one dual interface: -(1/eps) <v g>.
double macro_flux(std::span<const double> g_column, double eps, const PhaseMesh& mesh);

// Drift-diffusion limit flux at dual interface d:
//   J^F_d = (m2/dx)(rho_{d+1} - rho_d) + m1p E_d (rho_d + rho_{d+1})/2.
double limit_flux(std::span<const double> rho, int d,
                  const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
                  const FieldConfig& fields);

// =============================================================================
// Grid steppers (explicit; read time-n data only, return the time-(n+1) array)
// =============================================================================

// Relaxed micro step:
//   g^{n+1}_d = g^n_d exp(-dt/eps_d^2) - eps_d (1 - exp(-dt/eps_d^2)) T^n_d/(dx dv).
// The coefficient eps*(1-exp(...)) is evaluated with expm1; for dt/eps^2
// beyond the underflow range the exponential is exactly 0 and the update
// degenerates to the asymptotic form -eps*T/(dx dv) by construction.
std::vector<double> step_micro(const KineticState& state, const PhaseMesh& mesh,
                               const DiscreteMaxwellian& maxw, const FieldConfig& fields);

// Macro step using the *already updated* g^{n+1} (the stiff flux is implicit
// in time but explicit in data ordering):
//   rho^{n+1}_i = rho^n_i + (dt/dx)(J^{K,n+1}_i - J^{K,n+1}_{i-1}), periodic.
std::vector<double> step_macro(std::span<const double> rho, std::span<const double> g_next,
                               const PhaseMesh& mesh, const FieldConfig& fields);

// One full micro-macro step of the kinetic scheme, in place.
void kinetic_step(KineticState& state, const PhaseMesh& mesh,
                  const DiscreteMaxwellian& maxw, const FieldConfig& fields);

// Explicit drift-diffusion limit step:
//   rho^{n+1}_i = rho^n_i + (dt/dx)(J^{F,n}_i - J^{F,n}_{i-1}), periodic.
std::vector<double> step_limit(std::span<const double> rho, const PhaseMesh& mesh,
                               const DiscreteMaxwellian& maxw, const FieldConfig& fields);

// -----------------------------------------------------------------------------
// Shared accumulation helpers.  Every path that needs one of these quantities
// must go through these functions: the hybrid stepper's bitwise degeneracy to
// the pure schemes relies on identical operation order, not just identical
// formulas.
// -----------------------------------------------------------------------------
namespace detail {

// <v+ gL + v- gR> = dv * sum_j (v_j+ gL_j + v_j- gR_j), single ascending pass.
double upwind_bracket(const double* gL, const double* gR, const PhaseMesh& mesh);

// dv * sum_j v_j col_j, single ascending pass.
double signed_first_moment(const double* col, const PhaseMesh& mesh);

// Relaxation coefficients of the micro step for one dual cell.
struct MicroCoeffs {
    double decay;    // exp(-dt/eps^2)
    double growth;   // eps*(1 - exp(-dt/eps^2)), via expm1
};
MicroCoeffs micro_coeffs(double eps, double dt);

inline double f_entry(double gL_j, double gR_j, double s_bracket, double rho_i,
                      double v_j, double M_j, double dv) {
    const auto [vp, vm] = upwind_split(v_j);
    return (vp * gL_j + vm * gR_j - M_j * s_bracket + v_j * M_j * rho_i) * dv;
}

inline double g_entry(double E, double g_lo, double g_hi, double rho_half,
                      double M_lo, double M_hi, double dx) {
    const auto [Ep, Em] = upwind_split(E);
    return (Ep * g_lo + Em * g_hi + E * rho_half * (0.5 * (M_hi + M_lo))) * dx;
}

inline double limit_flux_at(double rho_l, double rho_r, double E, double dx,
                            double m2, double m1p) {
    return (m2 / dx) * (rho_r - rho_l) + m1p * E * (0.5 * (rho_l + rho_r));
}

}  // namespace detail

}  // namespace vbgk
