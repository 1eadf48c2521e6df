#include "vbgk/kinetic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vbgk {

namespace detail {

double upwind_bracket(const double* gL, const double* gR, const PhaseMesh& mesh)
{
    // Cells [0, half) carry v < 0, cells [half, nv) carry v > 0, so the two
    // upwind halves never overlap; a single ascending pass keeps the rounding
    // order identical everywhere this bracket is evaluated.
    double sum = 0.0;
    for (int j = 0; j < mesh.nv; ++j) {
        const auto [vp, vm] = upwind_split(mesh.v_center[static_cast<std::size_t>(j)]);
        sum += vp * gL[j] + vm * gR[j];
    }
    return sum * mesh.dv;
}

double signed_first_moment(const double* col, const PhaseMesh& mesh)
{
    double sum = 0.0;
    for (int j = 0; j < mesh.nv; ++j)
        sum += mesh.v_center[static_cast<std::size_t>(j)] * col[j];
    return sum * mesh.dv;
}

MicroCoeffs micro_coeffs(double eps, double dt)
{
    const double x = dt / (eps * eps);
    // exp underflows to exactly 0 for x > ~745, which is the intended
    // asymptotic regime: the update then reads g^{n+1} = -eps*T/(dx dv).
    return {std::exp(-x), eps * (-std::expm1(-x))};
}

}  // namespace detail

namespace {

inline int wrap_prev(int i, int nx) { return (i == 0) ? nx - 1 : i - 1; }
inline int wrap_next(int i, int nx) { return (i + 1 == nx) ? 0 : i + 1; }

void check_state(const KineticState& state, const PhaseMesh& mesh, const char* who)
{
    if (state.rho.size() != static_cast<std::size_t>(mesh.nx) ||
        state.g.size() != static_cast<std::size_t>(mesh.nx) * static_cast<std::size_t>(mesh.nv))
        throw std::invalid_argument(std::string(who) + ": state dimensions do not match mesh");
}

void check_fields(const FieldConfig& fields, const PhaseMesh& mesh, const char* who)
{
    if (fields.E_dual.size() != static_cast<std::size_t>(mesh.nx) ||
        fields.eps_dual.size() != static_cast<std::size_t>(mesh.nx))
        throw std::invalid_argument(std::string(who) + ": field arrays do not match mesh");
    if (!(fields.dt > 0.0))
        throw std::invalid_argument(std::string(who) + ": dt must be positive");
}

}  // namespace

double flux_position(const KineticState& state, int i, int j,
                     const PhaseMesh& mesh, const DiscreteMaxwellian& maxw)
{
    const int nx = mesh.nx, nv = mesh.nv;
    const double* gL = state.g.data() + static_cast<std::size_t>(wrap_prev(i, nx)) * nv;
    const double* gR = state.g.data() + static_cast<std::size_t>(i) * nv;
    const double s = detail::upwind_bracket(gL, gR, mesh);
    return detail::f_entry(gL[j], gR[j], s, state.rho[static_cast<std::size_t>(i)],
                           mesh.v_center[static_cast<std::size_t>(j)],
                           maxw.M[static_cast<std::size_t>(j)], mesh.dv);
}

double flux_velocity(const KineticState& state, int d, int j_half,
                     const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
                     const FieldConfig& fields)
{
    const int nv = mesh.nv;
    if (j_half == 0 || j_half == nv) return 0.0;  // closed velocity boundary
    const double* gd = state.g.data() + static_cast<std::size_t>(d) * nv;
    const double rho_half = 0.5 * (state.rho[static_cast<std::size_t>(d)] +
                                   state.rho[static_cast<std::size_t>(wrap_next(d, mesh.nx))]);
    return detail::g_entry(fields.E_dual[static_cast<std::size_t>(d)],
                           gd[j_half - 1], gd[j_half], rho_half,
                           maxw.M[static_cast<std::size_t>(j_half - 1)],
                           maxw.M[static_cast<std::size_t>(j_half)], mesh.dx);
}

double transport(const KineticState& state, int d, int j,
                 const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
                 const FieldConfig& fields)
{
    return flux_position(state, wrap_next(d, mesh.nx), j, mesh, maxw) -
           flux_position(state, d, j, mesh, maxw) +
           flux_velocity(state, d, j + 1, mesh, maxw, fields) -
           flux_velocity(state, d, j, mesh, maxw, fields);
}

double split_P(const KineticState& state, int d, int j,
               const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
               const FieldConfig& fields)
{
    const int nv = mesh.nv;
    const int dp1 = wrap_next(d, mesh.nx);
    const double v = mesh.v_center[static_cast<std::size_t>(j)];
    const double x_part = v * maxw.M[static_cast<std::size_t>(j)] *
                          (state.rho[static_cast<std::size_t>(dp1)] - state.rho[static_cast<std::size_t>(d)]) * mesh.dv;

    const double E = fields.E_dual[static_cast<std::size_t>(d)];
    const double rho_half = 0.5 * (state.rho[static_cast<std::size_t>(d)] + state.rho[static_cast<std::size_t>(dp1)]);
    auto p_face = [&](int k) -> double {
        if (k == 0 || k == nv) return 0.0;
        return E * rho_half * (0.5 * (maxw.M[static_cast<std::size_t>(k)] + maxw.M[static_cast<std::size_t>(k - 1)])) * mesh.dx;
    };
    return x_part + (p_face(j + 1) - p_face(j));
}

double split_Q(const KineticState& state, int d, int j,
               const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
               const FieldConfig& fields)
{
    const int nx = mesh.nx, nv = mesh.nv;
    const double* gm = state.g.data() + static_cast<std::size_t>(wrap_prev(d, nx)) * nv;
    const double* gc = state.g.data() + static_cast<std::size_t>(d) * nv;
    const double* gp = state.g.data() + static_cast<std::size_t>(wrap_next(d, nx)) * nv;

    // <v+ (g_d - g_{d-1}) + v- (g_{d+1} - g_d)>, same pass shape as the flux bracket.
    double sq = 0.0;
    for (int jj = 0; jj < nv; ++jj) {
        const auto [vp, vm] = upwind_split(mesh.v_center[static_cast<std::size_t>(jj)]);
        sq += vp * (gc[jj] - gm[jj]) + vm * (gp[jj] - gc[jj]);
    }
    sq *= mesh.dv;

    const auto [vp, vm] = upwind_split(mesh.v_center[static_cast<std::size_t>(j)]);
    const double x_part = (vp * (gc[j] - gm[j]) + vm * (gp[j] - gc[j]) -
                           maxw.M[static_cast<std::size_t>(j)] * sq) * mesh.dv;

    const auto [Ep, Em] = upwind_split(fields.E_dual[static_cast<std::size_t>(d)]);
    auto q_face = [&](int k) -> double {
        if (k == 0 || k == nv) return 0.0;
        return (Ep * gc[k - 1] + Em * gc[k]) * mesh.dx;
    };
    return x_part + (q_face(j + 1) - q_face(j));
}

double macro_flux(std::span<const double> g_column, double eps, const PhaseMesh& mesh)
{
    if (!(eps > 0.0))
        throw std::invalid_argument("macro_flux: eps must be positive");
    if (g_column.size() != static_cast<std::size_t>(mesh.nv))
        throw std::invalid_argument("macro_flux: column size does not match mesh");
    return -detail::signed_first_moment(g_column.data(), mesh) / eps;
}

double limit_flux(std::span<const double> rho, int d,
                  const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
                  const FieldConfig& fields)
{
    const int dp1 = wrap_next(d, mesh.nx);
    return detail::limit_flux_at(rho[static_cast<std::size_t>(d)], rho[static_cast<std::size_t>(dp1)],
                                 fields.E_dual[static_cast<std::size_t>(d)], mesh.dx, maxw.m2, maxw.m1p);
}

std::vector<double> step_micro(const KineticState& state, const PhaseMesh& mesh,
                               const DiscreteMaxwellian& maxw, const FieldConfig& fields)
{
    check_state(state, mesh, "step_micro");
    check_fields(fields, mesh, "step_micro");
    const int nx = mesh.nx, nv = mesh.nv;
    const double dx = mesh.dx, dv = mesh.dv;

    // Projection brackets, one per position flux row.
    std::vector<double> s(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i) {
        const double* gL = state.g.data() + static_cast<std::size_t>(wrap_prev(i, nx)) * nv;
        const double* gR = state.g.data() + static_cast<std::size_t>(i) * nv;
        s[static_cast<std::size_t>(i)] = detail::upwind_bracket(gL, gR, mesh);
    }

    // Position fluxes for every primal cell.
    std::vector<double> F(static_cast<std::size_t>(nx) * static_cast<std::size_t>(nv));
    for (int i = 0; i < nx; ++i) {
        const double* gL = state.g.data() + static_cast<std::size_t>(wrap_prev(i, nx)) * nv;
        const double* gR = state.g.data() + static_cast<std::size_t>(i) * nv;
        const double rho_i = state.rho[static_cast<std::size_t>(i)];
        const double s_i = s[static_cast<std::size_t>(i)];
        double* Fi = F.data() + static_cast<std::size_t>(i) * nv;
        for (int j = 0; j < nv; ++j)
            Fi[j] = detail::f_entry(gL[j], gR[j], s_i, rho_i,
                                    mesh.v_center[static_cast<std::size_t>(j)],
                                    maxw.M[static_cast<std::size_t>(j)], dv);
    }

    std::vector<double> g_next(state.g.size());
    double eps_prev = -1.0;
    detail::MicroCoeffs coeffs{0.0, 0.0};
    for (int d = 0; d < nx; ++d) {
        const double eps = fields.eps_dual[static_cast<std::size_t>(d)];
        if (!(eps > 0.0))
            throw std::invalid_argument("step_micro: eps_dual must be positive");
        if (eps != eps_prev) {  // cached across duals for homogeneous profiles
            coeffs = detail::micro_coeffs(eps, fields.dt);
            eps_prev = eps;
        }
        const double k = coeffs.growth / (dx * dv);

        const double* gd = state.g.data() + static_cast<std::size_t>(d) * nv;
        const double* FL = F.data() + static_cast<std::size_t>(d) * nv;
        const double* FR = F.data() + static_cast<std::size_t>(wrap_next(d, nx)) * nv;
        double* out = g_next.data() + static_cast<std::size_t>(d) * nv;

        const double E = fields.E_dual[static_cast<std::size_t>(d)];
        const double rho_half = 0.5 * (state.rho[static_cast<std::size_t>(d)] +
                                       state.rho[static_cast<std::size_t>(wrap_next(d, nx))]);
        double G_lo = 0.0;  // closed boundary at j_half = 0
        for (int j = 0; j < nv; ++j) {
            const double G_hi = (j + 1 == nv)
                ? 0.0
                : detail::g_entry(E, gd[j], gd[j + 1], rho_half,
                                  maxw.M[static_cast<std::size_t>(j)],
                                  maxw.M[static_cast<std::size_t>(j + 1)], dx);
            const double T = FR[j] - FL[j] + G_hi - G_lo;
            out[j] = coeffs.decay * gd[j] - k * T;
            G_lo = G_hi;
        }
    }
    return g_next;
}

std::vector<double> step_macro(std::span<const double> rho, std::span<const double> g_next,
                               const PhaseMesh& mesh, const FieldConfig& fields)
{
    const int nx = mesh.nx, nv = mesh.nv;
    if (rho.size() != static_cast<std::size_t>(nx) ||
        g_next.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(nv))
        throw std::invalid_argument("step_macro: array sizes do not match mesh");
    check_fields(fields, mesh, "step_macro");

    std::vector<double> J(static_cast<std::size_t>(nx));
    for (int d = 0; d < nx; ++d) {
        const double* col = g_next.data() + static_cast<std::size_t>(d) * nv;
        J[static_cast<std::size_t>(d)] =
            -detail::signed_first_moment(col, mesh) / fields.eps_dual[static_cast<std::size_t>(d)];
    }

    const double r = fields.dt / mesh.dx;
    std::vector<double> rho_next(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i)
        rho_next[static_cast<std::size_t>(i)] =
            rho[static_cast<std::size_t>(i)] +
            r * (J[static_cast<std::size_t>(i)] - J[static_cast<std::size_t>(wrap_prev(i, nx))]);
    return rho_next;
}

void kinetic_step(KineticState& state, const PhaseMesh& mesh,
                  const DiscreteMaxwellian& maxw, const FieldConfig& fields)
{
    std::vector<double> g_next = step_micro(state, mesh, maxw, fields);
    std::vector<double> rho_next = step_macro(state.rho, g_next, mesh, fields);
    state.g = std::move(g_next);
    state.rho = std::move(rho_next);
    state.step += 1;
    state.time = static_cast<double>(state.step) * fields.dt;
}

std::vector<double> step_limit(std::span<const double> rho, const PhaseMesh& mesh,
                               const DiscreteMaxwellian& maxw, const FieldConfig& fields)
{
    const int nx = mesh.nx;
    if (rho.size() != static_cast<std::size_t>(nx))
        throw std::invalid_argument("step_limit: rho size does not match mesh");
    check_fields(fields, mesh, "step_limit");

    std::vector<double> J(static_cast<std::size_t>(nx));
    for (int d = 0; d < nx; ++d)
        J[static_cast<std::size_t>(d)] =
            detail::limit_flux_at(rho[static_cast<std::size_t>(d)],
                                  rho[static_cast<std::size_t>(wrap_next(d, nx))],
                                  fields.E_dual[static_cast<std::size_t>(d)], mesh.dx,
                                  maxw.m2, maxw.m1p);

    const double r = fields.dt / mesh.dx;
    std::vector<double> rho_next(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i)
        rho_next[static_cast<std::size_t>(i)] =
            rho[static_cast<std::size_t>(i)] +
            r * (J[static_cast<std::size_t>(i)] - J[static_cast<std::size_t>(wrap_prev(i, nx))]);
    return rho_next;
}

}  // namespace vbgk
