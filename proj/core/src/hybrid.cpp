#include "vbgk/hybrid.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>

#include "vbgk/numeric.hpp"

namespace vbgk {

namespace {

inline int wrap_prev(int i, int nx) { return (i == 0) ? nx - 1 : i - 1; }
inline int wrap_next(int i, int nx) { return (i + 1 == nx) ? 0 : i + 1; }

void check_thresholds(double eta0, double delta0, const char* who)
{
    if (!(eta0 >= 0.0) || !std::isfinite(eta0) || !(delta0 >= 0.0) || !std::isfinite(delta0))
        throw std::invalid_argument(std::string(who) + ": thresholds must be finite and >= 0");
}

// Indicator hot path: evaluated every step even when the whole domain is
// Fluid, so the four stencils are applied in one fused pass (wrap-around
// indexing only in the six edge cells) instead of via fd_derivative().  With
// an identically zero field only the fourth-derivative row survives; the
// skipped terms are exact zeros, so the values are the same either way.
void remainder_into(std::span<const double> rho, const FieldDerivs& field,
                    std::span<const double> eps_primal, const PhaseMesh& mesh,
                    double* out)
{
    const int nx = mesh.nx;
    const auto& c1 = StencilTable::rows[0];
    const auto& c2 = StencilTable::rows[1];
    const auto& c3 = StencilTable::rows[2];
    const auto& c4 = StencilTable::rows[3];
    const double i1 = 1.0 / mesh.dx;
    const double i2 = i1 * i1;
    const double i3 = i2 * i1;
    const double i4 = i2 * i2;

    for (int i = 0; i < nx; ++i) {
        double w[7];
        if (i >= 3 && i + 3 < nx) {
            for (int k = 0; k < 7; ++k)
                w[k] = rho[static_cast<std::size_t>(i - 3 + k)];
        } else {
            for (int k = 0; k < 7; ++k)
                w[k] = rho[static_cast<std::size_t>((i - 3 + k + nx) % nx)];
        }
        const std::size_t s = static_cast<std::size_t>(i);
        const double eps = eps_primal[s];

        double a4 = 0.0;
        for (std::size_t k = 0; k < 7; ++k) a4 += c4[k] * w[k];
        const double d4 = a4 * i4;
        if (field.zero_field) {
            out[s] = -(eps * eps) * (-d4);
            continue;
        }

        double a1 = 0.0, a2 = 0.0, a3 = 0.0;
        for (std::size_t k = 0; k < 7; ++k) {
            a1 += c1[k] * w[k];
            a2 += c2[k] * w[k];
            a3 += c3[k] * w[k];
        }
        const double d1 = a1 * i1, d2 = a2 * i2, d3 = a3 * i3;

        const double r = rho[s];
        const double E = field.E[s], dE = field.dE[s], d2E = field.d2E[s], d3E = field.d3E[s];
        const double inner = -d4 + E * (2.0 * d3 - E * d2) +
                             dE * (-3.0 * r * dE - 5.0 * E * d1 + 6.0 * d2) +
                             d2E * (-3.0 * r * E + 5.0 * d1) + r * d3E;
        out[s] = -(eps * eps) * inner;
    }
}

// Shared core of update_domain and the in-place path inside hybrid_step.
void update_domain_into(const DomainDecomposition& dec, std::span<const double> R,
                        std::span<const double> g_norms, std::vector<Regime>& raw,
                        std::vector<Regime>& out)
{
    const int nx = static_cast<int>(dec.labels.size());
    raw.resize(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        const bool calm = std::abs(R[s]) <= dec.eta0;
        if (dec.labels[s] == Regime::Fluid) {
            raw[s] = calm ? Regime::Fluid : Regime::Kinetic;
        } else {
            const std::size_t left = static_cast<std::size_t>(wrap_prev(i, nx));
            const bool small_g = g_norms[left] <= dec.delta0 && g_norms[s] <= dec.delta0;
            raw[s] = (small_g && calm) ? Regime::Fluid : Regime::Kinetic;
        }
    }

    // Repair pass: a Fluid run of length 1 cannot host the interface ghost
    // logic; demote it back to Kinetic.  Detection uses the raw labels so the
    // scan order cannot cascade.
    out = raw;
    for (int i = 0; i < nx; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        if (raw[s] == Regime::Fluid &&
            raw[static_cast<std::size_t>(wrap_prev(i, nx))] != Regime::Fluid &&
            raw[static_cast<std::size_t>(wrap_next(i, nx))] != Regime::Fluid)
            out[s] = Regime::Kinetic;
    }
}

}  // namespace

DomainDecomposition make_initial_decomposition(int nx, double eta0, double delta0)
{
    if (nx < 1)
        throw std::invalid_argument("make_initial_decomposition: nx must be positive");
    check_thresholds(eta0, delta0, "make_initial_decomposition");
    DomainDecomposition dec;
    dec.labels.assign(static_cast<std::size_t>(nx), Regime::Kinetic);
    dec.eta0 = eta0;
    dec.delta0 = delta0;
    return dec;
}

int count_kinetic(const DomainDecomposition& dec)
{
    int n = 0;
    for (Regime r : dec.labels)
        if (r == Regime::Kinetic) ++n;
    return n;
}

std::string rle_labels(const DomainDecomposition& dec)
{
    std::string out;
    const std::size_t n = dec.labels.size();
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && dec.labels[j] == dec.labels[i]) ++j;
        out += std::to_string(j - i);
        out += (dec.labels[i] == Regime::Kinetic) ? 'K' : 'F';
        i = j;
    }
    return out;
}

bool interface_maintained(const DomainDecomposition& dec, int d)
{
    const int nx = static_cast<int>(dec.labels.size());
    return dec.labels[static_cast<std::size_t>(d)] == Regime::Kinetic ||
           dec.labels[static_cast<std::size_t>(wrap_next(d, nx))] == Regime::Kinetic;
}

double fd_derivative(std::span<const double> values, int order, int i, double dx)
{
    const int n = static_cast<int>(values.size());
    if (order < 1 || order > 4)
        throw std::invalid_argument("fd_derivative: order must be in {1,2,3,4}, got " + std::to_string(order));
    if (n < 8)
        throw std::invalid_argument("fd_derivative: need at least 8 samples, got " + std::to_string(n));
    if (i < 0 || i >= n)
        throw std::invalid_argument("fd_derivative: index out of range");
    if (!(dx > 0.0))
        throw std::invalid_argument("fd_derivative: dx must be positive");

    const auto& c = StencilTable::rows[static_cast<std::size_t>(order - 1)];
    double acc = 0.0;
    for (int k = -3; k <= 3; ++k)
        acc += c[static_cast<std::size_t>(k + 3)] * values[static_cast<std::size_t>((i + k + n) % n)];

    double scale = dx;
    for (int q = 1; q < order; ++q) scale *= dx;
    return acc / scale;
}

std::vector<double> compute_remainder(std::span<const double> rho,
                                      const FieldDerivs& field,
                                      std::span<const double> eps_primal,
                                      const PhaseMesh& mesh)
{
    const auto nx = static_cast<std::size_t>(mesh.nx);
    if (rho.size() != nx || eps_primal.size() != nx ||
        field.E.size() != nx || field.dE.size() != nx ||
        field.d2E.size() != nx || field.d3E.size() != nx)
        throw std::invalid_argument("compute_remainder: array sizes do not match mesh");
    std::vector<double> R(nx);
    remainder_into(rho, field, eps_primal, mesh, R.data());
    return R;
}

double g_norm(std::span<const double> g_column, const DiscreteMaxwellian& maxw,
              const PhaseMesh& mesh)
{
    if (g_column.size() != static_cast<std::size_t>(mesh.nv))
        throw std::invalid_argument("g_norm: column size does not match mesh");
    double sum = 0.0;
    for (int j = 0; j < mesh.nv; ++j) {
        const std::size_t s = static_cast<std::size_t>(j);
        sum += g_column[s] * g_column[s] / maxw.M[s];
    }
    return sum * mesh.dv;
}

DomainDecomposition update_domain(const DomainDecomposition& dec,
                                  std::span<const double> R,
                                  std::span<const double> g_norms)
{
    const int nx = static_cast<int>(dec.labels.size());
    if (R.size() != static_cast<std::size_t>(nx) || g_norms.size() != static_cast<std::size_t>(nx))
        throw std::invalid_argument("update_domain: indicator sizes do not match decomposition");
    check_thresholds(dec.eta0, dec.delta0, "update_domain");

    DomainDecomposition next;
    next.eta0 = dec.eta0;
    next.delta0 = dec.delta0;
    std::vector<Regime> raw;
    update_domain_into(dec, R, g_norms, raw, next.labels);
    return next;
}

HybridStepResult hybrid_step(KineticState& state, DomainDecomposition& dec,
                             const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
                             const HybridFields& fields, HybridWorkspace& ws,
                             bool update_indicators)
{
    const int nx = mesh.nx, nv = mesh.nv;
    const auto nxs = static_cast<std::size_t>(nx);
    const auto nvs = static_cast<std::size_t>(nv);
    if (state.rho.size() != nxs || state.g.size() != nxs * nvs)
        throw std::invalid_argument("hybrid_step: state dimensions do not match mesh");
    if (dec.labels.size() != nxs)
        throw std::invalid_argument("hybrid_step: decomposition does not match mesh");
    if (fields.scheme.E_dual.size() != nxs || fields.scheme.eps_dual.size() != nxs ||
        fields.eps_primal.size() != nxs || fields.E_primal.E.size() != nxs)
        throw std::invalid_argument("hybrid_step: field arrays do not match mesh");
    if (!(fields.scheme.dt > 0.0))
        throw std::invalid_argument("hybrid_step: dt must be positive");
    check_thresholds(dec.eta0, dec.delta0, "hybrid_step");

    const double dx = mesh.dx, dv = mesh.dv, dt = fields.scheme.dt;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    if (ws.rho_next.size() != nxs || ws.zeros.size() != nvs) {
        ws.zeros.assign(nvs, 0.0);
        ws.bracket_s.resize(nxs);
        ws.flux.resize(nxs * nvs);
        ws.g_scratch.resize(nxs * nvs);
        ws.rho_next.resize(nxs);
        ws.jk.resize(nxs);
        ws.jf.resize(nxs);
        ws.remainder.resize(nxs);
        ws.g_norms.resize(nxs);
        ws.need_flux_row.resize(nxs);
        ws.maintained.resize(nxs);
    }

    // One pass over the labels derives everything regime-shaped: the singleton
    // validation, which interfaces carry live g, which cells need position
    // fluxes, and the fluid flux on every interface a Fluid cell will read.
    {
        const Regime* lab = dec.labels.data();
        const bool k_first = (lab[0] == Regime::Kinetic);
        bool kprev = (lab[nxs - 1] == Regime::Kinetic);
        bool kcur = k_first;
        for (int i = 0; i < nx; ++i) {
            const bool knext =
                (i + 1 < nx) ? (lab[static_cast<std::size_t>(i + 1)] == Regime::Kinetic)
                             : k_first;
            if (!kcur && kprev && knext)
                throw std::invalid_argument("hybrid_step: one-cell Fluid run at cell " +
                                            std::to_string(i));
            const std::size_t s = static_cast<std::size_t>(i);
            ws.maintained[s] = (kcur || knext) ? 1 : 0;
            ws.need_flux_row[s] = (kprev || kcur || knext) ? 1 : 0;
            if (!(kcur && knext))
                ws.jf[s] = detail::limit_flux_at(
                    state.rho[s], state.rho[static_cast<std::size_t>(wrap_next(i, nx))],
                    fields.scheme.E_dual[s], dx, maxw.m2, maxw.m1p);
            kprev = kcur;
            kcur = knext;
        }
    }
    auto row = [&](int d) -> const double* {
        return ws.maintained[static_cast<std::size_t>(d)]
                   ? state.g.data() + static_cast<std::size_t>(d) * nvs
                   : ws.zeros.data();
    };

    // ---- indicators (time-n data), deciding the decomposition for t^{n+1} ----
    bool changed = false;
    if (update_indicators) {
        remainder_into(state.rho, fields.E_primal, fields.eps_primal, mesh, ws.remainder.data());
        // The perturbation indicator only matters for Kinetic cells whose
        // remainder already passed; leave every other interface at +inf.
        std::fill(ws.g_norms.begin(), ws.g_norms.end(), kInf);
        for (int i = 0; i < nx; ++i) {
            const std::size_t s = static_cast<std::size_t>(i);
            if (dec.labels[s] != Regime::Kinetic) continue;
            if (!(std::abs(ws.remainder[s]) <= dec.eta0)) continue;
            for (int d : {wrap_prev(i, nx), i}) {
                const std::size_t sd = static_cast<std::size_t>(d);
                if (ws.g_norms[sd] == kInf)
                    ws.g_norms[sd] = g_norm(std::span<const double>(
                                                state.g.data() + sd * nvs, nvs),
                                            maxw, mesh);
            }
        }
        update_domain_into(dec, ws.remainder, ws.g_norms, ws.labels_raw, ws.labels_next);
        changed = (ws.labels_next != dec.labels);
    }

    // ---- micro step on maintained interfaces --------------------------------
    for (int i = 0; i < nx; ++i) {
        if (!ws.need_flux_row[static_cast<std::size_t>(i)]) continue;
        const double* gL = row(wrap_prev(i, nx));
        const double* gR = row(i);
        ws.bracket_s[static_cast<std::size_t>(i)] = detail::upwind_bracket(gL, gR, mesh);
        const double rho_i = state.rho[static_cast<std::size_t>(i)];
        const double s_i = ws.bracket_s[static_cast<std::size_t>(i)];
        double* Fi = ws.flux.data() + static_cast<std::size_t>(i) * nvs;
        for (int j = 0; j < nv; ++j)
            Fi[j] = detail::f_entry(gL[j], gR[j], s_i, rho_i,
                                    mesh.v_center[static_cast<std::size_t>(j)],
                                    maxw.M[static_cast<std::size_t>(j)], dv);
    }

    double eps_prev = -1.0;
    detail::MicroCoeffs coeffs{0.0, 0.0};
    for (int d = 0; d < nx; ++d) {
        const std::size_t sd = static_cast<std::size_t>(d);
        if (!ws.maintained[sd]) continue;
        const double eps = fields.scheme.eps_dual[sd];
        if (!(eps > 0.0))
            throw std::invalid_argument("hybrid_step: eps_dual must be positive");
        if (eps != eps_prev) {
            coeffs = detail::micro_coeffs(eps, dt);
            eps_prev = eps;
        }
        const double k = coeffs.growth / (dx * dv);

        const double* gd = state.g.data() + sd * nvs;  // own row is live
        const double* FL = ws.flux.data() + sd * nvs;
        const double* FR = ws.flux.data() + static_cast<std::size_t>(wrap_next(d, nx)) * nvs;
        double* out = ws.g_scratch.data() + sd * nvs;

        const double E = fields.scheme.E_dual[sd];
        const double rho_half = 0.5 * (state.rho[sd] +
                                       state.rho[static_cast<std::size_t>(wrap_next(d, nx))]);
        double G_lo = 0.0;
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
        ws.jk[sd] = -detail::signed_first_moment(out, mesh) / eps;
    }

    // ---- density update and recorded mass variation -------------------------
    // delta_m accumulates the update increments rather than re-differencing
    // the committed densities: same quantity sum_i dx (rho^{n+1}-rho^n)/dt,
    // evaluated before the +rho rounding can swallow the low bits.
    const double r = dt / dx;
    CompensatedSum dm;
    for (int i = 0; i < nx; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        const std::vector<double>& J = (dec.labels[s] == Regime::Kinetic) ? ws.jk : ws.jf;
        const double incr = r * (J[s] - J[static_cast<std::size_t>(wrap_prev(i, nx))]);
        ws.rho_next[s] = state.rho[s] + incr;
        dm.add(incr);
    }
    const double delta_m = dm.value() * (dx / dt);

    // ---- commit --------------------------------------------------------------
    for (int d = 0; d < nx; ++d) {
        const std::size_t sd = static_cast<std::size_t>(d);
        if (ws.maintained[sd])
            std::memcpy(state.g.data() + sd * nvs, ws.g_scratch.data() + sd * nvs,
                        nvs * sizeof(double));
    }
    if (changed) {
        const Regime* nl = ws.labels_next.data();
        const bool k_first = (nl[0] == Regime::Kinetic);
        bool kcur = k_first;
        for (int d = 0; d < nx; ++d) {
            const bool knext =
                (d + 1 < nx) ? (nl[static_cast<std::size_t>(d + 1)] == Regime::Kinetic)
                             : k_first;
            const std::size_t sd = static_cast<std::size_t>(d);
            const bool now = kcur || knext;
            if (now != static_cast<bool>(ws.maintained[sd]))
                std::memset(state.g.data() + sd * nvs, 0, nvs * sizeof(double));
            kcur = knext;
        }
        dec.labels.swap(ws.labels_next);
    }
    std::swap(state.rho, ws.rho_next);
    state.step += 1;
    state.time = static_cast<double>(state.step) * dt;

    return {changed, delta_m};
}

double mass_variation_formula(const KineticState& state, const DomainDecomposition& dec,
                              const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
                              const FieldConfig& fields)
{
    const int nx = mesh.nx, nv = mesh.nv;
    const auto nxs = static_cast<std::size_t>(nx);
    const auto nvs = static_cast<std::size_t>(nv);
    if (state.rho.size() != nxs || state.g.size() != nxs * nvs)
        throw std::invalid_argument("mass_variation_formula: state dimensions do not match mesh");
    if (dec.labels.size() != nxs)
        throw std::invalid_argument("mass_variation_formula: decomposition does not match mesh");

    int transitions = 0;
    for (int d = 0; d < nx; ++d)
        if (dec.labels[static_cast<std::size_t>(d)] !=
            dec.labels[static_cast<std::size_t>(wrap_next(d, nx))])
            ++transitions;
    if (transitions != 2)
        throw std::invalid_argument(
            "mass_variation_formula: decomposition must be a two-subdomain split, found " +
            std::to_string(transitions) + " regime changes");

    std::vector<double> zeros(nvs, 0.0);
    auto row = [&](int d) -> const double* {
        return interface_maintained(dec, d)
                   ? state.g.data() + static_cast<std::size_t>(d) * nvs
                   : zeros.data();
    };

    double total = 0.0;
    for (int d = 0; d < nx; ++d) {
        const std::size_t sd = static_cast<std::size_t>(d);
        const Regime left = dec.labels[sd];
        const Regime right = dec.labels[static_cast<std::size_t>(wrap_next(d, nx))];
        if (left == right) continue;
        const double beta = (left == Regime::Kinetic) ? 1.0 : -1.0;

        const double eps = fields.eps_dual[sd];
        if (!(eps > 0.0))
            throw std::invalid_argument("mass_variation_formula: eps_dual must be positive");
        const auto mc = detail::micro_coeffs(eps, fields.dt);

        const double* gm = row(wrap_prev(d, nx));
        const double* gc = state.g.data() + sd * nvs;  // boundary interface is maintained
        const double* gp = row(wrap_next(d, nx));

        const double vg = detail::signed_first_moment(gc, mesh);

        // <v Q_d> with the stepper's ghost masking; the projection part of Q
        // drops out of the first moment only in exact arithmetic, so it is
        // kept here.
        double sq = 0.0;
        for (int j = 0; j < nv; ++j) {
            const auto [vp, vm] = upwind_split(mesh.v_center[static_cast<std::size_t>(j)]);
            sq += vp * (gc[j] - gm[j]) + vm * (gp[j] - gc[j]);
        }
        sq *= mesh.dv;
        const auto [Ep, Em] = upwind_split(fields.E_dual[sd]);
        auto q_face = [&](int k) -> double {
            if (k == 0 || k == nv) return 0.0;
            return (Ep * gc[k - 1] + Em * gc[k]) * mesh.dx;
        };
        double vQ = 0.0;
        for (int j = 0; j < nv; ++j) {
            const auto [vp, vm] = upwind_split(mesh.v_center[static_cast<std::size_t>(j)]);
            const double x_part = (vp * (gc[j] - gm[j]) + vm * (gp[j] - gc[j]) -
                                   maxw.M[static_cast<std::size_t>(j)] * sq) * mesh.dv;
            const double Qj = x_part + (q_face(j + 1) - q_face(j));
            vQ += mesh.v_center[static_cast<std::size_t>(j)] * Qj;
        }
        vQ *= mesh.dv;

        // Limit flux on the kinetic density and on the fluid density: one
        // merged array stores both, so J^{eps,F} == J^F and the final bracket
        // of the closed form vanishes identically.
        const double J_eps_F = limit_flux(state.rho, d, mesh, maxw, fields);
        const double J_F = J_eps_F;

        const double D = -vg * (mc.decay / eps) + vQ * (mc.growth / (eps * mesh.dx * mesh.dv)) -
                         mc.decay * J_eps_F + (J_eps_F - J_F);
        total += beta * D;
    }
    return total;
}

}  // namespace vbgk
