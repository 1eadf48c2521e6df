#include "vbgk/diagnostics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vbgk/numeric.hpp"

namespace vbgk {

EquilibriumReference make_equilibrium(std::span<const double> V_samples, double M0,
                                      const DiscreteMaxwellian& maxw, const PhaseMesh& mesh)
{
    const std::size_t n = V_samples.size();
    if (n == 0)
        throw std::invalid_argument("make_equilibrium: no spatial samples");
    if (!(M0 > 0.0) || !std::isfinite(M0))
        throw std::invalid_argument("make_equilibrium: M0 must be positive and finite");

    EquilibriumReference ref;
    ref.M0 = M0;
    ref.phi.resize(n);
    CompensatedSum z;
    for (std::size_t i = 0; i < n; ++i) {
        ref.phi[i] = std::exp(-V_samples[i]);
        z.add(ref.phi[i]);
    }
    const double norm = z.value() * mesh.dx;
    for (std::size_t i = 0; i < n; ++i) ref.phi[i] /= norm;

    const auto nv = static_cast<std::size_t>(mesh.nv);
    ref.F_grid.resize(n * nv);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = M0 * ref.phi[i];
        for (std::size_t j = 0; j < nv; ++j)
            ref.F_grid[i * nv + j] = w * maxw.M[j];
    }
    return ref;
}

std::vector<double> reconstruct_f(const KineticState& state, const PhaseMesh& mesh,
                                  const DiscreteMaxwellian& maxw)
{
    const auto nx = static_cast<std::size_t>(mesh.nx);
    const auto nv = static_cast<std::size_t>(mesh.nv);
    if (state.rho.size() != nx || state.g.size() != nx * nv)
        throw std::invalid_argument("reconstruct_f: state dimensions do not match mesh");
    std::vector<double> f(nx * nv);
    for (std::size_t i = 0; i < nx; ++i) {
        // Dual point i sits to the right of primal cell i; its left neighbour
        // wraps periodically.
        const std::size_t left = (i == 0) ? nx - 1 : i - 1;
        const double* gl = state.g.data() + left * nv;
        const double* gr = state.g.data() + i * nv;
        for (std::size_t j = 0; j < nv; ++j)
            f[i * nv + j] = state.rho[i] * maxw.M[j] + 0.5 * (gl[j] + gr[j]);
    }
    return f;
}

double norm_weighted(std::span<const double> values, const EquilibriumReference& equilibrium,
                     const PhaseMesh& mesh)
{
    if (values.size() != equilibrium.F_grid.size())
        throw std::invalid_argument("norm_weighted: value grid does not match equilibrium grid");
    CompensatedSum s;
    for (std::size_t k = 0; k < values.size(); ++k)
        s.add(values[k] * values[k] / equilibrium.F_grid[k]);
    return std::sqrt(s.value() * mesh.dx * mesh.dv);
}

double norm_L2_space(std::span<const double> values, const PhaseMesh& mesh)
{
    CompensatedSum s;
    for (double v : values) s.add(v * v);
    return std::sqrt(s.value() * mesh.dx);
}

double total_mass(std::span<const double> rho, const PhaseMesh& mesh)
{
    return compensated_sum(rho) * mesh.dx;
}

double decay_rate(std::span<const double> times, std::span<const double> norms,
                  double t_begin, double t_end, double floor)
{
    if (times.size() != norms.size())
        throw std::invalid_argument("decay_rate: times and norms differ in length");
    if (!(t_begin < t_end))
        throw std::invalid_argument("decay_rate: empty time window");

    std::vector<double> t, y;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t_begin || times[k] > t_end) continue;
        if (!(norms[k] > 0.0))
            throw std::invalid_argument("decay_rate: non-positive norm inside fit window");
        if (norms[k] <= floor) continue;  // round-off plateau
        t.push_back(times[k]);
        y.push_back(std::log(norms[k]));
    }
    if (t.size() < 10)
        throw std::invalid_argument("decay_rate: fewer than 10 usable samples in window (" +
                                    std::to_string(t.size()) + ")");

    // Ordinary least squares in centered form keeps the normal equations
    // well-conditioned for long series.
    CompensatedSum st, sy;
    for (std::size_t k = 0; k < t.size(); ++k) {
        st.add(t[k]);
        sy.add(y[k]);
    }
    const double tbar = st.value() / static_cast<double>(t.size());
    const double ybar = sy.value() / static_cast<double>(t.size());
    CompensatedSum sxx, sxy;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double dt = t[k] - tbar;
        sxx.add(dt * dt);
        sxy.add(dt * (y[k] - ybar));
    }
    if (!(sxx.value() > 0.0))
        throw std::invalid_argument("decay_rate: degenerate time samples in window");
    return sxy.value() / sxx.value();
}

}  // namespace vbgk
