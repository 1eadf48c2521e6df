#include "vbgk/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vbgk {

namespace {

double gauss(double v) { return std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi); }

double bump_raw(double x)
{
    const double u = x - 0.5 * std::numbers::pi;
    return 0.5 * (std::atan(5.0 + 10.0 * u) + std::atan(5.0 - 10.0 * u));
}

std::vector<double> sample(const std::function<double(double)>& fn,
                           const std::vector<double>& xs)
{
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = fn(xs[i]);
    return out;
}

}  // namespace

InitialData make_initial_data(int case_id, const PhaseMesh&)
{
    InitialData data;
    data.case_id = case_id;

    if (case_id < 1 || case_id > 4)
        throw std::invalid_argument("make_initial_data: case must be 1..4, got " +
                                    std::to_string(case_id));
    const bool far_from_equilibrium = (case_id == 3 || case_id == 4);
    const bool with_field = (case_id == 2 || case_id == 4);

    if (far_from_equilibrium)
        data.f0 = [](double x, double v) {
            return 4.0 * v * v * v * v * gauss(v) * (1.0 + std::cos(2.0 * x));
        };
    else
        data.f0 = [](double x, double v) { return gauss(v) * (1.0 + std::cos(2.0 * x)); };

    if (with_field) {
        data.E = [](double x) { return 0.5 * std::cos(2.0 * x); };
        data.dE = [](double x) { return -std::sin(2.0 * x); };
        data.d2E = [](double x) { return -2.0 * std::cos(2.0 * x); };
        data.d3E = [](double x) { return 4.0 * std::sin(2.0 * x); };
        data.V = [](double x) { return -0.25 * std::sin(2.0 * x); };
    } else {
        auto zero = [](double) { return 0.0; };
        data.E = zero;
        data.dE = zero;
        data.d2E = zero;
        data.d3E = zero;
        data.V = zero;
    }
    return data;
}

KineticState make_initial_state(const InitialData& data, const PhaseMesh& mesh,
                                const DiscreteMaxwellian& maxw)
{
    const auto nx = static_cast<std::size_t>(mesh.nx);
    const auto nv = static_cast<std::size_t>(mesh.nv);
    KineticState state;
    state.rho.resize(nx);
    state.g.resize(nx * nv);
    state.time = 0.0;
    state.step = 0;

    std::vector<double> column(nv);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nv; ++j)
            column[j] = data.f0(mesh.x_center[i], mesh.v_center[j]);
        state.rho[i] = bracket(column, mesh);
    }
    for (std::size_t d = 0; d < nx; ++d) {
        for (std::size_t j = 0; j < nv; ++j)
            column[j] = data.f0(mesh.x_dual[d], mesh.v_center[j]);
        const double rho_dual = bracket(column, mesh);
        for (std::size_t j = 0; j < nv; ++j)
            state.g[d * nv + j] = column[j] - rho_dual * maxw.M[j];
    }
    return state;
}

std::vector<double> make_eps_profile(EpsKind kind, double eps_value, const PhaseMesh& mesh)
{
    const auto nx = static_cast<std::size_t>(mesh.nx);
    if (kind == EpsKind::Constant) {
        if (!(eps_value > 0.0) || !std::isfinite(eps_value))
            throw std::invalid_argument("make_eps_profile: epsilon must be positive and finite");
        return std::vector<double>(nx, eps_value);
    }
    std::vector<double> eps(nx);
    for (std::size_t d = 0; d < nx; ++d) eps[d] = bump_raw(mesh.x_dual[d]);
    const double peak = *std::max_element(eps.begin(), eps.end());
    if (!(peak > 0.0))
        throw std::invalid_argument("make_eps_profile: profile must be positive");
    for (double& e : eps) e /= peak;
    return eps;
}

std::vector<double> make_eps_profile_primal(EpsKind kind, double eps_value, const PhaseMesh& mesh)
{
    const auto nx = static_cast<std::size_t>(mesh.nx);
    if (kind == EpsKind::Constant) {
        if (!(eps_value > 0.0) || !std::isfinite(eps_value))
            throw std::invalid_argument("make_eps_profile_primal: epsilon must be positive and finite");
        return std::vector<double>(nx, eps_value);
    }
    // Normalize with the dual-sample peak so primal and dual arrays sample the
    // same function eps(x).
    std::vector<double> dual(nx);
    for (std::size_t d = 0; d < nx; ++d) dual[d] = bump_raw(mesh.x_dual[d]);
    const double peak = *std::max_element(dual.begin(), dual.end());
    if (!(peak > 0.0))
        throw std::invalid_argument("make_eps_profile_primal: profile must be positive");
    std::vector<double> eps(nx);
    for (std::size_t i = 0; i < nx; ++i) eps[i] = bump_raw(mesh.x_center[i]) / peak;
    return eps;
}

std::vector<double> sample_dual(const std::function<double(double)>& fn, const PhaseMesh& mesh)
{
    return sample(fn, mesh.x_dual);
}

std::vector<double> sample_primal(const std::function<double(double)>& fn, const PhaseMesh& mesh)
{
    return sample(fn, mesh.x_center);
}

FieldDerivs make_field_derivs(const InitialData& data, const PhaseMesh& mesh)
{
    FieldDerivs out;
    out.E = sample_primal(data.E, mesh);
    out.dE = sample_primal(data.dE, mesh);
    out.d2E = sample_primal(data.d2E, mesh);
    out.d3E = sample_primal(data.d3E, mesh);
    auto all_zero = [](const std::vector<double>& v) {
        for (double x : v)
            if (x != 0.0) return false;
        return true;
    };
    out.zero_field =
        all_zero(out.E) && all_zero(out.dE) && all_zero(out.d2E) && all_zero(out.d3E);
    return out;
}

}  // namespace vbgk
