#include "vbgk/mesh.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vbgk/numeric.hpp"

namespace vbgk {

PhaseMesh build_mesh(int nx, int nv, double x_star, double v_star)
{
    if (nx < 8)
        throw std::invalid_argument("build_mesh: nx must be >= 8, got " + std::to_string(nx));
    if (nv < 4 || nv % 2 != 0)
        throw std::invalid_argument("build_mesh: nv must be even and >= 4, got " + std::to_string(nv));
    if (!(x_star > 0.0) || !std::isfinite(x_star))
        throw std::invalid_argument("build_mesh: x_star must be positive and finite");
    if (!(v_star > 0.0) || !std::isfinite(v_star))
        throw std::invalid_argument("build_mesh: v_star must be positive and finite");

    PhaseMesh mesh;
    mesh.nx = nx;
    mesh.nv = nv;
    mesh.x_star = x_star;
    mesh.v_star = v_star;
    mesh.dx = x_star / nx;
    mesh.dv = 2.0 * v_star / nv;

    mesh.x_center.resize(static_cast<std::size_t>(nx));
    mesh.x_dual.resize(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i) {
        mesh.x_center[static_cast<std::size_t>(i)] = (i + 0.5) * mesh.dx;
        mesh.x_dual[static_cast<std::size_t>(i)] = (i + 1.0) * mesh.dx;
    }

    // Build the velocity grid outward from v = 0 and mirror the negative side
    // from the positive one, so v_interface[nv-k] == -v_interface[k] and
    // v_center[nv-1-j] == -v_center[j] hold bitwise, and the extreme
    // interfaces land on +/-v_star exactly.
    const int half = nv / 2;
    mesh.v_interface.assign(static_cast<std::size_t>(nv) + 1, 0.0);
    mesh.v_interface[static_cast<std::size_t>(half)] = 0.0;
    for (int k = 1; k <= half; ++k) {
        const double pos = (k == half) ? v_star : k * mesh.dv;
        mesh.v_interface[static_cast<std::size_t>(half + k)] = pos;
        mesh.v_interface[static_cast<std::size_t>(half - k)] = -pos;
    }

    mesh.v_center.resize(static_cast<std::size_t>(nv));
    for (int j = 0; j < half; ++j) {
        const double c = 0.5 * (mesh.v_interface[static_cast<std::size_t>(half + j)] +
                                mesh.v_interface[static_cast<std::size_t>(half + j + 1)]);
        mesh.v_center[static_cast<std::size_t>(half + j)] = c;
        mesh.v_center[static_cast<std::size_t>(half - 1 - j)] = -c;
    }

    return mesh;
}

DiscreteMaxwellian build_maxwellian(const PhaseMesh& mesh)
{
    const auto nv = static_cast<std::size_t>(mesh.nv);
    DiscreteMaxwellian maxw;
    maxw.M.resize(nv);

    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < nv; ++j) {
        const double v = mesh.v_center[j];
        maxw.M[j] = norm * std::exp(-0.5 * v * v);
    }

    // Rescale so <M> == 1, unless the raw quadrature already sums to 1 within
    // a few ulps -- rescaling then would only churn the last bit and break
    // idempotence of the normalization.
    const double raw = compensated_sum(maxw.M) * mesh.dv;
    if (std::abs(raw - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) {
        const double inv = 1.0 / raw;
        for (double& m : maxw.M) m *= inv;
    }

    maxw.m0 = bracket(maxw.M, mesh);

    CompensatedSum s2, s4, s1p;
    for (std::size_t j = 0; j < nv; ++j) {
        const double v = mesh.v_center[j];
        s2.add(v * v * maxw.M[j]);
        s4.add(v * v * v * v * maxw.M[j]);
        const int ji = static_cast<int>(j);
        s1p.add(v * 0.5 * (maxw.ghost(ji + 1) - maxw.ghost(ji - 1)));
    }
    maxw.m2 = s2.value() * mesh.dv;
    maxw.m4 = s4.value() * mesh.dv;
    // Central difference /(2 dv) times the quadrature weight dv: the dv
    // factors cancel, so the accumulated sum is already the moment.
    maxw.m1p = s1p.value();

    return maxw;
}

double bracket(std::span<const double> values, const PhaseMesh& mesh)
{
    if (values.size() != static_cast<std::size_t>(mesh.nv))
        throw std::invalid_argument("bracket: expected " + std::to_string(mesh.nv) +
                                    " velocity values, got " + std::to_string(values.size()));
    return compensated_sum(values) * mesh.dv;
}

double discrete_moment(int k, const DiscreteMaxwellian& maxw, const PhaseMesh& mesh)
{
    if (k < 0 || k > 8)
        throw std::invalid_argument("discrete_moment: order must be in [0, 8], got " + std::to_string(k));

    CompensatedSum acc;
    for (int j = 0; j < mesh.nv; ++j) {
        double p = maxw.M[static_cast<std::size_t>(j)];
        const double v = mesh.v_center[static_cast<std::size_t>(j)];
        for (int q = 0; q < k; ++q) p *= v;
        acc.add(p);
    }
    return acc.value() * mesh.dv;
}

}  // namespace vbgk
