#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vbgk/diagnostics.hpp"
#include "vbgk/mesh.hpp"
#include "vbgk/scenario.hpp"

using namespace vbgk;

namespace {

constexpr double kPi = std::numbers::pi;

bool close(double got, double want, double atol, double rtol)
{
    return std::abs(got - want) <= atol + rtol * std::abs(want);
}

}  // namespace

TEST_CASE("equilibrium reference: flat potential, positivity, total mass")
{
    const PhaseMesh mesh = build_mesh(100, 64, kPi, 8.0);
    const DiscreteMaxwellian maxw = build_maxwellian(mesh);
    const double M0 = 2.5;

    const std::vector<double> V_zero(static_cast<std::size_t>(mesh.nx), 0.0);
    const EquilibriumReference eq = make_equilibrium(V_zero, M0, maxw, mesh);

    REQUIRE(eq.phi.size() == static_cast<std::size_t>(mesh.nx));
    REQUIRE(eq.F_grid.size() == static_cast<std::size_t>(mesh.nx * mesh.nv));
    CHECK(eq.M0 == M0);
    for (double p : eq.phi) CHECK(close(p, 1.0 / kPi, 0.0, 1e-14));
    for (double F : eq.F_grid) CHECK(F > 0.0);

    long double total = 0.0L;
    for (double F : eq.F_grid) total += F;
    total *= static_cast<long double>(mesh.dx) * static_cast<long double>(mesh.dv);
    CHECK(close(static_cast<double>(total), M0 * maxw.m0, 0.0, 1e-12));
}

TEST_CASE("equilibrium reference: cosine-field potential normalizes to unit weight")
{
    const PhaseMesh mesh = build_mesh(100, 64, kPi, 8.0);
    const DiscreteMaxwellian maxw = build_maxwellian(mesh);
    const InitialData data = make_initial_data(2, mesh);

    const EquilibriumReference eq =
        make_equilibrium(sample_primal(data.V, mesh), 1.0, maxw, mesh);
    long double weight = 0.0L;
    for (double p : eq.phi) weight += p;
    weight *= mesh.dx;
    CHECK(close(static_cast<double>(weight), 1.0, 0.0, 1e-13));
    // The potential tilts the profile, so it must not be flat.
    const auto [lo, hi] = std::minmax_element(eq.phi.begin(), eq.phi.end());
    CHECK(*hi - *lo > 0.1 * *hi);
}

TEST_CASE("distribution reconstruction examples")
{
    const PhaseMesh mesh = build_mesh(16, 32, kPi, 8.0);
    const DiscreteMaxwellian maxw = build_maxwellian(mesh);
    KineticState state;
    state.rho.assign(static_cast<std::size_t>(mesh.nx), 1.0);
    state.g.assign(static_cast<std::size_t>(mesh.nx * mesh.nv), 0.0);

    SUBCASE("equilibrium state reproduces the Maxwellian row by row")
    {
        const std::vector<double> f = reconstruct_f(state, mesh, maxw);
        for (int i = 0; i < mesh.nx; ++i)
            for (int j = 0; j < mesh.nv; ++j)
                CHECK(f[static_cast<std::size_t>(i) * mesh.nv + static_cast<std::size_t>(j)] ==
                      maxw.M[static_cast<std::size_t>(j)]);
    }

    SUBCASE("x-homogeneous perturbation passes through the dual average unchanged")
    {
        std::vector<double> c(static_cast<std::size_t>(mesh.nv));
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        for (double& x : c) x = uni(rng);
        for (int d = 0; d < mesh.nx; ++d)
            for (int j = 0; j < mesh.nv; ++j)
                state.g[static_cast<std::size_t>(d) * mesh.nv + static_cast<std::size_t>(j)] =
                    c[static_cast<std::size_t>(j)];
        const std::vector<double> f = reconstruct_f(state, mesh, maxw);
        for (int i = 0; i < mesh.nx; ++i)
            for (int j = 0; j < mesh.nv; ++j) {
                const auto js = static_cast<std::size_t>(j);
                CHECK(close(f[static_cast<std::size_t>(i) * mesh.nv + js],
                            maxw.M[js] + c[js], 1e-17, 1e-15));
            }
    }

    SUBCASE("mean-free perturbations keep the row brackets equal to rho")
    {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        for (double& r : state.rho) r = 1.0 + 0.5 * uni(rng);
        for (int d = 0; d < mesh.nx; ++d) {
            double* col = state.g.data() + static_cast<std::size_t>(d) * mesh.nv;
            for (int j = 0; j < mesh.nv; ++j) col[j] = uni(rng);
            const double mean =
                bracket(std::span<const double>(col, static_cast<std::size_t>(mesh.nv)), mesh);
            for (int j = 0; j < mesh.nv; ++j)
                col[j] -= mean * maxw.M[static_cast<std::size_t>(j)];
        }
        const std::vector<double> f = reconstruct_f(state, mesh, maxw);
        for (int i = 0; i < mesh.nx; ++i) {
            const double row_mass = bracket(
                std::span<const double>(f.data() + static_cast<std::size_t>(i) * mesh.nv,
                                        static_cast<std::size_t>(mesh.nv)),
                mesh);
            CHECK(close(row_mass, state.rho[static_cast<std::size_t>(i)], 1e-14, 1e-13));
        }
    }
}

TEST_CASE("weighted norm: exact zero, equilibrium value, homogeneity, oracle")
{
    const PhaseMesh mesh = build_mesh(32, 64, kPi, 8.0);
    const DiscreteMaxwellian maxw = build_maxwellian(mesh);
    const std::vector<double> V_zero(static_cast<std::size_t>(mesh.nx), 0.0);
    const double M0 = 2.5;
    const EquilibriumReference eq = make_equilibrium(V_zero, M0, maxw, mesh);

    const std::vector<double> zero(eq.F_grid.size(), 0.0);
    CHECK(norm_weighted(zero, eq, mesh) == 0.0);

    // values = F: sum F^2 / F dx dv = sum F dx dv = M0 * m0.
    CHECK(close(norm_weighted(eq.F_grid, eq, mesh), std::sqrt(M0 * maxw.m0), 0.0, 1e-12));

    std::vector<double> values(eq.F_grid.size());
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double& v : values) v = uni(rng);

    const double n1 = norm_weighted(values, eq, mesh);
    std::vector<double> doubled = values;
    for (double& v : doubled) v *= 2.0;
    CHECK(close(norm_weighted(doubled, eq, mesh), 2.0 * n1, 0.0, 1e-13));

    long double acc = 0.0L;
    for (std::size_t k = 0; k < values.size(); ++k)
        acc += static_cast<long double>(values[k]) * values[k] / eq.F_grid[k];
    acc *= static_cast<long double>(mesh.dx) * static_cast<long double>(mesh.dv);
    CHECK(close(n1, static_cast<double>(std::sqrt(acc)), 0.0, 1e-13));

    const std::vector<double> short_values(7, 0.0);
    CHECK_THROWS_AS(norm_weighted(short_values, eq, mesh), std::invalid_argument);
}

TEST_CASE("spatial L2 norm examples")
{
    const PhaseMesh mesh = build_mesh(100, 4, kPi, 8.0);

    const std::vector<double> zero(static_cast<std::size_t>(mesh.nx), 0.0);
    CHECK(norm_L2_space(zero, mesh) == 0.0);

    const std::vector<double> threes(static_cast<std::size_t>(mesh.nx), -3.0);
    CHECK(close(norm_L2_space(threes, mesh), 3.0 * std::sqrt(kPi), 0.0, 1e-14));

    // sum cos^2(2 x_i) = nx/2 exactly on the uniform grid (the mode-4 sum
    // vanishes), so the discrete norm equals sqrt(pi/2).
    std::vector<double> wave(static_cast<std::size_t>(mesh.nx));
    for (int i = 0; i < mesh.nx; ++i)
        wave[static_cast<std::size_t>(i)] =
            std::cos(2.0 * mesh.x_center[static_cast<std::size_t>(i)]);
    CHECK(close(norm_L2_space(wave, mesh), std::sqrt(kPi / 2.0), 0.0, 1e-13));
}

TEST_CASE("total mass examples")
{
    const PhaseMesh mesh = build_mesh(100, 4, kPi, 8.0);
    const std::vector<double> ones(static_cast<std::size_t>(mesh.nx), 1.0);
    CHECK(close(total_mass(ones, mesh), kPi, 0.0, 1e-15));

    const std::vector<double> zero(static_cast<std::size_t>(mesh.nx), 0.0);
    CHECK(total_mass(zero, mesh) == 0.0);

    std::vector<double> values(static_cast<std::size_t>(mesh.nx));
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double& v : values) v = uni(rng);
    long double acc = 0.0L;
    for (double v : values) acc += v;
    acc *= mesh.dx;
    CHECK(close(total_mass(values, mesh), static_cast<double>(acc), 1e-18, 1e-14));
}

TEST_CASE("decay rate: exact exponentials, scaling invariance, window")
{
    std::vector<double> times, norms;
    for (int k = 0; k <= 100; ++k) {
        const double t = 0.05 * k;
        times.push_back(t);
        norms.push_back(std::exp(-2.0 * t));
    }
    CHECK(close(decay_rate(times, norms, 0.0, 5.0), -2.0, 1e-12, 0.0));
    CHECK(close(decay_rate(times, norms, 0.5, 3.0), -2.0, 1e-12, 0.0));

    std::vector<double> scaled = norms;
    for (double& n : scaled) n *= 5.0;
    CHECK(close(decay_rate(times, scaled, 0.0, 5.0),
                decay_rate(times, norms, 0.0, 5.0), 1e-12, 0.0));

    std::vector<double> steep;
    for (double t : times) steep.push_back(5.0 * std::exp(-7.65 * t));
    CHECK(close(decay_rate(times, steep, 0.0, 3.0), -7.65, 1e-11, 0.0));

    // The fit must ignore samples outside [t_begin, t_end]: flatten the tail
    // and confirm the windowed slope is unaffected.
    std::vector<double> kinked = norms;
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] > 4.0) kinked[k] = std::exp(-8.0);
    CHECK(close(decay_rate(times, kinked, 0.5, 4.0), -2.0, 1e-12, 0.0));
}

TEST_CASE("decay rate: round-off floor trims the plateau")
{
    std::vector<double> times, norms;
    for (int k = 0; k <= 200; ++k) {
        const double t = 0.01 * k;
        times.push_back(t);
        norms.push_back(std::exp(-50.0 * t));  // below 1e-12 for t > ~0.55
    }
    const double rate = decay_rate(times, norms, 0.0, 2.0);
    CHECK(close(rate, -50.0, 1e-6, 0.0));
}

TEST_CASE("decay rate input validation")
{
    const std::vector<double> times{0.0, 0.1, 0.2, 0.3, 0.4};
    const std::vector<double> norms{1.0, 0.9, 0.8, 0.7, 0.6};
    // Only 5 samples in the window: too few for a trustworthy fit.
    CHECK_THROWS_AS(decay_rate(times, norms, 0.0, 1.0), std::invalid_argument);

    std::vector<double> t12, n12;
    for (int k = 0; k < 12; ++k) {
        t12.push_back(0.1 * k);
        n12.push_back(std::exp(-0.1 * k));
    }
    std::vector<double> with_zero = n12;
    with_zero[5] = 0.0;
    CHECK_THROWS_AS(decay_rate(t12, with_zero, 0.0, 2.0), std::invalid_argument);
    std::vector<double> with_negative = n12;
    with_negative[5] = -1.0;
    CHECK_THROWS_AS(decay_rate(t12, with_negative, 0.0, 2.0), std::invalid_argument);

    const std::vector<double> same_time(12, 1.0);
    CHECK_THROWS_AS(decay_rate(same_time, n12, 0.0, 2.0), std::invalid_argument);

    std::vector<double> mismatched = n12;
    mismatched.pop_back();
    CHECK_THROWS_AS(decay_rate(t12, mismatched, 0.0, 2.0), std::invalid_argument);
}
