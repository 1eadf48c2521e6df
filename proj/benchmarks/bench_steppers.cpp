// Microbenchmarks for the three steppers at the paper-scale resolution
// (N_x = 100, N_v = 256).  The hybrid stepper is measured in its two extreme
// regimes: all-kinetic (overhead over the dense kernel) and all-fluid
// (asymptotic complexity reduction).

#include <benchmark/benchmark.h>

#include <numbers>

#include "vbgk/hybrid.hpp"
#include "vbgk/kinetic.hpp"
#include "vbgk/mesh.hpp"
#include "vbgk/scenario.hpp"

namespace {

struct Setup {
    vbgk::PhaseMesh mesh;
    vbgk::DiscreteMaxwellian maxw;
    vbgk::InitialData data;
    vbgk::FieldConfig fields;
    vbgk::HybridFields hfields;
    vbgk::KineticState state;

    explicit Setup(double eps, int case_id = 3)
        : mesh(vbgk::build_mesh(100, 256, std::numbers::pi, 8.0)),
          maxw(vbgk::build_maxwellian(mesh)),
          data(vbgk::make_initial_data(case_id, mesh))
    {
        fields.E_dual = vbgk::sample_dual(data.E, mesh);
        fields.eps_dual = vbgk::make_eps_profile(vbgk::EpsKind::Constant, eps, mesh);
        fields.dt = 1e-4;
        hfields.scheme = fields;
        hfields.E_primal = vbgk::make_field_derivs(data, mesh);
        hfields.eps_primal = vbgk::make_eps_profile_primal(vbgk::EpsKind::Constant, eps, mesh);
        state = vbgk::make_initial_state(data, mesh, maxw);
    }
};

void BM_kinetic_step(benchmark::State& bench)
{
    Setup s(1.0);
    for (auto _ : bench) {
        vbgk::kinetic_step(s.state, s.mesh, s.maxw, s.fields);
        benchmark::DoNotOptimize(s.state.rho.data());
    }
}
BENCHMARK(BM_kinetic_step);

void BM_limit_step(benchmark::State& bench)
{
    Setup s(1.0);
    std::vector<double> rho = s.state.rho;
    for (auto _ : bench) {
        rho = vbgk::step_limit(rho, s.mesh, s.maxw, s.fields);
        benchmark::DoNotOptimize(rho.data());
    }
}
BENCHMARK(BM_limit_step);

void BM_hybrid_step_all_kinetic(benchmark::State& bench)
{
    Setup s(1.0);
    vbgk::DomainDecomposition dec = vbgk::make_initial_decomposition(s.mesh.nx, 0.0, 0.0);
    vbgk::HybridWorkspace ws;
    for (auto _ : bench) {
        vbgk::hybrid_step(s.state, dec, s.mesh, s.maxw, s.hfields, ws);
        benchmark::DoNotOptimize(s.state.rho.data());
    }
}
BENCHMARK(BM_hybrid_step_all_kinetic);

void BM_hybrid_step_all_fluid(benchmark::State& bench)
{
    Setup s(1e-6, 1);
    vbgk::DomainDecomposition dec = vbgk::make_initial_decomposition(s.mesh.nx, 1e-4, 1e-4);
    vbgk::HybridWorkspace ws;
    // Drive to the all-fluid regime first, then measure the steady state.
    for (int k = 0; k < 64 && vbgk::count_kinetic(dec) != 0; ++k) {
        vbgk::hybrid_step(s.state, dec, s.mesh, s.maxw, s.hfields, ws);
    }
    for (auto _ : bench) {
        vbgk::hybrid_step(s.state, dec, s.mesh, s.maxw, s.hfields, ws);
        benchmark::DoNotOptimize(s.state.rho.data());
    }
}
BENCHMARK(BM_hybrid_step_all_fluid);

}  // namespace

BENCHMARK_MAIN();
