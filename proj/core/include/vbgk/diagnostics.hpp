#pragma once

#include <span>
#include <vector>

#include "vbgk/kinetic.hpp"
#include "vbgk/mesh.hpp"

namespace vbgk {

/// Discretized global equilibrium F(x, v) = M0 * phi(x) * M(v), where phi is
/// the normalized spatial profile exp(-V) / (sum_i exp(-V_i) dx).  The x
/// samples may be primal centers or dual points; both share the spacing dx,
/// so the same normalization applies.
struct EquilibriumReference {
    std::vector<double> F_grid;  ///< row-major n_pos x nv, F_grid[i*nv+j] > 0
    std::vector<double> phi;     ///< per-sample spatial profile, sums to 1/dx
    double M0 = 0.0;             ///< total mass carried by the equilibrium
};

EquilibriumReference make_equilibrium(std::span<const double> V_samples, double M0,
                                      const DiscreteMaxwellian& maxw, const PhaseMesh& mesh);

/// Cell-centered reconstruction f_ij = rho_i M_j + (g_{i-1/2,j} + g_{i+1/2,j})/2
/// with periodic dual indexing; row-major nx x nv.
std::vector<double> reconstruct_f(const KineticState& state, const PhaseMesh& mesh,
                                  const DiscreteMaxwellian& maxw);

/// sqrt( sum_ij values_ij^2 dx dv / F_ij ).  `values` must match the
/// equilibrium's grid (n_pos x nv, row-major).
double norm_weighted(std::span<const double> values, const EquilibriumReference& equilibrium,
                     const PhaseMesh& mesh);

/// sqrt( sum_i values_i^2 dx )
double norm_L2_space(std::span<const double> values, const PhaseMesh& mesh);

/// sum_i rho_i dx, compensated.
double total_mass(std::span<const double> rho, const PhaseMesh& mesh);

/// Least-squares slope of log(norm) versus t over samples with
/// t_begin <= t_k <= t_end.  Samples where the norm has fallen to or below
/// `floor` are dropped before fitting (round-off plateau).  Throws
/// std::invalid_argument if fewer than 10 samples remain or any retained
/// norm is not strictly positive.
double decay_rate(std::span<const double> times, std::span<const double> norms,
                  double t_begin, double t_end, double floor = 1e-12);

}  // namespace vbgk
