#pragma once

#include <span>
#include <vector>

namespace vbgk {

// Staggered finite-volume mesh for the phase space [0, x_star] x [-v_star, v_star].
//
// Space is periodic.  The density rho lives on the nx primal cells with centers
//
//     x_center[i] = (i + 1/2) dx,    i = 0 .. nx-1,
//
// while the mean-free perturbation g lives on the dual (staggered) cells
// centered on primal interfaces,
//
//     x_dual[d] = (d + 1) dx,        d = 0 .. nx-1,
//
// so dual cell d sits between primal cells d and (d+1) % nx.
//
// Velocity is cut into nv uniform cells whose *interfaces* include -v_star, 0,
// and +v_star exactly; v_center[j] is the midpoint of cell j.  nv must be even
// so no cell straddles v = 0, which keeps the upwind sign split exact.  The
// grid is built mirror-symmetrically: v_center[nv-1-j] == -v_center[j] bitwise.
struct PhaseMesh {
    int nx = 0;
    int nv = 0;
    double x_star = 0.0;
    double v_star = 0.0;
    double dx = 0.0;
    double dv = 0.0;
    std::vector<double> x_center;     // nx primal cell centers
    std::vector<double> x_dual;       // nx dual cell centers (primal interfaces)
    std::vector<double> v_center;     // nv velocity cell centers
    std::vector<double> v_interface;  // nv+1 velocity interfaces

    // Index of the first positive-velocity cell; cells [0, half) have v < 0.
    int half() const { return nv / 2; }
};

// Validates nx >= 8, nv even and >= 4, x_star > 0, v_star > 0.
// Throws std::invalid_argument otherwise.
PhaseMesh build_mesh(int nx, int nv, double x_star, double v_star);

// Cell-centered discretization of the normalized Gaussian exp(-v^2/2)/sqrt(2pi),
// rescaled so that the discrete mass sum_j M[j] dv equals 1 to round-off.
// Moments of the discrete weight (not the continuum values) are cached because
// the drift-diffusion limit coefficients must match the kinetic scheme's own
// quadrature, not the exact integrals.
struct DiscreteMaxwellian {
    std::vector<double> M;

    double m0 = 0.0;  // <M>      (== 1 after normalization)
    double m2 = 0.0;  // <v^2 M>  diffusion coefficient of the limit flux
    double m4 = 0.0;  // <v^4 M>
    // <v (M_{j+1} - M_{j-1})/2> with clamped end ghosts; drift coefficient of
    // the limit flux.  Approaches -m0 as the velocity truncation error vanishes.
    double m1p = 0.0;

    // M extended by the clamped ghost convention M[-1] = M[0], M[nv] = M[nv-1].
    double ghost(int j) const {
        if (j < 0) return M.front();
        if (j >= static_cast<int>(M.size())) return M.back();
        return M[static_cast<std::size_t>(j)];
    }
};

DiscreteMaxwellian build_maxwellian(const PhaseMesh& mesh);

// Midpoint quadrature over the velocity grid: <h> = sum_j h[j] dv.
// values.size() must equal mesh.nv.
double bracket(std::span<const double> values, const PhaseMesh& mesh);

// <v^k M> for k in [0, 8].
double discrete_moment(int k, const DiscreteMaxwellian& maxw, const PhaseMesh& mesh);

}  // namespace vbgk
