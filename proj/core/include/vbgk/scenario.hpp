#pragma once

#include <functional>
#include <vector>

#include "vbgk/hybrid.hpp"
#include "vbgk/kinetic.hpp"
#include "vbgk/mesh.hpp"

namespace vbgk {

/// Analytic description of a benchmark scenario: phase-space initial datum,
/// electric field with the derivatives the coupling indicator needs, and the
/// potential V (E = -V') defining the global equilibrium.
struct InitialData {
    int case_id = 0;
    std::function<double(double, double)> f0;  ///< f0(x, v)
    std::function<double(double)> E;
    std::function<double(double)> dE;
    std::function<double(double)> d2E;
    std::function<double(double)> d3E;
    std::function<double(double)> V;
};

/// Cases 1 and 2 start at a local equilibrium in velocity, cases 3 and 4 far
/// from it (v^4 profile); cases 2 and 4 switch on E = cos(2x)/2.
InitialData make_initial_data(int case_id, const PhaseMesh& mesh);

/// Micro-macro initial state: rho^0 from the velocity bracket of f0 at primal
/// centers; g^0 on dual points as f0 minus its own local projection, so every
/// g column is mean-free to round-off.
KineticState make_initial_state(const InitialData& data, const PhaseMesh& mesh,
                                const DiscreteMaxwellian& maxw);

enum class EpsKind { Constant, ArctanBump };

/// Knudsen profile at dual points.  Constant fills eps_value; ArctanBump is
/// the fixed two-shoulder profile e(x)/max(e) with
/// e(x) = (arctan(5+10(x-pi/2)) + arctan(5-10(x-pi/2)))/2, normalized by the
/// discrete maximum over the dual samples (eps_value is ignored).
std::vector<double> make_eps_profile(EpsKind kind, double eps_value, const PhaseMesh& mesh);

/// Same profile sampled at primal centers.  ArctanBump keeps the dual-sample
/// normalizer so both grids discretize one and the same function.
std::vector<double> make_eps_profile_primal(EpsKind kind, double eps_value, const PhaseMesh& mesh);

std::vector<double> sample_dual(const std::function<double(double)>& fn, const PhaseMesh& mesh);
std::vector<double> sample_primal(const std::function<double(double)>& fn, const PhaseMesh& mesh);

/// E and its first three derivatives at primal centers, as consumed by the
/// coupling remainder.
FieldDerivs make_field_derivs(const InitialData& data, const PhaseMesh& mesh);

}  // namespace vbgk
