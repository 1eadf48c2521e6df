#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vbgk/kinetic.hpp"
#include "vbgk/mesh.hpp"

namespace vbgk {

enum class Regime : std::uint8_t { Kinetic = 0, Fluid = 1 };

// Per-cell regime labels plus the coupling thresholds they were decided with.
// Invariant maintained by update_domain: every maximal run of Fluid cells is
// at least two cells wide (a one-cell fluid island cannot carry the interface
// ghost logic).  Thresholds equal to 0 effectively disable the corresponding
// Kinetic -> Fluid move, since the indicators of a live kinetic region never
// reach exactly zero.
struct DomainDecomposition {
    std::vector<Regime> labels;
    double eta0 = 0.0;    // threshold on the macroscopic remainder |R_i|
    double delta0 = 0.0;  // threshold on the perturbation indicator
};

// All-Kinetic decomposition, the mandated initial state of a hybrid run.
DomainDecomposition make_initial_decomposition(int nx, double eta0, double delta0);

int count_kinetic(const DomainDecomposition& dec);

// Compact run-length encoding of the labels, e.g. "32K4F64K".
std::string rle_labels(const DomainDecomposition& dec);

// A dual interface carries live g data iff at least one adjacent cell is
// Kinetic; everywhere else g is treated as 0.
bool interface_maintained(const DomainDecomposition& dec, int d);

// Central finite-difference coefficients on the 7-point stencil (offsets
// -3..3) for derivative orders 1..4.  The rows are exact for polynomials up
// to degree 6 (odd orders) / 7 (even orders); the coefficient-sum identities
// sum_k c_k k^m / m! in {0, 1} are pinned by tests in exact rational
// arithmetic.  Note the order-3 row is used exactly as tabulated: despite its
// inverted-looking inner coefficients it approximates +d3/dx3 (its k=+-2
// entries dominate the sign), which the polynomial oracle in the test suite
// confirms.
struct StencilTable {
    static constexpr std::array<std::array<double, 7>, 4> rows = {{
        {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60},
        {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90},
        {1.0 / 8, -1.0, 13.0 / 8, 0.0, -13.0 / 8, 1.0, -1.0 / 8},
        {-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6},
    }};
};

// d^order/dx^order of a periodic sequence at index i.
// Requires order in {1,2,3,4} and at least 8 samples.
double fd_derivative(std::span<const double> values, int order, int i, double dx);

// Electric field and its first three derivatives sampled at primal cell
// centers, closed-form (the field is prescribed data, so differentiating it
// numerically would only add truncation noise to the indicator).
// zero_field marks an identically vanishing field; the remainder then skips
// the field terms, which are exactly zero anyway (make_field_derivs sets it
// after sampling, manual aggregates default to the generic path).
struct FieldDerivs {
    std::vector<double> E, dE, d2E, d3E;
    bool zero_field = false;
};

// Chapman-Enskog remainder of the second-order expansion,
//   R_i = -eps_i^2 ( -rho'''' + E (2 rho''' - E rho'')
//                    + E' (-3 rho E' - 5 E rho' + 6 rho'')
//                    + E'' (-3 rho E + 5 rho') + rho E''' ),
// with rho-derivatives from fd_derivative and E-derivatives analytic.
// rho is the mixed per-cell density of the hybrid state (there is only one
// stored density array, so stencils read across regime boundaries
// transparently).
std::vector<double> compute_remainder(std::span<const double> rho,
                                      const FieldDerivs& field,
                                      std::span<const double> eps_primal,
                                      const PhaseMesh& mesh);

// Perturbation indicator at one interface: sum_j g_j^2 M_j^-1 dv.
// This is the printed coupling criterion (a squared quantity, no root);
// the diagnostics module carries the true norms.
double g_norm(std::span<const double> g_column, const DiscreteMaxwellian& maxw,
              const PhaseMesh& mesh);

// One domain update from time-n indicators:
//   Fluid cell   -> stays Fluid iff |R_i| <= eta0,
//   Kinetic cell -> becomes Fluid iff g_norm on both adjacent interfaces
//                   <= delta0 and |R_i| <= eta0,
// followed by a circular repair pass demoting every one-cell Fluid run back
// to Kinetic.
DomainDecomposition update_domain(const DomainDecomposition& dec,
                                  std::span<const double> R,
                                  std::span<const double> g_norms);

// Field data consumed by one hybrid step: the scheme fields on the dual mesh
// plus the indicator fields on the primal mesh.
struct HybridFields {
    FieldConfig scheme;               // E_dual, eps_dual, dt
    FieldDerivs E_primal;             // analytic field derivatives at x_center
    std::vector<double> eps_primal;   // eps at x_center (same profile as eps_dual)
};

struct HybridStepResult {
    bool changed;    // did the decomposition move this step?
    double delta_m;  // recorded mass variation  sum_i dx (rho^{n+1}-rho^n) / dt
};

// Scratch buffers reused across hybrid steps (sized on first use).  Once the
// domain is fully fluidized a step must cost O(nx), so everything per-step
// lives here rather than on the heap.
struct HybridWorkspace {
    std::vector<double> zeros;        // one all-zero g row for masked reads
    std::vector<double> bracket_s;    // projection bracket per position-flux row
    std::vector<double> flux;         // position flux rows
    std::vector<double> g_scratch;    // g^{n+1} rows for maintained interfaces
    std::vector<double> rho_next;
    std::vector<double> jk;           // kinetic flux per maintained dual
    std::vector<double> jf;           // limit flux per dual adjacent to a Fluid cell
    std::vector<double> remainder;
    std::vector<double> g_norms;      // lazily filled; +inf where not evaluated
    std::vector<std::uint8_t> need_flux_row;
    std::vector<std::uint8_t> maintained;
    std::vector<Regime> labels_raw;   // domain update before singleton repair
    std::vector<Regime> labels_next;  // domain update after singleton repair
};

// Advances the hybrid scheme by one step (Algorithm: evolve with the current
// decomposition, then refresh the decomposition from time-n indicators).
// dec is updated in place; the result only reports whether it moved.
//
//  - g^{n+1} is computed on every maintained interface; any g value the
//    transport stencil needs from inside the Fluid region reads as 0 without
//    being written to storage.
//  - rho^{n+1} uses J^{K,n+1} differences in Kinetic cells and J^{F,n}
//    differences in Fluid cells, on the single merged density array.
//  - Interfaces whose maintained status changes get their stored g row zeroed,
//    so freshly promoted kinetic regions start from g = 0 and retired ones do
//    not leak stale data into diagnostics.
//  - With update_indicators = false the decomposition is left unchanged
//    (frozen-domain runs and indicator cadences > 1).
HybridStepResult hybrid_step(KineticState& state, DomainDecomposition& dec,
                             const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
                             const HybridFields& fields, HybridWorkspace& ws,
                             bool update_indicators = true);

// Closed-form mass variation of the steady two-subdomain configuration
// (exactly one Kinetic run and one Fluid run).  Per kinetic/fluid interface
// alpha with orientation beta = +1 when the Kinetic side is on the left:
//   beta * [ -<v g^n_alpha> e^{-dt/eps^2}/eps
//            + (1 - e^{-dt/eps^2})/(dx dv) <v Q^n_alpha>
//            - e^{-dt/eps^2} J^{eps,F,n}_alpha
//            + (J^{eps,F,n}_alpha - J^{F,n}_alpha) ],
// where Q is evaluated with the same fluid-side ghost masking as the stepper
// and J^{eps,F} is the limit flux on the kinetic density.  In the merged
// density array of this implementation the kinetic and fluid densities
// coincide, so the final bracket vanishes identically and the third term
// carries J^F.  Summing both interfaces of the periodic split reproduces the
// directly summed mass variation of hybrid_step to round-off.
//
// Throws std::invalid_argument unless the decomposition is a two-run split.
double mass_variation_formula(const KineticState& state, const DomainDecomposition& dec,
                              const PhaseMesh& mesh, const DiscreteMaxwellian& maxw,
                              const FieldConfig& fields);

}  // namespace vbgk
