#pragma once

#include "fracdn/grid.hpp"
#include "fracdn/operators.hpp"
#include "fracdn/types.hpp"

namespace fracdn {

// Semidiscrete solution of the degenerate extension problem
//   div_{x,y}( y^{1-2s} sigma~ grad_{x,y} u~ ) = 0 on the half-space y > 0,
//   u~(., 0) = u,
// for the discrete operator: u~(., y) = sum_k c_k psi_s(sqrt(lam_k) y) phi_k
// with c = V^T u. Exact in y per eigenmode; no (x, y) meshing.
struct ExtensionSolution {
    const SpectralOperator* op = nullptr;  // non-owning
    double s = 0.5;
    Vec c;  // mode coefficients V^T u
    // Profile evaluator; defaults to the Bessel closed form. Tests may swap
    // in an independent ODE-integrated profile.
    double (*profile)(double s, double z) = nullptr;
};

ExtensionSolution solve_extension(const SpectralOperator& S, double s, const Vec& u);

// u~(., y); y = 0 reproduces u.
Vec evaluate(const ExtensionSolution& ext, double y);

// d/dy u~(., y); singular at y = 0 for s < 1/2, so y > 0 is required.
Vec evaluate_dy(const ExtensionSolution& ext, double y);

// Weighted Neumann trace -lim_{y->0} y^{1-2s} d_y u~, assembled per mode as
// d_s sum_k c_k lam_k^s phi_k with d_s from the quadrature route below.
Vec neumann_trace(const ExtensionSolution& ext);

// The same limit taken numerically: the dimensionless per-mode flux
// T(z) = -z^{1-2s} psi_s'(z) is sampled on the halving ladder z_j = z0 2^{-j}
// and Richardson-extrapolated to z = 0 against the known correction ladder
// z^{2-2s}, z^2, z^{4-2s}, z^4, ...  Returns the extrapolated limit (= d_s).
// Throws a numeric error with the tableau tail when the extrapolation has
// not settled.
double trace_limit_ladder(double s, double z0 = 0.5, int rungs = 8);

// Neumann trace with the y->0 limit taken by the ladder above instead of the
// quadrature constant; the independent third route to A^s (after dividing
// by d_s).
Vec neumann_trace_ladder(const ExtensionSolution& ext, double z0 = 0.5, int rungs = 8);

// Trace constant d_s, computed as the profile moment
//   m_s = int_0^inf z^{1-2s} psi_s(z) dz
// by adaptive quadrature on the log axis. The closed form
// 2^{1-2s} Gamma(1-s)/Gamma(s) is checked against this in tests, never
// substituted for it.
double d_s_constant(double s);

// Mode-wise y-integral v = int_0^inf y^{1-2s} u~(., y) dy, in closed form
// v = m_s sum_k c_k lam_k^{s-1} phi_k. Satisfies A v = d_s A^s u.
Vec reduce_to_local(const ExtensionSolution& ext);

// The same y-integral taken by direct per-mode quadrature of the Bessel
// profile; oracle for the closed form.
Vec reduce_to_local_quadrature(const ExtensionSolution& ext, double rel_tol = 1e-10);

// Diagnostics for the extension's decay in y. Bounds checked in the form
//   sup_x |u~(x,y)|  <=  C y^{-n}        ||u||_1,
//   ||u~(.,y)||_r    <=  C y^{n/p-n}     ||u||_q,
// and the analogous y-derivative bounds with one more power of y, for
// Hoelder exponents 1 + 1/r = 1/p + 1/q. All grid norms carry the h^{n/r}
// volume weight. The report asserts nothing beyond finiteness and the
// monotone decrease of the L2 norm; the ratios and fitted constants are
// observational.
struct DecayReport {
    Vec y;            // ladder heights, increasing
    Vec sup_norm;     // sup_x |u~(x, y_j)|
    Vec r_norm;       // h^{n/r}-weighted r-norm of u~(., y_j)
    Vec l2_norm;      // h^{n/2}-weighted 2-norm (monotonicity witness)
    Vec dy_sup_norm;  // sup_x |d_y u~(x, y_j)|
    Vec dy_r_norm;
    Vec ratio_a;        // sup_norm * y^n / ||u||_1
    Vec ratio_a_deriv;  // dy_sup_norm * y^{n+1} / ||u||_1
    Vec ratio_b;        // r_norm * y^{n - n/p} / ||u||_q
    Vec ratio_b_deriv;  // dy_r_norm * y^{n + 1 - n/p} / ||u||_q
    double fitted_const_a = 0.0;  // max over the ladder of ratio_a
    double fitted_const_a_deriv = 0.0;
    double fitted_const_b = 0.0;
    double fitted_const_b_deriv = 0.0;
    // Exponential rate fitted to log l2_norm on the top quarter of the
    // ladder; the truncated spectrum decays at least like exp(-sqrt(lam_1) y).
    double tail_rate = 0.0;
    bool l2_nonincreasing = false;
    double p = 2.0, q = 2.0, r = 2.0;
};

// Geometric ladder of n heights from lo to hi (inclusive).
Vec make_y_ladder(double lo, double hi, int n);

// Decay diagnostics for u supported in Omega union W (checked against the
// regions; violating the support contract is a data error, a broken Hoelder
// triple a parameter error). Pass std::numeric_limits<double>::infinity()
// for sup-type exponents.
DecayReport check_decay(const ExtensionSolution& ext, const Vec& u,
                        const Grid& grid, const Regions& regions,
                        const Vec& y_ladder, double p, double q, double r);

}  // namespace fracdn
