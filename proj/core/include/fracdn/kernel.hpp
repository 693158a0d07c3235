#pragma once

#include "fracdn/grid.hpp"
#include "fracdn/operators.hpp"
#include "fracdn/types.hpp"

namespace fracdn {

struct KernelQuadInfo {
    double value = 0.0;
    double t_lower = 0.0;       // series/quadrature splice point
    double t_upper = 0.0;       // right cutoff actually reached
    double quad_error = 0.0;    // accumulated panel error estimate
    long evaluations = 0;
};

// Jump-kernel entry between distinct nodes: the time integral of the heat
// semigroup entry against dt/t^{1+s}, normalized by s/Gamma(1-s). Equals the
// negated off-diagonal entry of the fractional operator matrix and is
// nonnegative. The short-time part [0, t0] (t0 = 0.5/lam_max) is summed as an
// exact power series in A — the raw heat entry is a catastrophically
// cancelled sum for far pairs at small t, and the t^{-1-s} weight would blow
// that roundoff up — and the rest is adaptive quadrature on the log-time axis
// extended right until chunks fall below 1e-10 of the total.
double kernel_entry(const SpectralOperator& S, double s, Index i, Index j,
                    double rel_tol = 1e-12);
KernelQuadInfo kernel_entry_info(const SpectralOperator& S, double s, Index i, Index j,
                                 double rel_tol = 1e-12);

// Full symmetric kernel matrix with zero diagonal.
Mat kernel_matrix(const SpectralOperator& S, double s, double rel_tol = 1e-12);

// Bilinear Dirichlet form B(u, w) = u . (A^s w), evaluated via the spectral
// calculus.
double dirichlet_form(const SpectralOperator& S, double s, const Vec& u, const Vec& w);

// The same form evaluated through the kernel:
//   1/2 sum_{i != j} (u_i - u_j)(w_i - w_j) K_ij + sum_i r_i u_i w_i,
// where r = A^s 1 are the row sums (the mass killed by the Dirichlet box
// boundary). Cross-validates the spectral route.
double dirichlet_form_kernel(const Mat& kernel, const Vec& row_sums,
                             const Vec& u, const Vec& w);
double dirichlet_form_kernel(const SpectralOperator& S, double s,
                             const Vec& u, const Vec& w, double rel_tol = 1e-10);

// Least-squares fit of log K against log distance. Pairs are restricted to
// nodes in the inner half of the box (per-axis |x| <= L/2) to exclude pairs
// whose kernel values are dominated by the box truncation, and the fit window
// is the middle third of the observed separations on the log axis.
struct KernelExponentFit {
    double slope = 0.0;
    double target = 0.0;  // -(dim + 2s)
    double rel_err = 0.0;
    long n_pairs = 0;
    double r_lower = 0.0;
    double r_upper = 0.0;
};
KernelExponentFit fit_kernel_exponent(const Grid& grid, const Mat& kernel, double s);

// Same fit without a precomputed kernel matrix: only the pairs inside the
// fit window are run through the quadrature, which keeps 2D grids affordable.
KernelExponentFit fit_kernel_exponent(const Grid& grid, const SpectralOperator& S,
                                      double s, double rel_tol = 1e-8);

}  // namespace fracdn
