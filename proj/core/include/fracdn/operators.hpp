#pragma once

#include "fracdn/grid.hpp"
#include "fracdn/types.hpp"

namespace fracdn {

// Conductivity field with its ellipticity constant: lam <= sigma <= 1/lam
// everywhere, and sigma == 1 outside Omega (the exterior is homogeneous).
struct Conductivity {
    Vec sigma;
    double ellipticity = 0.1;
};

Conductivity make_conductivity(const Grid& grid, const Regions& regions,
                               const Vec& sigma, double ellipticity);

// Dense symmetric stiffness matrix of the conservative five/three-point
// stencil: edge weight between adjacent nodes = harmonic mean of sigma at the
// two nodes over h^2; homogeneous Dirichlet on the box boundary with the
// ghost-node coefficient mirroring the interior value.
Mat assemble_operator(const Grid& grid, const Conductivity& cond);

struct SpectralOperator {
    Vec lam;  // ascending, all positive
    Mat V;    // orthonormal columns
};

SpectralOperator spectral_decompose(const Mat& A);

// V diag(lam^s) V^T u for s in (0, 1].
Vec fractional_apply(const SpectralOperator& S, double s, const Vec& u);
Mat fractional_matrix(const SpectralOperator& S, double s);

// V diag(exp(-lam t)) V^T u for t >= 0.
Vec heat_apply(const SpectralOperator& S, double t, const Vec& u);
Mat heat_matrix(const SpectralOperator& S, double t);

// Directional derivative of A -> A^s at A in the symmetric direction dA:
// V (Phi o (V^T dA V)) V^T with the divided-difference table
// Phi_kl = (lam_k^s - lam_l^s)/(lam_k - lam_l), diagonal s lam^{s-1}.
Mat frechet_fractional(const SpectralOperator& S, double s, const Mat& dA);

}  // namespace fracdn
