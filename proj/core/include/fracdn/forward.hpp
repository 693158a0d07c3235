#pragma once

#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "fracdn/grid.hpp"
#include "fracdn/operators.hpp"
#include "fracdn/rng.hpp"
#include "fracdn/types.hpp"

namespace fracdn {

// One input/output pair of a DN map. For the nonlocal and homogenized tags,
// f and g hold values on idx_w; for the local tag, on idx_omega_bdry.
struct DNSample {
    Vec f;
    Vec g;
    double s = 0.5;
    std::string tag;  // "nonlocal" | "local" | "homogenized"
};

struct DNDataset {
    std::vector<DNSample> samples;
    std::string geometry_tag;
    std::string provenance;    // how sigma and the source were produced
    double noise_level = 0.0;  // additive Gaussian level applied to outputs
};

// Dense fractional stiffness A^s with its Omega-block factorization, shared
// across the many solves of a DN-map assembly. The Omega block is a
// principal submatrix of an SPD matrix, hence SPD.
struct ExteriorOperator {
    const SpectralOperator* op = nullptr;
    const Regions* regions = nullptr;
    double s = 0.5;
    Mat Bs;                       // dense A^s
    Eigen::LDLT<Mat> omega_llt;   // factorization of (A^s)_{Omega,Omega}
};

ExteriorOperator make_exterior_operator(const SpectralOperator& S, double s,
                                        const Regions& regions);

// Solve the exterior-value problem: (A^s u)|_Omega = F|_Omega, u = f on the
// exterior. F must vanish outside Omega and f outside the exterior; both are
// full-length node fields, as is the returned u.
Vec solve_exterior(const ExteriorOperator& E, const Vec& F, const Vec& f);
Vec solve_exterior(const SpectralOperator& S, double s, const Regions& regions,
                   const Vec& F, const Vec& f);

// Partial nonlocal DN sample: f (full field, supported on idx_w) maps to
// g = (A^s u_f) restricted to idx_w.
DNSample nonlocal_dn(const ExteriorOperator& E, const Vec& F, const Vec& f);

// Source-homogenized sample Lambda(f) - Lambda(0), computed literally as the
// difference of two nonlocal solves; equals the F = 0 map by linearity.
DNSample homogenized_dn(const ExteriorOperator& E, const Vec& F, const Vec& f);

// |W| x |W| homogenized DN matrix, assembled column by column from indicator
// inputs on idx_w (so symmetry can be checked directly on the assembly).
Mat homogenized_dn_matrix(const ExteriorOperator& E, const Vec& F);

// Local Dirichlet problem on Omega: (A_Omega v)|_interior = F|_interior with
// v = g on the boundary layer (g indexed like idx_omega_bdry) and v = 0
// outside Omega. Returns the full-length field.
Vec solve_local(const Mat& A, const Regions& regions, const Vec& F, const Vec& g);

// Local DN sample: the discrete conormal flux (A_Omega v)|_boundary-layer,
// defined through the stiffness stencil so the discrete Green identity
//   sum_bdry flux * g = v' A_Omega v - sum_int F v
// holds exactly.
DNSample local_dn(const Mat& A, const Regions& regions, const Vec& F, const Vec& g);

// Gauge-transformed source F - A phi for phi vanishing on the two outermost
// node layers of Omega (phi supported on idx_gauge_support); the transform
// never reaches the boundary flux of the local problem.
Vec gauge_source(const Mat& A, const Regions& regions, const Vec& F, const Vec& phi);

// Random field supported on the admissible gauge layer, unit sup-norm.
// Throws a geometry error when the layer is empty (Omega too thin).
Vec random_gauge_field(const Regions& regions, Index n_nodes, Rng& rng);

// Additive Gaussian noise scaled to level * rms(g), applied to the outputs
// of every sample in the dataset.
void add_noise(DNDataset& data, double level, Rng& rng);

}  // namespace fracdn
