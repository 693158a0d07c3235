#pragma once

#include <string>
#include <vector>

#include "fracdn/forward.hpp"
#include "fracdn/grid.hpp"
#include "fracdn/operators.hpp"
#include "fracdn/types.hpp"

namespace fracdn {

// Linear map from sources on Omega to exterior-zero measurements on W:
// column i is the f = 0 data of the unit source at the i-th Omega node,
// G = (A^s)_{W Omega} ((A^s)_{Omega Omega})^{-1}.
struct SourceToData {
    Mat G;  // |idx_w| x |idx_omega|
    double s = 0.5;
    const Regions* regions = nullptr;
    Index n_nodes = 0;
    std::string sigma_tag;  // provenance of the conductivity used
};

SourceToData source_to_data(const SpectralOperator& S, double s, const Regions& regions);

// Injectivity margin of the source-to-data map: smallest singular value
// (discrete unique-continuation witness) plus conditioning diagnostics.
struct UcpProbe {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double condition = 0.0;  // sigma_max / sigma_min
    Vec singular_values;     // descending
};

UcpProbe ucp_probe(const Mat& G);

// Tikhonov-regularized source recovery from f = 0 data:
// F_hat = argmin |G F - data|^2 + alpha |F|^2, by SVD filtering. Returns a
// full-length node field supported on idx_omega. alpha = 0 is allowed only
// when G has full column rank; otherwise a numeric error asks for a
// positive alpha.
Vec recover_source(const SourceToData& map, const Vec& data_on_w, double alpha);

struct GnParams {
    double alpha = 1e-14;       // weight of the |D theta|^2 smoothness penalty
    int max_iter = 60;
    double grad_tol = 1e-14;    // stop when |J' r|_inf falls below this
    double ellipticity = 0.1;   // theta clamped to [log(lam), -log(lam)]
    int armijo_max = 40;
    double armijo_c = 1e-4;
    double stall_rel = 1e-10;   // relative residual drop counted as progress
    int stall_iters = 3;        // consecutive stalled iterations before giving up
};

struct ReconstructionResult {
    Vec theta_hat;   // log-conductivity on idx_omega
    Vec sigma_hat;   // full-length field: exp(theta_hat) on Omega, 1 elsewhere
    Vec f_hat;       // full-length recovered source (zero until step 2 runs)
    std::vector<double> residual_history;  // |r|^2 per accepted iterate
    double reg_weight = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string stage_tag;    // "conductivity" | "source" | "two-step"
    std::string method_note;  // records deviations of the algorithmic route
};

// The Gauss-Newton data model: stacked residual of homogenized DN samples
//   r(theta) = [ Lambda_{exp(theta)} f_k - g_k ]_k  ++  sqrt(alpha) D theta,
// D = first differences of theta across node pairs adjacent within Omega.
// Exposed so the analytic Jacobian can be checked against finite differences.
struct GnModel {
    const Grid* grid = nullptr;
    const Regions* regions = nullptr;
    double s = 0.5;
    const DNDataset* data = nullptr;  // homogenized samples
    double alpha = 1e-14;
    double ellipticity = 0.1;
};

// Conductivity field induced by theta: exp(theta) on Omega, 1 elsewhere.
Vec sigma_from_theta(const Grid& grid, const Regions& regions, const Vec& theta);

Vec gn_residual(const GnModel& model, const Vec& theta);
Mat gn_jacobian(const GnModel& model, const Vec& theta);

// Output least squares for sigma = exp(theta) on Omega from homogenized DN
// samples, by damped Gauss-Newton with Armijo backtracking and box-clamped
// theta. A stalled or failed line search returns the best iterate with
// converged = false.
ReconstructionResult recover_conductivity(const Grid& grid, const Regions& regions,
                                          double s, const DNDataset& data,
                                          const Vec& theta0, const GnParams& params);

// Two-step reconstruction: homogenize the dataset (subtract the f = 0
// sample) and recover sigma, then rebuild the source-to-data map with the
// recovered sigma and invert the f = 0 sample for the source. The dataset
// must contain the f = 0 sample and input/output pairs for conductivity
// fitting.
ReconstructionResult two_step_reconstruct(const Grid& grid, const Regions& regions,
                                          double s, const DNDataset& data,
                                          const GnParams& params, double source_alpha);

// Gauge dichotomy: the source shift F -> F - A phi is invisible to the local
// DN map (exactly, by stencil reach) but moves the nonlocal f = 0 data by at
// least sigma_min(G) |A phi|.
struct GaugeReport {
    double local_max_diff = 0.0;   // max |flux difference| over a boundary basis
    double nonlocal_diff = 0.0;    // |data(F) - data(F - A phi)|_2
    double lower_bound = 0.0;      // sigma_min(G) * |A phi|_2
    double sigma_min = 0.0;
};

GaugeReport gauge_experiment(const Mat& A, const SpectralOperator& S, double s,
                             const Regions& regions, const Vec& F, const Vec& phi);

}  // namespace fracdn
