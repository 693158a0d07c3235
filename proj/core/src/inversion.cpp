#include "fracdn/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "fracdn/errors.hpp"

namespace fracdn {

namespace {

Mat submatrix(const Mat& A, const std::vector<Index>& rows,
              const std::vector<Index>& cols) {
    Mat B(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < cols.size(); ++j) {
            B(static_cast<Index>(i), static_cast<Index>(j)) = A(rows[i], cols[j]);
        }
    }
    return B;
}

Vec gather(const Vec& v, const std::vector<Index>& idx) {
    Vec out(static_cast<Index>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i) out[static_cast<Index>(i)] = v[idx[i]];
    return out;
}

// Pairs of Omega-local indices adjacent along a grid axis; the rows of the
// smoothness penalty D.
std::vector<std::pair<Index, Index>> omega_adjacency(const Grid& grid,
                                                     const Regions& regions) {
    std::vector<Index> local(static_cast<size_t>(grid.N), -1);
    for (size_t i = 0; i < regions.idx_omega.size(); ++i) {
        local[static_cast<size_t>(regions.idx_omega[i])] = static_cast<Index>(i);
    }
    std::vector<std::pair<Index, Index>> pairs;
    for (Index n : regions.idx_omega) {
        const auto ai = grid.axis_indices(n);
        if (ai[0] + 1 < grid.M) {
            const Index m = grid.flat_index(ai[0] + 1, ai[1]);
            if (local[static_cast<size_t>(m)] >= 0) {
                pairs.emplace_back(local[static_cast<size_t>(n)],
                                   local[static_cast<size_t>(m)]);
            }
        }
        if (grid.dim == 2 && ai[1] + 1 < grid.M) {
            const Index m = grid.flat_index(ai[0], ai[1] + 1);
            if (local[static_cast<size_t>(m)] >= 0) {
                pairs.emplace_back(local[static_cast<size_t>(n)],
                                   local[static_cast<size_t>(m)]);
            }
        }
    }
    return pairs;
}

struct GnForward {
    SpectralOperator S;
    Mat Bs;
    Mat X;       // (A^s)_OO^{-1} (A^s)_OW
    Mat lambda;  // homogenized DN matrix, Schur form
};

void check_model(const GnModel& model) {
    if (model.grid == nullptr || model.regions == nullptr || model.data == nullptr) {
        throw ParameterError("gauss-newton: model is missing grid, regions, or data");
    }
    if (model.data->samples.empty()) {
        throw DataError("gauss-newton: dataset has no samples");
    }
    const Index nw = static_cast<Index>(model.regions->idx_w.size());
    for (const DNSample& sample : model.data->samples) {
        if (sample.f.size() != nw || sample.g.size() != nw) {
            throw DataError("gauss-newton: sample length does not match idx_w");
        }
    }
}

GnForward gn_forward(const GnModel& model, const Vec& theta) {
    const Regions& R = *model.regions;
    Vec sigma = sigma_from_theta(*model.grid, R, theta);
    Conductivity cond = make_conductivity(*model.grid, R, sigma, model.ellipticity);
    Mat A = assemble_operator(*model.grid, cond);
    GnForward fwd;
    fwd.S = spectral_decompose(A);
    fwd.Bs = fractional_matrix(fwd.S, model.s);
    Mat Boo = submatrix(fwd.Bs, R.idx_omega, R.idx_omega);
    Mat Bow = submatrix(fwd.Bs, R.idx_omega, R.idx_w);
    Mat Bww = submatrix(fwd.Bs, R.idx_w, R.idx_w);
    Eigen::LDLT<Mat> llt(Boo);
    if (llt.info() != Eigen::Success || !llt.isPositive()) {
        throw NumericError("gauss-newton: Omega block of A^s is not positive definite");
    }
    fwd.X = llt.solve(Bow);
    fwd.lambda = Bww - Bow.transpose() * fwd.X;
    return fwd;
}

// Derivative of the stiffness matrix with respect to theta_j = log sigma at
// Omega node j; nonzero only on the stencil edges incident to that node.
Mat stiffness_derivative(const Grid& grid, const Vec& sigma, Index node) {
    const Index n_nodes = grid.N;
    Mat dA = Mat::Zero(n_nodes, n_nodes);
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    const double sig_n = sigma[node];
    const auto ai = grid.axis_indices(node);

    const auto add_edge = [&](Index m) {
        const double sig_m = sigma[m];
        const double denom = sig_n + sig_m;
        // d/dtheta of the harmonic-mean edge weight 2 sig_n sig_m / denom:
        // sig_n * (2 sig_m^2 / denom^2).
        const double dw = sig_n * 2.0 * sig_m * sig_m / (denom * denom) * inv_h2;
        dA(node, node) += dw;
        dA(m, m) += dw;
        dA(node, m) -= dw;
        dA(m, node) -= dw;
    };
    const auto add_ghost = [&]() {
        // Mirror ghost: edge weight sig_n / h^2, derivative sig_n / h^2.
        dA(node, node) += sig_n * inv_h2;
    };

    if (ai[0] > 0) add_edge(grid.flat_index(ai[0] - 1, ai[1])); else add_ghost();
    if (ai[0] + 1 < grid.M) add_edge(grid.flat_index(ai[0] + 1, ai[1])); else add_ghost();
    if (grid.dim == 2) {
        if (ai[1] > 0) add_edge(grid.flat_index(ai[0], ai[1] - 1)); else add_ghost();
        if (ai[1] + 1 < grid.M) add_edge(grid.flat_index(ai[0], ai[1] + 1)); else add_ghost();
    }
    return dA;
}

Vec clamp_theta(Vec theta, double ellipticity) {
    const double hi = -std::log(ellipticity);
    for (Index i = 0; i < theta.size(); ++i) theta[i] = std::clamp(theta[i], -hi, hi);
    return theta;
}

}  // namespace

SourceToData source_to_data(const SpectralOperator& S, double s, const Regions& regions) {
    Mat Bs = fractional_matrix(S, s);
    Mat Boo = submatrix(Bs, regions.idx_omega, regions.idx_omega);
    Mat Bow = submatrix(Bs, regions.idx_omega, regions.idx_w);
    Eigen::LDLT<Mat> llt(Boo);
    if (llt.info() != Eigen::Success || !llt.isPositive()) {
        throw NumericError("source_to_data: Omega block of A^s is not positive definite");
    }
    SourceToData map;
    map.G = llt.solve(Bow).transpose();
    map.s = s;
    map.regions = &regions;
    map.n_nodes = S.lam.size();
    return map;
}

UcpProbe ucp_probe(const Mat& G) {
    Eigen::JacobiSVD<Mat> svd(G);
    UcpProbe probe;
    probe.singular_values = svd.singularValues();
    probe.sigma_max = probe.singular_values[0];
    probe.sigma_min = probe.singular_values[probe.singular_values.size() - 1];
    probe.condition = probe.sigma_min > 0.0
                          ? probe.sigma_max / probe.sigma_min
                          : std::numeric_limits<double>::infinity();
    return probe;
}

Vec recover_source(const SourceToData& map, const Vec& data_on_w, double alpha) {
    if (alpha < 0.0) {
        throw ParameterError("recover_source: regularization weight must be non-negative");
    }
    if (map.regions == nullptr || map.n_nodes <= 0) {
        throw ParameterError("recover_source: map is not initialized");
    }
    if (data_on_w.size() != map.G.rows()) {
        throw DataError("recover_source: data length does not match idx_w");
    }
    Eigen::JacobiSVD<Mat> svd(map.G, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = svd.singularValues();
    if (alpha == 0.0 && !(sv[sv.size() - 1] > 1e-12 * sv[0])) {
        throw NumericError(
            "recover_source: G is rank-deficient at alpha = 0; pass a positive alpha");
    }
    Vec coeff = svd.matrixU().transpose() * data_on_w;
    for (Index i = 0; i < sv.size(); ++i) {
        const double s_i = sv[i];
        coeff[i] *= alpha > 0.0 ? s_i / (s_i * s_i + alpha) : 1.0 / s_i;
    }
    Vec f_omega = svd.matrixV() * coeff;
    Vec f_hat = Vec::Zero(map.n_nodes);
    const std::vector<Index>& omega = map.regions->idx_omega;
    for (size_t i = 0; i < omega.size(); ++i) f_hat[omega[i]] = f_omega[static_cast<Index>(i)];
    return f_hat;
}

Vec sigma_from_theta(const Grid& grid, const Regions& regions, const Vec& theta) {
    if (theta.size() != static_cast<Index>(regions.idx_omega.size())) {
        throw ParameterError("sigma_from_theta: theta length does not match idx_omega");
    }
    Vec sigma = Vec::Ones(grid.N);
    for (size_t i = 0; i < regions.idx_omega.size(); ++i) {
        sigma[regions.idx_omega[i]] = std::exp(theta[static_cast<Index>(i)]);
    }
    return sigma;
}

Vec gn_residual(const GnModel& model, const Vec& theta) {
    check_model(model);
    GnForward fwd = gn_forward(model, theta);
    const auto pairs = omega_adjacency(*model.grid, *model.regions);
    const Index nw = static_cast<Index>(model.regions->idx_w.size());
    const Index n_samples = static_cast<Index>(model.data->samples.size());
    Vec r(n_samples * nw + static_cast<Index>(pairs.size()));
    for (Index k = 0; k < n_samples; ++k) {
        const DNSample& sample = model.data->samples[static_cast<size_t>(k)];
        r.segment(k * nw, nw) = fwd.lambda * sample.f - sample.g;
    }
    const double root_alpha = std::sqrt(model.alpha);
    for (size_t e = 0; e < pairs.size(); ++e) {
        r[n_samples * nw + static_cast<Index>(e)] =
            root_alpha * (theta[pairs[e].first] - theta[pairs[e].second]);
    }
    return r;
}

Mat gn_jacobian(const GnModel& model, const Vec& theta) {
    check_model(model);
    const Regions& R = *model.regions;
    GnForward fwd = gn_forward(model, theta);
    Vec sigma = sigma_from_theta(*model.grid, R, theta);
    const auto pairs = omega_adjacency(*model.grid, R);
    const Index nw = static_cast<Index>(R.idx_w.size());
    const Index n_samples = static_cast<Index>(model.data->samples.size());
    const Index p = theta.size();
    Mat J = Mat::Zero(n_samples * nw + static_cast<Index>(pairs.size()), p);

    for (Index j = 0; j < p; ++j) {
        Mat dA = stiffness_derivative(*model.grid, sigma, R.idx_omega[static_cast<size_t>(j)]);
        Mat dBs = frechet_fractional(fwd.S, model.s, dA);
        Mat dBoo = submatrix(dBs, R.idx_omega, R.idx_omega);
        Mat dBow = submatrix(dBs, R.idx_omega, R.idx_w);
        Mat dBww = submatrix(dBs, R.idx_w, R.idx_w);
        // d Lambda = dB_WW - dB_WO X - X' dB_OW + X' dB_OO X, from
        // differentiating the Schur complement.
        Mat dLambda = dBww - dBow.transpose() * fwd.X - fwd.X.transpose() * dBow +
                      fwd.X.transpose() * dBoo * fwd.X;
        for (Index k = 0; k < n_samples; ++k) {
            const DNSample& sample = model.data->samples[static_cast<size_t>(k)];
            J.block(k * nw, j, nw, 1) = dLambda * sample.f;
        }
    }
    const double root_alpha = std::sqrt(model.alpha);
    for (size_t e = 0; e < pairs.size(); ++e) {
        J(n_samples * nw + static_cast<Index>(e), pairs[e].first) += root_alpha;
        J(n_samples * nw + static_cast<Index>(e), pairs[e].second) -= root_alpha;
    }
    return J;
}

ReconstructionResult recover_conductivity(const Grid& grid, const Regions& regions,
                                          double s, const DNDataset& data,
                                          const Vec& theta0, const GnParams& params) {
    GnModel model;
    model.grid = &grid;
    model.regions = &regions;
    model.s = s;
    model.data = &data;
    model.alpha = params.alpha;
    model.ellipticity = params.ellipticity;

    ReconstructionResult result;
    result.stage_tag = "conductivity";
    result.method_note =
        "sigma fitted by output least squares on the homogenized nonlocal data "
        "(no local Calderon reduction step)";
    result.reg_weight = params.alpha;

    Vec theta = clamp_theta(theta0, params.ellipticity);
    Vec r = gn_residual(model, theta);
    double ssr = r.squaredNorm();
    result.residual_history.push_back(ssr);

    int stall_count = 0;
    for (int iter = 0; iter < params.max_iter; ++iter) {
        if (ssr <= 1e-30) {
            result.converged = true;
            break;
        }
        Mat J = gn_jacobian(model, theta);
        Vec grad = J.transpose() * r;
        if (grad.lpNorm<Eigen::Infinity>() <= params.grad_tol) {
            result.converged = true;
            break;
        }
        Vec delta = J.colPivHouseholderQr().solve(-r);
        const double slope = 2.0 * grad.dot(delta);
        if (!delta.allFinite() || slope >= 0.0) {
            result.converged = false;
            break;
        }
        double t = 1.0;
        bool accepted = false;
        Vec theta_c;
        Vec r_c;
        double ssr_c = 0.0;
        for (int a = 0; a < params.armijo_max; ++a) {
            theta_c = clamp_theta(theta + t * delta, params.ellipticity);
            r_c = gn_residual(model, theta_c);
            ssr_c = r_c.squaredNorm();
            if (ssr_c <= ssr + params.armijo_c * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            result.converged = false;
            break;
        }
        const double rel_drop = (ssr - ssr_c) / std::max(ssr, 1e-300);
        theta = theta_c;
        r = r_c;
        ssr = ssr_c;
        result.residual_history.push_back(ssr);
        ++result.iterations;
        if (rel_drop < params.stall_rel) {
            if (++stall_count >= params.stall_iters) {
                result.converged = false;
                break;
            }
        } else {
            stall_count = 0;
        }
        if (ssr <= 1e-30) {
            result.converged = true;
            break;
        }
    }

    result.theta_hat = theta;
    result.sigma_hat = sigma_from_theta(grid, regions, theta);
    result.f_hat = Vec::Zero(grid.N);
    return result;
}

ReconstructionResult two_step_reconstruct(const Grid& grid, const Regions& regions,
                                          double s, const DNDataset& data,
                                          const GnParams& params, double source_alpha) {
    // Locate the f = 0 measurement (the source fingerprint) and homogenize
    // the rest against it.
    const DNSample* zero_sample = nullptr;
    for (const DNSample& sample : data.samples) {
        if (sample.f.size() > 0 && sample.f.lpNorm<Eigen::Infinity>() == 0.0) {
            zero_sample = &sample;
            break;
        }
    }
    if (zero_sample == nullptr) {
        throw DataError("two_step_reconstruct: dataset lacks the f = 0 sample");
    }
    DNDataset homogenized;
    homogenized.geometry_tag = data.geometry_tag;
    homogenized.provenance = data.provenance;
    homogenized.noise_level = data.noise_level;
    for (const DNSample& sample : data.samples) {
        if (&sample == zero_sample) continue;
        DNSample h = sample;
        h.g -= zero_sample->g;
        h.tag = "homogenized";
        homogenized.samples.push_back(std::move(h));
    }
    if (homogenized.samples.empty()) {
        throw DataError("two_step_reconstruct: dataset has no nonzero inputs");
    }

    Vec theta0 = Vec::Zero(static_cast<Index>(regions.idx_omega.size()));
    ReconstructionResult result =
        recover_conductivity(grid, regions, s, homogenized, theta0, params);

    Conductivity cond = make_conductivity(grid, regions, result.sigma_hat,
                                          params.ellipticity);
    Mat A = assemble_operator(grid, cond);
    SpectralOperator S = spectral_decompose(A);
    SourceToData map = source_to_data(S, s, regions);
    map.sigma_tag = "recovered";
    result.f_hat = recover_source(map, zero_sample->g, source_alpha);
    result.stage_tag = "two-step";
    result.method_note += "; source recovered from the f = 0 data with the fitted sigma";
    return result;
}

GaugeReport gauge_experiment(const Mat& A, const SpectralOperator& S, double s,
                             const Regions& regions, const Vec& F, const Vec& phi) {
    Vec F2 = gauge_source(A, regions, F, phi);

    GaugeReport report;
    // (a) Local DN maps over the boundary-input basis: the gauge shift adds
    // exactly A phi to the source, which the Omega-restricted flux never sees.
    const Index nb = static_cast<Index>(regions.idx_omega_bdry.size());
    for (Index b = 0; b < nb; ++b) {
        Vec g = Vec::Zero(nb);
        g[b] = 1.0;
        DNSample d1 = local_dn(A, regions, F, g);
        DNSample d2 = local_dn(A, regions, F2, g);
        report.local_max_diff = std::max(
            report.local_max_diff, (d1.g - d2.g).lpNorm<Eigen::Infinity>());
    }

    // (b) Nonlocal f = 0 data of the two sources.
    ExteriorOperator E = make_exterior_operator(S, s, regions);
    Vec zero = Vec::Zero(A.rows());
    DNSample n1 = nonlocal_dn(E, F, zero);
    DNSample n2 = nonlocal_dn(E, F2, zero);
    report.nonlocal_diff = (n1.g - n2.g).norm();

    // (c) Injectivity lower bound sigma_min(G) |A phi|.
    SourceToData map = source_to_data(S, s, regions);
    UcpProbe probe = ucp_probe(map.G);
    report.sigma_min = probe.sigma_min;
    report.lower_bound = probe.sigma_min * gather(A * phi, regions.idx_omega).norm();
    return report;
}

}  // namespace fracdn
