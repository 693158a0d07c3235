#include "fracdn/forward.hpp"

#include <cmath>
#include <vector>

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

void scatter_into(Vec& v, const std::vector<Index>& idx, const Vec& values) {
    for (size_t i = 0; i < idx.size(); ++i) v[idx[i]] = values[static_cast<Index>(i)];
}

void check_support(const Vec& field, const std::vector<Index>& allowed_idx,
                   Index n_nodes, const char* what) {
    std::vector<char> allowed(static_cast<size_t>(n_nodes), 0);
    for (Index i : allowed_idx) allowed[static_cast<size_t>(i)] = 1;
    for (Index i = 0; i < n_nodes; ++i) {
        if (field[i] != 0.0 && !allowed[static_cast<size_t>(i)]) {
            throw DataError(std::string(what) + ": field has support outside its region");
        }
    }
}

void check_lengths(const ExteriorOperator& E, const Vec& F, const Vec& f) {
    if (E.op == nullptr || E.regions == nullptr) {
        throw ParameterError("exterior solve: operator context not initialized");
    }
    const Index n = E.op->lam.size();
    if (F.size() != n || f.size() != n) {
        throw ParameterError("exterior solve: field length does not match the operator");
    }
}

}  // namespace

ExteriorOperator make_exterior_operator(const SpectralOperator& S, double s,
                                        const Regions& regions) {
    ExteriorOperator E;
    E.op = &S;
    E.regions = &regions;
    E.s = s;
    E.Bs = fractional_matrix(S, s);
    Mat Boo = submatrix(E.Bs, regions.idx_omega, regions.idx_omega);
    E.omega_llt.compute(Boo);
    if (E.omega_llt.info() != Eigen::Success || !E.omega_llt.isPositive()) {
        throw NumericError("exterior solve: the Omega block of A^s is not positive definite");
    }
    return E;
}

Vec solve_exterior(const ExteriorOperator& E, const Vec& F, const Vec& f) {
    check_lengths(E, F, f);
    const Regions& R = *E.regions;
    const Index n = E.op->lam.size();
    check_support(F, R.idx_omega, n, "solve_exterior: source");
    check_support(f, R.idx_ext, n, "solve_exterior: exterior data");

    // u = f off Omega; on Omega solve (A^s)_OO u_O = F_O - (A^s u_ext)_O.
    Vec u = f;
    Vec rhs = gather(F - E.Bs * f, R.idx_omega);
    Vec u_omega = E.omega_llt.solve(rhs);
    if (!u_omega.allFinite()) {
        throw NumericError("solve_exterior: interior solve produced non-finite values");
    }
    scatter_into(u, R.idx_omega, u_omega);
    return u;
}

Vec solve_exterior(const SpectralOperator& S, double s, const Regions& regions,
                   const Vec& F, const Vec& f) {
    return solve_exterior(make_exterior_operator(S, s, regions), F, f);
}

DNSample nonlocal_dn(const ExteriorOperator& E, const Vec& F, const Vec& f) {
    check_lengths(E, F, f);
    check_support(f, E.regions->idx_w, E.op->lam.size(), "nonlocal_dn: input");
    Vec u = solve_exterior(E, F, f);
    DNSample sample;
    sample.f = gather(f, E.regions->idx_w);
    sample.g = gather(E.Bs * u, E.regions->idx_w);
    sample.s = E.s;
    sample.tag = "nonlocal";
    return sample;
}

DNSample homogenized_dn(const ExteriorOperator& E, const Vec& F, const Vec& f) {
    DNSample with_input = nonlocal_dn(E, F, f);
    DNSample at_zero = nonlocal_dn(E, F, Vec::Zero(f.size()));
    with_input.g -= at_zero.g;
    with_input.tag = "homogenized";
    return with_input;
}

Mat homogenized_dn_matrix(const ExteriorOperator& E, const Vec& F) {
    const std::vector<Index>& w = E.regions->idx_w;
    const Index nw = static_cast<Index>(w.size());
    const Index n = E.op->lam.size();
    DNSample at_zero = nonlocal_dn(E, F, Vec::Zero(n));
    Mat G(nw, nw);
    Vec f = Vec::Zero(n);
    for (Index j = 0; j < nw; ++j) {
        f[w[static_cast<size_t>(j)]] = 1.0;
        DNSample col = nonlocal_dn(E, F, f);
        G.col(j) = col.g - at_zero.g;
        f[w[static_cast<size_t>(j)]] = 0.0;
    }
    return G;
}

Vec solve_local(const Mat& A, const Regions& regions, const Vec& F, const Vec& g) {
    const Index n = A.rows();
    if (F.size() != n) {
        throw ParameterError("solve_local: source length does not match the operator");
    }
    if (g.size() != static_cast<Index>(regions.idx_omega_bdry.size())) {
        throw ParameterError("solve_local: boundary data length does not match the boundary layer");
    }
    Vec v = Vec::Zero(n);
    scatter_into(v, regions.idx_omega_bdry, g);
    if (regions.idx_omega_int.empty()) return v;

    Mat Aii = submatrix(A, regions.idx_omega_int, regions.idx_omega_int);
    Mat Aib = submatrix(A, regions.idx_omega_int, regions.idx_omega_bdry);
    Vec rhs = gather(F, regions.idx_omega_int) - Aib * g;
    Eigen::LDLT<Mat> llt(Aii);
    if (llt.info() != Eigen::Success || !llt.isPositive()) {
        throw NumericError("solve_local: interior stiffness block is not positive definite");
    }
    Vec vi = llt.solve(rhs);
    if (!vi.allFinite()) {
        throw NumericError("solve_local: interior solve produced non-finite values");
    }
    scatter_into(v, regions.idx_omega_int, vi);
    return v;
}

DNSample local_dn(const Mat& A, const Regions& regions, const Vec& F, const Vec& g) {
    Vec v = solve_local(A, regions, F, g);
    // Conormal flux through the stiffness stencil: row i of A_Omega applied
    // to v|_Omega at each boundary-layer node. Exterior couplings of A are
    // excluded so the flux belongs to the Omega-restricted operator.
    const std::vector<Index>& bdry = regions.idx_omega_bdry;
    Mat A_bo = submatrix(A, bdry, regions.idx_omega);
    Vec v_omega = gather(v, regions.idx_omega);
    DNSample sample;
    sample.f = g;
    sample.g = A_bo * v_omega;
    sample.s = 1.0;
    sample.tag = "local";
    return sample;
}

Vec gauge_source(const Mat& A, const Regions& regions, const Vec& F, const Vec& phi) {
    const Index n = A.rows();
    if (F.size() != n || phi.size() != n) {
        throw ParameterError("gauge_source: field length does not match the operator");
    }
    check_support(phi, regions.idx_gauge_support, n, "gauge_source: gauge field");
    return F - A * phi;
}

Vec random_gauge_field(const Regions& regions, Index n_nodes, Rng& rng) {
    if (regions.idx_gauge_support.empty()) {
        throw GeometryError(
            "random_gauge_field: Omega has no nodes two layers deep; widen the box");
    }
    Vec phi = Vec::Zero(n_nodes);
    for (Index i : regions.idx_gauge_support) phi[i] = rng.gaussian();
    const double peak = phi.lpNorm<Eigen::Infinity>();
    if (peak > 0.0) phi /= peak;
    return phi;
}

void add_noise(DNDataset& data, double level, Rng& rng) {
    if (level < 0.0) throw ParameterError("add_noise: noise level must be non-negative");
    data.noise_level = level;
    if (level == 0.0) return;
    for (DNSample& sample : data.samples) {
        const Index m = sample.g.size();
        if (m == 0) continue;
        const double rms = sample.g.norm() / std::sqrt(static_cast<double>(m));
        for (Index i = 0; i < m; ++i) sample.g[i] += level * rms * rng.gaussian();
    }
}

}  // namespace fracdn
