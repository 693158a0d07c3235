#include "fracdn/operators.hpp"

#include <cmath>
#include <string>

#include "fracdn/errors.hpp"

namespace fracdn {

Conductivity make_conductivity(const Grid& grid, const Regions& regions,
                               const Vec& sigma, double ellipticity) {
    if (sigma.size() != grid.N) {
        throw DataError("conductivity: field length does not match the grid");
    }
    if (!(ellipticity > 0.0 && ellipticity < 1.0)) {
        throw DataError("conductivity: ellipticity constant must lie in (0,1)");
    }
    for (Index i = 0; i < sigma.size(); ++i) {
        if (!(sigma[i] >= ellipticity && sigma[i] <= 1.0 / ellipticity)) {
            throw DataError("conductivity: value " + std::to_string(sigma[i]) +
                            " at node " + std::to_string(i) +
                            " violates the ellipticity bounds");
        }
    }
    for (Index n : regions.idx_ext) {
        if (std::abs(sigma[n] - 1.0) > 1e-12) {
            throw DataError("conductivity: must equal 1 outside omega; node " +
                            std::to_string(n) + " has " + std::to_string(sigma[n]));
        }
    }
    return Conductivity{sigma, ellipticity};
}

Mat assemble_operator(const Grid& grid, const Conductivity& cond) {
    const Vec& sig = cond.sigma;
    if (sig.size() != grid.N) {
        throw DataError("assemble_operator: conductivity length does not match the grid");
    }
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    Mat A = Mat::Zero(grid.N, grid.N);
    auto harmonic = [](double a, double b) { return 2.0 * a * b / (a + b); };
    for (Index n = 0; n < grid.N; ++n) {
        auto [ix, iy] = grid.axis_indices(n);
        // Interior edges, each visited once from its lower-index endpoint.
        if (ix + 1 < grid.M) {
            const Index m = grid.flat_index(ix + 1, iy);
            const double w = harmonic(sig[n], sig[m]) * inv_h2;
            A(n, n) += w;
            A(m, m) += w;
            A(n, m) -= w;
            A(m, n) -= w;
        }
        if (grid.dim == 2 && iy + 1 < grid.M) {
            const Index m = grid.flat_index(ix, iy + 1);
            const double w = harmonic(sig[n], sig[m]) * inv_h2;
            A(n, n) += w;
            A(m, m) += w;
            A(n, m) -= w;
            A(m, n) -= w;
        }
        // Dirichlet box boundary: the ghost value mirrors the node's own
        // conductivity, so the edge weight is sigma at the node itself.
        if (ix == 0) A(n, n) += sig[n] * inv_h2;
        if (ix == grid.M - 1) A(n, n) += sig[n] * inv_h2;
        if (grid.dim == 2) {
            if (iy == 0) A(n, n) += sig[n] * inv_h2;
            if (iy == grid.M - 1) A(n, n) += sig[n] * inv_h2;
        }
    }
    return A;
}

SpectralOperator spectral_decompose(const Mat& A) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(A);
    if (solver.info() != Eigen::Success) {
        throw NumericError("spectral_decompose: symmetric eigensolver did not converge");
    }
    SpectralOperator S{solver.eigenvalues(), solver.eigenvectors()};
    if (S.lam.size() > 0 && !(S.lam[0] > 0.0)) {
        throw NumericError("spectral_decompose: smallest eigenvalue is not positive (" +
                           std::to_string(S.lam.size() ? S.lam[0] : 0.0) + ")");
    }
    return S;
}

namespace {

void check_power(double s) {
    if (!(s > 0.0 && s <= 1.0)) {
        throw ParameterError("fractional power: s must lie in (0, 1], got " + std::to_string(s));
    }
}

}  // namespace

Vec fractional_apply(const SpectralOperator& S, double s, const Vec& u) {
    check_power(s);
    Vec c = S.V.transpose() * u;
    c.array() *= S.lam.array().pow(s);
    return S.V * c;
}

Mat fractional_matrix(const SpectralOperator& S, double s) {
    check_power(s);
    return S.V * S.lam.array().pow(s).matrix().asDiagonal() * S.V.transpose();
}

Vec heat_apply(const SpectralOperator& S, double t, const Vec& u) {
    if (!(t >= 0.0)) throw ParameterError("heat_apply: time must be nonnegative");
    Vec c = S.V.transpose() * u;
    c.array() *= (-t * S.lam.array()).exp();
    return S.V * c;
}

Mat heat_matrix(const SpectralOperator& S, double t) {
    if (!(t >= 0.0)) throw ParameterError("heat_matrix: time must be nonnegative");
    return S.V * (-t * S.lam.array()).exp().matrix().asDiagonal() * S.V.transpose();
}

Mat frechet_fractional(const SpectralOperator& S, double s, const Mat& dA) {
    check_power(s);
    if ((dA - dA.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + dA.cwiseAbs().maxCoeff())) {
        throw ParameterError("frechet_fractional: direction must be symmetric");
    }
    const Index n = S.lam.size();
    Mat W = S.V.transpose() * dA * S.V;
    for (Index k = 0; k < n; ++k) {
        const double lk = S.lam[k];
        const double lks = std::pow(lk, s);
        for (Index l = 0; l < n; ++l) {
            const double ll = S.lam[l];
            double phi;
            if (std::abs(lk - ll) < 1e-10 * std::abs(lk)) {
                phi = s * std::pow(lk, s - 1.0);
            } else {
                phi = (lks - std::pow(ll, s)) / (lk - ll);
            }
            W(k, l) *= phi;
        }
    }
    return S.V * W * S.V.transpose();
}

}  // namespace fracdn
