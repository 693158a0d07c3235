#include "fracdn/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "fracdn/errors.hpp"
#include "fracdn/quadrature.hpp"
#include "fracdn/special.hpp"

namespace fracdn {

namespace {

void check_kernel_args(const SpectralOperator& S, double s, Index i, Index j) {
    if (!(s > 0.0 && s < 1.0)) {
        throw ParameterError("kernel_entry: s must lie in (0, 1)");
    }
    if (i == j) {
        throw ParameterError("kernel_entry: the diagonal is not a kernel value");
    }
    if (i < 0 || j < 0 || i >= S.lam.size() || j >= S.lam.size()) {
        throw ParameterError("kernel_entry: node index out of range");
    }
}

}  // namespace

KernelQuadInfo kernel_entry_info(const SpectralOperator& S, double s, Index i, Index j,
                                 double rel_tol) {
    check_kernel_args(S, s, i, j);
    const Index n = S.lam.size();
    const double lam_max = S.lam[n - 1];
    const double t0 = 0.5 / lam_max;

    // Mode weights of the (i, j) heat entry: e_ij(t) = sum_k w_k exp(-lam_k t).
    Vec w(n);
    for (Index k = 0; k < n; ++k) w[k] = S.V(i, k) * S.V(j, k);

    // Exact short-time series: int_0^{t0} e_ij(t) t^{-1-s} dt expanded in
    // matrix powers, sum_{m>=1} (-1)^m (A^m)_ij t0^{m-s} / (m! (m-s)).
    // (A^m)_ij = sum_k w_k lam_k^m; the m-th term carries (lam_max t0)^m = 2^-m,
    // so the series converges geometrically with no cancellation blow-up.
    double series = 0.0;
    {
        Vec lam_pow = Vec::Ones(n);
        double t0_pow = std::pow(t0, -s);  // becomes t0^{m-s} inside the loop
        double m_fact = 1.0;
        double sign = 1.0;
        for (int m = 1; m <= 60; ++m) {
            lam_pow.array() *= S.lam.array();
            t0_pow *= t0;
            m_fact *= m;
            sign = -sign;
            const double am_ij = w.dot(lam_pow);
            const double term = sign * am_ij * t0_pow / (m_fact * (m - s));
            series += term;
            if (m > 3 && std::abs(term) < 1e-18 * std::max(std::abs(series), 1e-300)) break;
        }
    }

    // Long-time part on the log axis: substituting t = e^tau turns
    // t^{-1-s} dt into e^{-s tau} d tau. Eigenvalues are sorted ascending, so
    // modes beyond the exp underflow horizon can be dropped per evaluation.
    const auto integrand = [&](double tau) {
        const double t = std::exp(tau);
        const double lam_cut = 745.0 / t;
        const Index active = std::upper_bound(S.lam.data(), S.lam.data() + n, lam_cut) -
                             S.lam.data();
        if (active == 0) return 0.0;
        const double heat =
            w.head(active).dot((-t * S.lam.head(active).array()).exp().matrix());
        return heat * std::exp(-s * tau);
    };
    QuadResult tail = integrate_right_tail(integrand, std::log(t0), 3.0, rel_tol, 1e-10);

    const double normalization = s / gamma_fn(1.0 - s);
    KernelQuadInfo info;
    info.value = normalization * (series + tail.value);
    info.t_lower = t0;
    info.t_upper = std::exp(tail.upper_cutoff);
    info.quad_error = normalization * tail.error_estimate;
    info.evaluations = tail.evaluations;
    if (!std::isfinite(info.value)) {
        throw NumericError("kernel_entry: quadrature produced a non-finite value");
    }
    return info;
}

double kernel_entry(const SpectralOperator& S, double s, Index i, Index j, double rel_tol) {
    return kernel_entry_info(S, s, i, j, rel_tol).value;
}

Mat kernel_matrix(const SpectralOperator& S, double s, double rel_tol) {
    const Index n = S.lam.size();
    Mat K = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double v = kernel_entry(S, s, i, j, rel_tol);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

double dirichlet_form(const SpectralOperator& S, double s, const Vec& u, const Vec& w) {
    return u.dot(fractional_apply(S, s, w));
}

double dirichlet_form_kernel(const Mat& kernel, const Vec& row_sums,
                             const Vec& u, const Vec& w) {
    const Index n = kernel.rows();
    double form = 0.0;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (i == j) continue;
            form += 0.5 * (u[i] - u[j]) * (w[i] - w[j]) * kernel(i, j);
        }
    }
    for (Index i = 0; i < n; ++i) form += row_sums[i] * u[i] * w[i];
    return form;
}

double dirichlet_form_kernel(const SpectralOperator& S, double s,
                             const Vec& u, const Vec& w, double rel_tol) {
    Mat K = kernel_matrix(S, s, rel_tol);
    Vec r = fractional_apply(S, s, Vec::Ones(S.lam.size()));
    return dirichlet_form_kernel(K, r, u, w);
}

namespace {

// Shared fit machinery: the log-distance window is the middle third of the
// separations among "inner" nodes (per-axis |x| <= L/2, away from the
// Dirichlet box where truncation bends the kernel), and only pairs inside
// the window are passed to the entry evaluator.
KernelExponentFit fit_from_entries(const Grid& grid, double s,
                                   const std::function<double(Index, Index)>& entry) {
    std::vector<Index> inner;
    for (Index n = 0; n < grid.N; ++n) {
        auto c = grid.coords(n);
        bool ok = true;
        for (int d = 0; d < grid.dim; ++d) {
            if (std::abs(c[d]) > 0.5 * grid.L) ok = false;
        }
        if (ok) inner.push_back(n);
    }
    struct PairDist {
        Index i, j;
        double ln_r;
    };
    std::vector<PairDist> pairs;
    double ln_r_min = 1e300;
    double ln_r_max = -1e300;
    for (size_t a = 0; a < inner.size(); ++a) {
        for (size_t b = a + 1; b < inner.size(); ++b) {
            const Index i = inner[a];
            const Index j = inner[b];
            auto ci = grid.coords(i);
            auto cj = grid.coords(j);
            double r2 = 0.0;
            for (int d = 0; d < grid.dim; ++d) r2 += (ci[d] - cj[d]) * (ci[d] - cj[d]);
            const double lr = 0.5 * std::log(r2);
            pairs.push_back({i, j, lr});
            ln_r_min = std::min(ln_r_min, lr);
            ln_r_max = std::max(ln_r_max, lr);
        }
    }
    if (pairs.size() < 8) {
        throw DataError("fit_kernel_exponent: too few inner-node pairs for a fit");
    }
    const double window_lo = ln_r_min + (ln_r_max - ln_r_min) / 3.0;
    const double window_hi = ln_r_min + 2.0 * (ln_r_max - ln_r_min) / 3.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    long m = 0;
    for (const PairDist& pd : pairs) {
        if (pd.ln_r < window_lo || pd.ln_r > window_hi) continue;
        const double value = entry(pd.i, pd.j);
        if (!(value > 0.0)) {
            throw NumericError("fit_kernel_exponent: non-positive kernel value in the window");
        }
        const double ln_k = std::log(value);
        sx += pd.ln_r;
        sy += ln_k;
        sxx += pd.ln_r * pd.ln_r;
        sxy += pd.ln_r * ln_k;
        ++m;
    }
    if (m < 4) throw DataError("fit_kernel_exponent: fit window contains too few pairs");
    KernelExponentFit fit;
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.target = -(grid.dim + 2.0 * s);
    fit.rel_err = std::abs(fit.slope - fit.target) / std::abs(fit.target);
    fit.n_pairs = m;
    fit.r_lower = std::exp(window_lo);
    fit.r_upper = std::exp(window_hi);
    return fit;
}

}  // namespace

KernelExponentFit fit_kernel_exponent(const Grid& grid, const Mat& kernel, double s) {
    if (kernel.rows() != grid.N) {
        throw DataError("fit_kernel_exponent: kernel size does not match the grid");
    }
    return fit_from_entries(grid, s,
                            [&kernel](Index i, Index j) { return kernel(i, j); });
}

KernelExponentFit fit_kernel_exponent(const Grid& grid, const SpectralOperator& S,
                                      double s, double rel_tol) {
    if (S.lam.size() != grid.N) {
        throw DataError("fit_kernel_exponent: operator size does not match the grid");
    }
    return fit_from_entries(grid, s, [&](Index i, Index j) {
        return kernel_entry(S, s, i, j, rel_tol);
    });
}

}  // namespace fracdn
