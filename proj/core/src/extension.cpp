#include "fracdn/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "fracdn/errors.hpp"
#include "fracdn/quadrature.hpp"
#include "fracdn/special.hpp"

namespace fracdn {

namespace {

void check_ext(const ExtensionSolution& ext) {
    if (ext.op == nullptr || ext.c.size() != ext.op->lam.size()) {
        throw ParameterError("extension: solution does not reference a valid operator");
    }
    if (!(ext.s > 0.0 && ext.s < 1.0)) {
        throw ParameterError("extension: s must lie in (0, 1)");
    }
}

// Weighted p-norm on the grid: (sum |f_i|^p h^n)^{1/p}; sup norm for p = inf.
double grid_norm(const Vec& f, double p, double h, int dim) {
    if (std::isinf(p)) return f.lpNorm<Eigen::Infinity>();
    if (p == 1.0) return f.lpNorm<1>() * std::pow(h, dim);
    if (p == 2.0) return f.norm() * std::pow(h, dim / 2.0);
    double acc = 0.0;
    for (Index i = 0; i < f.size(); ++i) acc += std::pow(std::abs(f[i]), p);
    return std::pow(acc, 1.0 / p) * std::pow(h, dim / p);
}

double inv_or_zero(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

ExtensionSolution solve_extension(const SpectralOperator& S, double s, const Vec& u) {
    if (!(s > 0.0 && s < 1.0)) {
        throw ParameterError("solve_extension: s must lie in (0, 1)");
    }
    if (u.size() != S.lam.size()) {
        throw DataError("solve_extension: field length does not match the operator");
    }
    ExtensionSolution ext;
    ext.op = &S;
    ext.s = s;
    ext.c = S.V.transpose() * u;
    ext.profile = &extension_profile;
    return ext;
}

Vec evaluate(const ExtensionSolution& ext, double y) {
    check_ext(ext);
    if (y < 0.0) throw ParameterError("evaluate: the extension lives on y >= 0");
    const Index n = ext.c.size();
    Vec scaled(n);
    for (Index k = 0; k < n; ++k) {
        scaled[k] = ext.c[k] * ext.profile(ext.s, std::sqrt(ext.op->lam[k]) * y);
    }
    return ext.op->V * scaled;
}

Vec evaluate_dy(const ExtensionSolution& ext, double y) {
    check_ext(ext);
    if (!(y > 0.0)) {
        throw ParameterError("evaluate_dy: the y-derivative needs y > 0");
    }
    const Index n = ext.c.size();
    Vec scaled(n);
    for (Index k = 0; k < n; ++k) {
        const double rl = std::sqrt(ext.op->lam[k]);
        scaled[k] = ext.c[k] * rl * extension_profile_deriv(ext.s, rl * y);
    }
    return ext.op->V * scaled;
}

Vec neumann_trace(const ExtensionSolution& ext) {
    check_ext(ext);
    const double ds = d_s_constant(ext.s);
    Vec scaled = ext.c.array() * ext.op->lam.array().pow(ext.s);
    return ds * (ext.op->V * scaled);
}

double trace_limit_ladder(double s, double z0, int rungs) {
    if (!(s > 0.0 && s < 1.0)) {
        throw ParameterError("trace_limit_ladder: s must lie in (0, 1)");
    }
    if (!(z0 > 0.0) || rungs < 3) {
        throw ParameterError("trace_limit_ladder: need z0 > 0 and at least 3 rungs");
    }
    // T(z) = -z^{1-2s} psi_s'(z) -> d_s as z -> 0, with corrections
    // alpha z^{2-2s} + beta z^2 + O(z^{4-2s}).
    std::vector<double> row(rungs);
    for (int j = 0; j < rungs; ++j) {
        const double z = z0 * std::pow(0.5, j);
        row[j] = -std::pow(z, 1.0 - 2.0 * s) * extension_profile_deriv(s, z);
    }
    // Neville sweep: stage m removes the exponent p_m from the error, using
    // the halving ratio (error scales by 2^{-p_m} per rung).
    double prev_best = row.back();
    for (int m = 1; m < rungs; ++m) {
        const double p = (m % 2 == 1) ? (m + 1.0) - 2.0 * s : static_cast<double>(m);
        const double factor = std::pow(2.0, p) - 1.0;
        for (int j = 0; j + m < rungs; ++j) {
            row[j] = row[j + 1] + (row[j + 1] - row[j]) / factor;
        }
        if (m + 1 < rungs) prev_best = row[rungs - m - 1];
    }
    const double limit = row[0];
    const double settle = std::abs(limit - prev_best);
    if (!(settle <= 1e-8 * std::max(1.0, std::abs(limit)))) {
        std::ostringstream msg;
        msg << "trace_limit_ladder: extrapolation has not settled (last correction "
            << settle << " at limit " << limit << ", z0 = " << z0
            << ", rungs = " << rungs << ")";
        throw NumericError(msg.str());
    }
    return limit;
}

Vec neumann_trace_ladder(const ExtensionSolution& ext, double z0, int rungs) {
    check_ext(ext);
    const double limit = trace_limit_ladder(ext.s, z0, rungs);
    Vec scaled = ext.c.array() * ext.op->lam.array().pow(ext.s);
    return limit * (ext.op->V * scaled);
}

double d_s_constant(double s) {
    if (!(s > 0.0 && s < 1.0)) {
        throw ParameterError("d_s_constant: s must lie in (0, 1)");
    }
    // m_s = int_0^inf z^{1-2s} psi_s(z) dz on the log axis: with z = e^tau the
    // integrand z^{2-2s} psi_s(z) decays like e^{(2-2s)tau} to the left and
    // like exp(-e^tau) to the right.
    const auto integrand = [s](double tau) {
        const double z = std::exp(tau);
        return std::pow(z, 2.0 - 2.0 * s) * extension_profile(s, z);
    };
    QuadResult left = integrate_left_tail(integrand, 0.0, 3.0, 1e-13, 1e-12);
    QuadResult right = integrate_right_tail(integrand, 0.0, 3.0, 1e-13, 1e-12);
    const double ms = left.value + right.value;
    if (!(ms > 0.0) || !std::isfinite(ms)) {
        throw NumericError("d_s_constant: profile moment quadrature failed");
    }
    return ms;
}

Vec reduce_to_local(const ExtensionSolution& ext) {
    check_ext(ext);
    const double ms = d_s_constant(ext.s);
    Vec scaled = ext.c.array() * ext.op->lam.array().pow(ext.s - 1.0);
    return ms * (ext.op->V * scaled);
}

Vec reduce_to_local_quadrature(const ExtensionSolution& ext, double rel_tol) {
    check_ext(ext);
    const double s = ext.s;
    const Index n = ext.c.size();
    Vec scaled(n);
    for (Index k = 0; k < n; ++k) {
        // I_k = int_0^inf y^{1-2s} psi_s(sqrt(lam_k) y) dy, integrated as is
        // (no change of variables to the closed-form moment).
        const double rl = std::sqrt(ext.op->lam[k]);
        const auto integrand = [s, rl](double tau) {
            const double y = std::exp(tau);
            return std::pow(y, 2.0 - 2.0 * s) * extension_profile(s, rl * y);
        };
        const double tau0 = -std::log(rl);  // z = 1 in the profile argument
        QuadResult left = integrate_left_tail(integrand, tau0, 3.0, rel_tol, 1e-12);
        QuadResult right = integrate_right_tail(integrand, tau0, 3.0, rel_tol, 1e-12);
        scaled[k] = ext.c[k] * (left.value + right.value);
    }
    return ext.op->V * scaled;
}

Vec make_y_ladder(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        throw ParameterError("make_y_ladder: need 0 < lo < hi and at least 2 rungs");
    }
    Vec y(n);
    const double step = std::log(hi / lo) / (n - 1);
    for (int j = 0; j < n; ++j) y[j] = lo * std::exp(step * j);
    y[n - 1] = hi;
    return y;
}

DecayReport check_decay(const ExtensionSolution& ext, const Vec& u,
                        const Grid& grid, const Regions& regions,
                        const Vec& y_ladder, double p, double q, double r) {
    check_ext(ext);
    if (u.size() != grid.N || ext.c.size() != grid.N) {
        throw DataError("check_decay: field length does not match the grid");
    }
    const auto bad_exp = [](double e) { return !(e >= 1.0); };  // admits inf
    if (bad_exp(p) || bad_exp(q) || bad_exp(r)) {
        throw ParameterError("check_decay: exponents must lie in [1, inf]");
    }
    if (std::abs(1.0 + inv_or_zero(r) - inv_or_zero(p) - inv_or_zero(q)) > 1e-12) {
        throw ParameterError("check_decay: exponents must satisfy 1 + 1/r = 1/p + 1/q");
    }
    if (y_ladder.size() < 2) {
        throw ParameterError("check_decay: the ladder needs at least 2 heights");
    }
    for (Index j = 0; j + 1 < y_ladder.size(); ++j) {
        if (!(y_ladder[j] > 0.0 && y_ladder[j] < y_ladder[j + 1])) {
            throw ParameterError("check_decay: ladder heights must be positive and increasing");
        }
    }
    // The bounds are stated for sources supported in Omega union W.
    {
        std::vector<char> allowed(static_cast<size_t>(grid.N), 0);
        for (Index i : regions.idx_omega) allowed[static_cast<size_t>(i)] = 1;
        for (Index i : regions.idx_w) allowed[static_cast<size_t>(i)] = 1;
        for (Index i = 0; i < grid.N; ++i) {
            if (u[i] != 0.0 && !allowed[static_cast<size_t>(i)]) {
                throw DataError(
                    "check_decay: the field must be supported in Omega union W");
            }
        }
    }

    const int n_y = static_cast<int>(y_ladder.size());
    const int dim = grid.dim;
    const double u_norm_1 = grid_norm(u, 1.0, grid.h, dim);
    const double u_norm_q = grid_norm(u, q, grid.h, dim);

    DecayReport rep;
    rep.y = y_ladder;
    rep.p = p;
    rep.q = q;
    rep.r = r;
    rep.sup_norm.resize(n_y);
    rep.r_norm.resize(n_y);
    rep.l2_norm.resize(n_y);
    rep.dy_sup_norm.resize(n_y);
    rep.dy_r_norm.resize(n_y);
    rep.ratio_a.resize(n_y);
    rep.ratio_a_deriv.resize(n_y);
    rep.ratio_b.resize(n_y);
    rep.ratio_b_deriv.resize(n_y);

    const double exp_b = dim - dim * inv_or_zero(p);
    for (int j = 0; j < n_y; ++j) {
        const double y = y_ladder[j];
        const Vec field = evaluate(ext, y);
        const Vec dfield = evaluate_dy(ext, y);
        rep.sup_norm[j] = grid_norm(field, std::numeric_limits<double>::infinity(), grid.h, dim);
        rep.r_norm[j] = grid_norm(field, r, grid.h, dim);
        rep.l2_norm[j] = grid_norm(field, 2.0, grid.h, dim);
        rep.dy_sup_norm[j] =
            grid_norm(dfield, std::numeric_limits<double>::infinity(), grid.h, dim);
        rep.dy_r_norm[j] = grid_norm(dfield, r, grid.h, dim);
        rep.ratio_a[j] = u_norm_1 > 0.0 ? rep.sup_norm[j] * std::pow(y, dim) / u_norm_1 : 0.0;
        rep.ratio_a_deriv[j] =
            u_norm_1 > 0.0 ? rep.dy_sup_norm[j] * std::pow(y, dim + 1.0) / u_norm_1 : 0.0;
        rep.ratio_b[j] = u_norm_q > 0.0 ? rep.r_norm[j] * std::pow(y, exp_b) / u_norm_q : 0.0;
        rep.ratio_b_deriv[j] =
            u_norm_q > 0.0 ? rep.dy_r_norm[j] * std::pow(y, exp_b + 1.0) / u_norm_q : 0.0;
    }
    rep.fitted_const_a = rep.ratio_a.maxCoeff();
    rep.fitted_const_a_deriv = rep.ratio_a_deriv.maxCoeff();
    rep.fitted_const_b = rep.ratio_b.maxCoeff();
    rep.fitted_const_b_deriv = rep.ratio_b_deriv.maxCoeff();

    rep.l2_nonincreasing = true;
    for (int j = 0; j + 1 < n_y; ++j) {
        if (rep.l2_norm[j + 1] > rep.l2_norm[j] * (1.0 + 1e-12)) {
            rep.l2_nonincreasing = false;
        }
    }

    // Tail rate: least-squares slope of log l2 against y over the top quarter
    // of the ladder (at least two rungs), using positive norms only.
    {
        int lo = std::max(0, n_y - std::max(2, n_y / 4));
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        int m = 0;
        for (int j = lo; j < n_y; ++j) {
            if (!(rep.l2_norm[j] > 0.0)) continue;
            const double x = y_ladder[j];
            const double v = std::log(rep.l2_norm[j]);
            sx += x;
            sy += v;
            sxx += x * x;
            sxy += x * v;
            ++m;
        }
        rep.tail_rate = m >= 2 ? -(m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    }
    return rep;
}

}  // namespace fracdn
