#include "fracdn/quadrature.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "fracdn/errors.hpp"

namespace fracdn {

namespace {

// Kronrod-15 abscissae on [0, 1] side of the symmetric rule; odd entries are
// the embedded Gauss-7 points.
constexpr double kXk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

}  // namespace

QuadResult gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double k_sum = 0.0;
    double g_sum = 0.0;
    QuadResult r;
    for (int i = 0; i < 8; ++i) {
        double pair;
        if (kXk[i] == 0.0) {
            pair = f(c);
            r.evaluations += 1;
        } else {
            pair = f(c - hw * kXk[i]) + f(c + hw * kXk[i]);
            r.evaluations += 2;
        }
        k_sum += kWk[i] * pair;
        if (i % 2 == 1) g_sum += kWg[i / 2] * pair;
    }
    r.value = hw * k_sum;
    r.error_estimate = std::abs(hw * (k_sum - g_sum));
    r.upper_cutoff = b;
    return r;
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              double rel_tol, double width_floor) {
    QuadResult acc;
    acc.upper_cutoff = b;
    std::vector<std::pair<double, double>> stack{{a, b}};
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        QuadResult p = gk15(f, lo, hi);
        acc.evaluations += p.evaluations;
        if (p.error_estimate <= rel_tol * std::max(1.0, std::abs(p.value)) ||
            hi - lo < width_floor) {
            acc.value += p.value;
            acc.error_estimate += p.error_estimate;
        } else {
            const double mid = 0.5 * (lo + hi);
            stack.emplace_back(lo, mid);
            stack.emplace_back(mid, hi);
        }
        if (acc.evaluations > 50'000'000) {
            throw NumericError("integrate_adaptive: evaluation budget exhausted");
        }
    }
    return acc;
}

QuadResult integrate_right_tail(const Integrand& f, double a, double chunk_width,
                                double rel_tol, double tail_rel, int max_chunks) {
    QuadResult acc;
    double lo = a;
    for (int k = 0; k < max_chunks; ++k) {
        QuadResult p = integrate_adaptive(f, lo, lo + chunk_width, rel_tol);
        acc.value += p.value;
        acc.error_estimate += p.error_estimate;
        acc.evaluations += p.evaluations;
        lo += chunk_width;
        acc.upper_cutoff = lo;
        if (std::abs(p.value) <= tail_rel * std::abs(acc.value)) return acc;
    }
    throw NumericError("integrate_right_tail: tail did not fall below the relative cutoff within the chunk budget");
}

QuadResult integrate_left_tail(const Integrand& f, double b, double chunk_width,
                               double rel_tol, double tail_rel, int max_chunks) {
    QuadResult acc;
    double hi = b;
    for (int k = 0; k < max_chunks; ++k) {
        QuadResult p = integrate_adaptive(f, hi - chunk_width, hi, rel_tol);
        acc.value += p.value;
        acc.error_estimate += p.error_estimate;
        acc.evaluations += p.evaluations;
        hi -= chunk_width;
        acc.upper_cutoff = hi;  // for the left tail this is the lower cutoff reached
        if (std::abs(p.value) <= tail_rel * std::abs(acc.value)) return acc;
    }
    throw NumericError("integrate_left_tail: tail did not fall below the relative cutoff within the chunk budget");
}

}  // namespace fracdn
