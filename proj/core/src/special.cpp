#include "fracdn/special.hpp"

#include <cmath>

#include "fracdn/errors.hpp"
#include "fracdn/quadrature.hpp"

namespace fracdn {

double gamma_fn(double x) {
    if (!(x > 0.0)) throw ParameterError("gamma_fn: argument must be positive");
    return std::tgamma(x);
}

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
// Coefficient of z^3 in the Taylor series of 1/Gamma(1+z).
constexpr double kInvGammaA3 = -0.04200263503409523552900393487542982;

// chi1(mu) = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu), continued to mu = 0
// where it equals -EulerGamma. chi2(mu) = (1/Gamma(1-mu) + 1/Gamma(1+mu))/2.
double chi1(double mu) {
    if (std::abs(mu) < 1e-4) {
        return -kEulerGamma - kInvGammaA3 * mu * mu;
    }
    return (1.0 / std::tgamma(1.0 - mu) - 1.0 / std::tgamma(1.0 + mu)) / (2.0 * mu);
}

double chi2(double mu) {
    return 0.5 * (1.0 / std::tgamma(1.0 - mu) + 1.0 / std::tgamma(1.0 + mu));
}

// mu*pi / sin(mu*pi) = Gamma(1+mu) Gamma(1-mu), continued to 1 at mu = 0.
double mu_pi_over_sin(double mu) {
    if (std::abs(mu) < 1e-8) return 1.0;
    return std::tgamma(1.0 + mu) * std::tgamma(1.0 - mu);
}

// Series evaluation for x <= 2, |mu| <= 1/2. Both K_mu and K_{mu+1} come
// from the ascending series of I_{+-mu} combined term by term, which stays
// cancellation-free in this (mu, x) range.
BesselKPair bessel_k_series(double mu, double x) {
    const double half_x = 0.5 * x;
    const double ln_2_over_x = -std::log(half_x);
    const double sigma = mu * ln_2_over_x;
    const double sinh_ratio = std::abs(sigma) < 1e-8
                                  ? 1.0 + sigma * sigma / 6.0
                                  : std::sinh(sigma) / sigma;
    double f = mu_pi_over_sin(mu) * (chi1(mu) * std::cosh(sigma) +
                                     chi2(mu) * sinh_ratio * ln_2_over_x);
    double p = 0.5 * std::pow(half_x, -mu) * std::tgamma(1.0 + mu);
    double q = 0.5 * std::pow(half_x, mu) * std::tgamma(1.0 - mu);
    double c = 1.0;
    const double x2_4 = half_x * half_x;
    double sum_mu = f;
    double sum_mu1 = p;  // k = 0 term of c_k (p_k - k f_k)
    for (int k = 1; k <= 200; ++k) {
        f = (k * f + p + q) / (k * k - mu * mu);
        p /= (k - mu);
        q /= (k + mu);
        c *= x2_4 / k;
        const double d_mu = c * f;
        const double d_mu1 = c * (p - k * f);
        sum_mu += d_mu;
        sum_mu1 += d_mu1;
        if (std::abs(d_mu) < 1e-17 * std::abs(sum_mu) &&
            std::abs(d_mu1) < 1e-17 * std::abs(sum_mu1)) {
            return {sum_mu, 2.0 / x * sum_mu1};
        }
    }
    throw NumericError("bessel_k_pair: series did not converge");
}

// Integral representation K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt,
// used for x > 2 where the integrand decays fast and is positive (so the
// adaptive panels deliver full relative accuracy). Valid for any real nu.
double bessel_k_integral(double nu, double x) {
    if (x > 700.0) return 0.0;  // below the smallest double for the e^{-x} scale
    // Beyond t_max the integrand is under e^{-50} of its peak.
    const double t_max = std::acosh(1.0 + 50.0 / x) + 1.0;
    const auto integrand = [nu, x](double t) {
        return std::exp(-x * std::cosh(t) + x) * std::cosh(nu * t);
    };
    QuadResult q = integrate_adaptive(integrand, 0.0, t_max, 1e-14);
    return q.value * std::exp(-x);
}

}  // namespace

BesselKPair bessel_k_pair(double mu, double x) {
    if (!(x > 0.0)) throw ParameterError("bessel_k_pair: argument must be positive");
    if (std::abs(mu) > 0.5 + 1e-12) {
        throw ParameterError("bessel_k_pair: order must lie in [-1/2, 1/2]");
    }
    if (x <= 2.0) return bessel_k_series(mu, x);
    return {bessel_k_integral(mu, x), bessel_k_integral(mu + 1.0, x)};
}

BesselKBoth bessel_k_both(double s, double x) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("bessel_k_both: order must lie in (0,1)");
    // K is even in its order, so the pair at mu = -min(s, 1-s) is
    // (K_{min(s,1-s)}, K_{1-min(s,1-s)}) = {K_s, K_{1-s}} up to ordering.
    const double m = std::min(s, 1.0 - s);
    BesselKPair pair = bessel_k_pair(-m, x);
    if (s <= 0.5) return {pair.k_mu, pair.k_mu_plus_1};
    return {pair.k_mu_plus_1, pair.k_mu};
}

double extension_profile(double s, double z) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("extension_profile: s must lie in (0,1)");
    if (z < 0.0) throw ParameterError("extension_profile: z must be nonnegative");
    if (z == 0.0) return 1.0;
    if (z > 700.0) return 0.0;
    const double k_s = bessel_k_both(s, z).k_s;
    return std::pow(2.0, 1.0 - s) / gamma_fn(s) * std::pow(z, s) * k_s;
}

double extension_profile_deriv(double s, double z) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("extension_profile_deriv: s must lie in (0,1)");
    if (!(z > 0.0)) throw ParameterError("extension_profile_deriv: z must be positive");
    if (z > 700.0) return 0.0;
    const double k_1ms = bessel_k_both(s, z).k_1ms;
    return -std::pow(2.0, 1.0 - s) / gamma_fn(s) * std::pow(z, s) * k_1ms;
}

double trace_constant_closed_form(double s) {
    if (!(s > 0.0 && s < 1.0)) throw ParameterError("trace_constant_closed_form: s must lie in (0,1)");
    return std::pow(2.0, 1.0 - 2.0 * s) * gamma_fn(1.0 - s) / gamma_fn(s);
}

double profile_branch_coefficient(double s) {
    return -trace_constant_closed_form(s) / (2.0 * s);
}

}  // namespace fracdn
