#pragma once

namespace fracdn {

// Gamma function on the domain this library needs (positive arguments and
// the reflection combination used by the kernel normalization).
double gamma_fn(double x);

// Modified Bessel function of the second kind for order mu in [-1/2, 1/2]:
// returns the pair (K_mu(x), K_{mu+1}(x)). Series evaluation for x <= 2,
// integral representation for x > 2; relative accuracy ~1e-12 on
// x in [1e-6, 700]. Underflows to 0 for very large x.
struct BesselKPair {
    double k_mu;
    double k_mu_plus_1;
};
BesselKPair bessel_k_pair(double mu, double x);

// K_nu(x) for nu in (0, 1), via the pair above (K is even in its order, so
// both K_s and K_{1-s} come from one pair evaluation at mu = -min(s, 1-s)).
struct BesselKBoth {
    double k_s;        // K_s(x)
    double k_1ms;      // K_{1-s}(x)
};
BesselKBoth bessel_k_both(double s, double x);

// Extension profile psi_s(z): the decaying solution of
//   psi'' + ((1-2s)/z) psi' - psi = 0,  psi(0) = 1,
// in closed form psi_s(z) = 2^{1-s}/Gamma(s) * z^s K_s(z).
double extension_profile(double s, double z);

// d/dz psi_s(z) = -2^{1-s}/Gamma(s) * z^s K_{1-s}(z); requires z > 0
// (the derivative is singular at z = 0 for s < 1/2).
double extension_profile_deriv(double s, double z);

// Closed-form trace constant 2^{1-2s} Gamma(1-s)/Gamma(s). The quadrature
// route lives in the extension module; this closed form is a diagnostic.
double trace_constant_closed_form(double s);

// Coefficient of z^{2s} in the small-z expansion of psi_s:
// -2^{-2s} Gamma(1-s) / (s Gamma(s)) = -trace_constant / (2s).
double profile_branch_coefficient(double s);

}  // namespace fracdn
