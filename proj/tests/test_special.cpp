#include <doctest.h>

#include <cmath>

#include "fracdn/special.hpp"
#include "oracles.hpp"

using namespace fracdn;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("gamma: pinned values and the reflection identity") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
    for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        const double lhs = gamma_fn(x) * gamma_fn(1.0 - x);
        const double rhs = M_PI / std::sin(M_PI * x);
        CHECK(rel(lhs, rhs) <= 1e-13);
    }
}

TEST_CASE("bessel K: frozen reference values, orders within [-1/2, 1/2]") {
    for (const auto& row : oracle::bessel_reference()) {
        if (row.nu > 0.5) continue;  // covered through evenness below
        const BesselKPair p = bessel_k_pair(row.nu, row.x);
        const double tol = (row.x <= 1e-5 || row.x >= 50.0) ? 3e-11 : 5e-12;
        CHECK_MESSAGE(rel(p.k_mu, row.k_nu) <= tol,
                      "K_nu nu=", row.nu, " x=", row.x, " got ", p.k_mu);
        CHECK_MESSAGE(rel(p.k_mu_plus_1, row.k_nu_p1) <= tol,
                      "K_{nu+1} nu=", row.nu, " x=", row.x, " got ", p.k_mu_plus_1);
    }
}

TEST_CASE("bessel K: orders above 1/2 through evenness and the recurrence") {
    // K_{-mu} = K_mu and K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu, so the rows
    // with nu in {0.75, 0.95} check the pair evaluated at mu = nu - 1.
    for (const auto& row : oracle::bessel_reference()) {
        if (row.nu <= 0.5) continue;
        const double mu = row.nu - 1.0;  // in [-1/2, 0)
        const BesselKPair p = bessel_k_pair(mu, row.x);
        const double tol = (row.x <= 1e-5 || row.x >= 50.0) ? 3e-11 : 5e-12;
        CHECK_MESSAGE(rel(p.k_mu_plus_1, row.k_nu) <= tol,
                      "K_nu nu=", row.nu, " x=", row.x);
        const double k_next = p.k_mu + (2.0 * row.nu / row.x) * p.k_mu_plus_1;
        CHECK_MESSAGE(rel(k_next, row.k_nu_p1) <= 5e-11,
                      "K_{nu+1} nu=", row.nu, " x=", row.x);
    }
}

TEST_CASE("bessel K: half order closed form") {
    // K_{1/2}(x) = sqrt(pi / (2x)) e^{-x}
    for (double x : {0.25, 0.5, 1.0, 2.0, 5.0, 20.0}) {
        const BesselKPair p = bessel_k_pair(-0.5, x);
        const double exact = std::sqrt(M_PI / (2.0 * x)) * std::exp(-x);
        CHECK(rel(p.k_mu, exact) <= 1e-12);       // K_{-1/2} = K_{1/2}
        CHECK(rel(p.k_mu_plus_1, exact) <= 1e-12);  // K_{1/2}
    }
}

TEST_CASE("bessel K: both orders for one s") {
    const BesselKBoth b = bessel_k_both(0.25, 1.0);
    const BesselKPair p = bessel_k_pair(-0.25, 1.0);
    CHECK(b.k_s == doctest::Approx(p.k_mu).epsilon(1e-15));        // K_{0.25}
    CHECK(b.k_1ms == doctest::Approx(p.k_mu_plus_1).epsilon(1e-15));  // K_{0.75}
}

TEST_CASE("extension profile: frozen reference values") {
    for (const auto& row : oracle::psi_reference()) {
        const double got = extension_profile(row.s, row.z);
        CHECK_MESSAGE(rel(got, row.value) <= 5e-12, "psi s=", row.s, " z=", row.z,
                      " got ", got);
    }
}

TEST_CASE("extension profile: independent series/RK4 route") {
    for (double s : {0.25, 0.5, 0.75, 0.9}) {
        for (double z : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            const double closed = extension_profile(s, z);
            const double marched = oracle::psi_ode(s, z);
            CHECK_MESSAGE(rel(closed, marched) <= 1e-9, "psi s=", s, " z=", z);
        }
    }
}

TEST_CASE("extension profile: s = 1/2 degenerates to exp(-z)") {
    for (double z : {0.01, 0.5, 1.0, 3.0, 10.0}) {
        CHECK(rel(extension_profile(0.5, z), std::exp(-z)) <= 1e-12);
        CHECK(rel(extension_profile_deriv(0.5, z), -std::exp(-z)) <= 1e-12);
    }
}

TEST_CASE("extension profile: boundary value and derivative consistency") {
    // psi_s(0+) = 1, approached like 1 + b z^{2s}
    for (double s : {0.25, 0.5, 0.75}) {
        const double near = extension_profile(s, 1e-8);
        CHECK(std::abs(near - 1.0) <=
              1.1 * std::abs(profile_branch_coefficient(s)) * std::pow(1e-8, 2.0 * s) + 1e-14);
    }
    // derivative against a central difference of the profile
    for (double s : {0.3, 0.5, 0.8}) {
        const double z = 1.25, dz = 1e-6;
        const double fd =
            (extension_profile(s, z + dz) - extension_profile(s, z - dz)) / (2.0 * dz);
        CHECK(rel(extension_profile_deriv(s, z), fd) <= 1e-8);
    }
}

TEST_CASE("trace constant: closed form against frozen values") {
    for (const auto& row : oracle::ds_reference()) {
        CHECK(rel(trace_constant_closed_form(row.s), row.value) <= 1e-13);
    }
    CHECK(std::abs(trace_constant_closed_form(0.5) - 1.0) <= 1e-14);
    // branch coefficient is -d_s / (2s)
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        CHECK(rel(profile_branch_coefficient(s),
                  -trace_constant_closed_form(s) / (2.0 * s)) <= 1e-14);
    }
}
