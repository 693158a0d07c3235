#include <doctest.h>

#include <cmath>

#include "fracdn/errors.hpp"
#include "fracdn/quadrature.hpp"
#include "fracdn/special.hpp"

using namespace fracdn;

TEST_CASE("gk15: polynomial exactness on a single panel") {
    // one Gauss7/Kronrod15 panel integrates x^7 on [0, 1] exactly
    const QuadResult r = gk15([](double x) { return std::pow(x, 7); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
    CHECK(r.evaluations == 15);
    // and reports a tiny discrepancy between the embedded rules
    CHECK(r.error_estimate <= 1e-14);
}

TEST_CASE("adaptive: smooth closed forms") {
    const QuadResult sine = integrate_adaptive([](double x) { return std::sin(x); },
                                               0.0, M_PI, 1e-13);
    CHECK(std::abs(sine.value - 2.0) <= 1e-12);

    const QuadResult runge = integrate_adaptive(
        [](double x) { return 1.0 / (1.0 + 25.0 * x * x); }, -1.0, 1.0, 1e-13);
    const double exact = 2.0 / 5.0 * std::atan(5.0);
    CHECK(std::abs(runge.value - exact) <= 1e-12);
    CHECK(runge.evaluations > sine.evaluations);  // the bump forces refinement
}

TEST_CASE("right tail: exponential and Gaussian decay") {
    const QuadResult expo = integrate_right_tail([](double t) { return std::exp(-t); }, 0.0);
    CHECK(std::abs(expo.value - 1.0) <= 1e-11);
    CHECK(expo.upper_cutoff > 10.0);

    const QuadResult gauss = integrate_right_tail(
        [](double t) { return t * std::exp(-0.5 * t * t); }, 0.0);
    CHECK(std::abs(gauss.value - 1.0) <= 1e-11);
}

TEST_CASE("left tail: mirrored marching") {
    const QuadResult expo = integrate_left_tail([](double t) { return std::exp(t); }, 0.0);
    CHECK(std::abs(expo.value - 1.0) <= 1e-11);
}

TEST_CASE("tails: gamma function on the log axis") {
    // Gamma(s) = int t^{s-1} e^{-t} dt = int exp(s tau - e^tau) dtau over the
    // whole tau line: the same substitution the kernel quadrature uses.
    // With the default tail_rel = 1e-10 the marching stops once a chunk falls
    // below 1e-10 of the total, leaving a geometric remainder of the same
    // order (the left tail decays only like e^{s tau}), so the honest bound
    // for default arguments is a few times 1e-10.
    for (double s : {0.3, 0.5, 0.75}) {
        const auto f = [s](double tau) { return std::exp(s * tau - std::exp(tau)); };
        const double left = integrate_left_tail(f, 0.0).value;
        const double right = integrate_right_tail(f, 0.0).value;
        CHECK(std::abs(left + right - gamma_fn(s)) <= 5e-10 * gamma_fn(s));

        // tightening the tail threshold tightens the answer
        const double left_t = integrate_left_tail(f, 0.0, 3.0, 1e-13, 1e-13).value;
        const double right_t = integrate_right_tail(f, 0.0, 3.0, 1e-13, 1e-13).value;
        CHECK(std::abs(left_t + right_t - gamma_fn(s)) <= 1e-11 * gamma_fn(s));
    }
}

TEST_CASE("tails: slow decay exhausts the chunk budget") {
    // 1/(1+t^2) needs ~5e4 chunks to meet the default tail threshold; the
    // hard cap must turn that into an error instead of a silent truncation.
    CHECK_THROWS_AS(
        integrate_right_tail([](double t) { return 1.0 / (1.0 + t * t); }, 0.0),
        NumericError);
}
