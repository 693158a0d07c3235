#include <doctest.h>

#include <cmath>

#include "fracdn/errors.hpp"
#include "fracdn/kernel.hpp"
#include "fracdn/rng.hpp"
#include "test_helpers.hpp"

using namespace fracdn;

TEST_CASE("kernel: quadrature equals the negated spectral off-diagonal") {
    testbed::Fixture f = testbed::fixture_1d(15);
    for (double s : {0.25, 0.5, 0.75}) {
        Mat Bs = fractional_matrix(f.S, s);
        for (Index i = 0; i < f.grid.N; i += 3) {
            for (Index j = i + 1; j < f.grid.N; j += 4) {
                const double k = kernel_entry(f.S, s, i, j);
                CHECK_MESSAGE(std::abs(k + Bs(i, j)) <= 1e-10 * std::abs(Bs(i, j)),
                              "s=", s, " i=", i, " j=", j);
            }
        }
    }
}

TEST_CASE("kernel: positivity and symmetry of the full matrix") {
    testbed::Fixture f = testbed::fixture_1d(15);
    Mat K = kernel_matrix(f.S, 0.5, 1e-10);
    for (Index i = 0; i < f.grid.N; ++i) {
        CHECK(K(i, i) == 0.0);
        for (Index j = i + 1; j < f.grid.N; ++j) {
            CHECK(K(i, j) > 0.0);
            CHECK(K(i, j) == doctest::Approx(K(j, i)).epsilon(1e-15));
        }
    }
}

TEST_CASE("kernel: quadrature bookkeeping") {
    testbed::Fixture f = testbed::fixture_1d(15);
    KernelQuadInfo info = kernel_entry_info(f.S, 0.5, 2, 9);
    CHECK(info.value > 0.0);
    CHECK(info.t_lower == doctest::Approx(0.5 / f.S.lam[f.grid.N - 1]).epsilon(1e-12));
    CHECK(info.t_upper > info.t_lower);
    CHECK(info.evaluations > 0);
}

TEST_CASE("kernel: nearest-neighbour entries dominate") {
    testbed::Fixture f = testbed::fixture_1d(15);
    Mat K = kernel_matrix(f.S, 0.5, 1e-10);
    // jump intensity falls with distance along the line
    for (Index j = 2; j < 12; ++j) {
        CHECK(K(0, j) < K(0, j - 1));
    }
}

TEST_CASE("dirichlet form: spectral route equals the kernel route") {
    testbed::Fixture f = testbed::fixture_1d(15);
    Rng rng(41);
    for (double s : {0.3, 0.5, 0.8}) {
        Vec u = rng.gaussian_vector(f.grid.N);
        Vec w = rng.gaussian_vector(f.grid.N);
        const double spectral = dirichlet_form(f.S, s, u, w);
        const double kernel = dirichlet_form_kernel(f.S, s, u, w, 1e-11);
        CHECK_MESSAGE(std::abs(spectral - kernel) <= 1e-8 * std::abs(spectral),
                      "s=", s, " spectral=", spectral, " kernel=", kernel);
    }
    // energy of the ground mode is its eigenvalue power
    Vec phi0 = f.S.V.col(0);
    CHECK(dirichlet_form(f.S, 0.5, phi0, phi0) ==
          doctest::Approx(std::sqrt(f.S.lam[0])).epsilon(1e-12));
}

TEST_CASE("kernel exponent: fit runs and the two entry routes agree") {
    testbed::Fixture f = testbed::fixture_1d();
    const double s = 0.5;
    Mat K = kernel_matrix(f.S, s, 1e-10);
    KernelExponentFit from_matrix = fit_kernel_exponent(f.grid, K, s);
    KernelExponentFit from_operator = fit_kernel_exponent(f.grid, f.S, s, 1e-8);

    CHECK(from_matrix.target == doctest::Approx(-(1.0 + 2.0 * s)).epsilon(1e-15));
    CHECK(from_matrix.n_pairs >= 8);
    CHECK(from_matrix.r_upper > from_matrix.r_lower);
    // both routes fit the same pairs; quadrature tolerances differ slightly
    CHECK(std::abs(from_matrix.slope - from_operator.slope) <=
          1e-4 * std::abs(from_matrix.slope));
    // the coarse grid still lands in the right neighbourhood
    CHECK(from_matrix.rel_err <= 0.2);
}
