#include <doctest.h>

#include <cmath>

#include "fracdn/errors.hpp"
#include "fracdn/forward.hpp"
#include "fracdn/rng.hpp"
#include "test_helpers.hpp"

using namespace fracdn;

namespace {

Vec gather(const Vec& v, const std::vector<Index>& idx) {
    Vec out(static_cast<Index>(idx.size()));
    for (size_t i = 0; i < idx.size(); ++i) out[static_cast<Index>(i)] = v[idx[i]];
    return out;
}

Vec indicator(Index n, Index size) {
    Vec e = Vec::Zero(size);
    e[n] = 1.0;
    return e;
}

}  // namespace

TEST_CASE("exterior solve: defining equation and exterior values") {
    testbed::Fixture f = testbed::fixture_1d();
    const double s = 0.5;
    ExteriorOperator E = make_exterior_operator(f.S, s, f.regions);

    Rng rng(51);
    Vec ext_data = Vec::Zero(f.grid.N);
    for (Index i : f.regions.idx_w) ext_data[i] = rng.gaussian();

    Vec u = solve_exterior(E, f.F, ext_data);
    // u agrees with the exterior data off Omega
    for (Index i : f.regions.idx_ext) CHECK(u[i] == ext_data[i]);
    // and (A^s u) = F on Omega
    Vec resid = gather(E.Bs * u - f.F, f.regions.idx_omega);
    CHECK(resid.norm() <= 1e-10 * gather(f.F, f.regions.idx_omega).norm());

    // the convenience overload matches
    Vec u2 = solve_exterior(f.S, s, f.regions, f.F, ext_data);
    CHECK((u - u2).norm() <= 1e-14 * u.norm());
}

TEST_CASE("exterior solve: support contracts") {
    testbed::Fixture f = testbed::fixture_1d();
    ExteriorOperator E = make_exterior_operator(f.S, 0.5, f.regions);

    Vec bad_F = f.F;
    bad_F[0] = 1.0;  // node 0 is exterior
    CHECK_THROWS_AS(solve_exterior(E, bad_F, Vec::Zero(f.grid.N)), DataError);

    Vec bad_f = Vec::Zero(f.grid.N);
    bad_f[f.regions.idx_omega[0]] = 1.0;  // exterior data must vanish on Omega
    CHECK_THROWS_AS(solve_exterior(E, f.F, bad_f), DataError);
}

TEST_CASE("nonlocal DN: measurement bookkeeping") {
    testbed::Fixture f = testbed::fixture_1d();
    ExteriorOperator E = make_exterior_operator(f.S, 0.5, f.regions);
    const Index nw = static_cast<Index>(f.regions.idx_w.size());

    Vec fin = Vec::Zero(f.grid.N);
    fin[f.regions.idx_w[3]] = 2.0;
    DNSample sample = nonlocal_dn(E, f.F, fin);
    CHECK(sample.tag == "nonlocal");
    CHECK(sample.s == 0.5);
    CHECK(sample.f.size() == nw);
    CHECK(sample.g.size() == nw);
    CHECK(sample.f[3] == 2.0);

    // inputs must be supported on W
    Vec off_w = Vec::Zero(f.grid.N);
    off_w[0] = 1.0;  // exterior but not in W
    CHECK_THROWS_AS(nonlocal_dn(E, f.F, off_w), DataError);
}

TEST_CASE("homogenized DN: linear in the input and symmetric") {
    testbed::Fixture f = testbed::fixture_1d();
    ExteriorOperator E = make_exterior_operator(f.S, 0.5, f.regions);
    const Index nw = static_cast<Index>(f.regions.idx_w.size());

    Vec f1 = Vec::Zero(f.grid.N);
    f1[f.regions.idx_w[2]] = 1.0;
    Vec f2 = Vec::Zero(f.grid.N);
    f2[f.regions.idx_w[9]] = 1.0;

    Vec g1 = homogenized_dn(E, f.F, f1).g;
    Vec g2 = homogenized_dn(E, f.F, f2).g;
    Vec g12 = homogenized_dn(E, f.F, f1 + f2).g;
    CHECK((g12 - g1 - g2).norm() <= 1e-10 * (g1.norm() + g2.norm()));

    Mat lambda = homogenized_dn_matrix(E, f.F);
    CHECK(lambda.rows() == nw);
    CHECK(lambda.cols() == nw);
    CHECK((lambda.col(2) - g1).norm() <= 1e-12 * g1.norm());
    const double scale = lambda.cwiseAbs().maxCoeff();
    CHECK((lambda - lambda.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * scale);

    // homogenization removes the source: the matrix from F = 0 is the same
    ExteriorOperator E0 = make_exterior_operator(f.S, 0.5, f.regions);
    Mat lambda0 = homogenized_dn_matrix(E0, Vec::Zero(f.grid.N));
    CHECK((lambda - lambda0).cwiseAbs().maxCoeff() <= 1e-9 * scale);
}

TEST_CASE("local solve: Dirichlet data, interior equation, Green identity") {
    testbed::Fixture f = testbed::fixture_1d();
    const auto& r = f.regions;
    const Index nb = static_cast<Index>(r.idx_omega_bdry.size());

    Rng rng(52);
    Vec g = rng.gaussian_vector(nb);
    Vec v = solve_local(f.A, r, f.F, g);

    // boundary data reproduced exactly, zero outside Omega
    for (Index i = 0; i < nb; ++i) CHECK(v[r.idx_omega_bdry[i]] == g[i]);
    for (Index i : r.idx_ext) CHECK(v[i] == 0.0);
    // stiffness equation on the interior rows
    Vec Av = f.A * v;
    for (Index i : r.idx_omega_int) {
        CHECK(std::abs(Av[i] - f.F[i]) <= 1e-9 * f.F.lpNorm<Eigen::Infinity>());
    }

    // flux is symmetric: <flux(g), g'> - <flux(g'), g> = 0 when F = 0
    Vec g2 = rng.gaussian_vector(nb);
    Vec zero = Vec::Zero(f.grid.N);
    Vec flux1 = local_dn(f.A, r, zero, g).g;
    Vec flux2 = local_dn(f.A, r, zero, g2).g;
    const double pairing = flux1.dot(g2) - flux2.dot(g);
    CHECK(std::abs(pairing) <= 1e-9 * (flux1.norm() * g2.norm() + 1.0));

    DNSample sample = local_dn(f.A, r, f.F, g);
    CHECK(sample.tag == "local");
    CHECK(sample.g.size() == nb);
}

TEST_CASE("gauge shift: invisible locally, visible nonlocally") {
    testbed::Fixture f = testbed::fixture_1d();
    const auto& r = f.regions;
    Rng rng(53);
    Vec phi = random_gauge_field(r, f.grid.N, rng);
    Vec F_shifted = gauge_source(f.A, r, f.F, phi);

    // the local flux cannot tell the two sources apart, for any boundary data
    const Index nb = static_cast<Index>(r.idx_omega_bdry.size());
    for (Index k = 0; k < nb; ++k) {
        Vec g = indicator(k, nb);
        Vec d1 = local_dn(f.A, r, f.F, g).g;
        Vec d2 = local_dn(f.A, r, F_shifted, g).g;
        CHECK((d1 - d2).lpNorm<Eigen::Infinity>() <= 1e-12 * d1.lpNorm<Eigen::Infinity>());
    }

    // the exterior measurement does
    ExteriorOperator E = make_exterior_operator(f.S, 0.5, f.regions);
    Vec zero = Vec::Zero(f.grid.N);
    Vec g1 = nonlocal_dn(E, f.F, zero).g;
    Vec g2 = nonlocal_dn(E, F_shifted, zero).g;
    CHECK((g1 - g2).norm() > 0.0);

    // support contract: phi must live on the admissible layer
    Vec bad_phi = Vec::Zero(f.grid.N);
    bad_phi[r.idx_omega_bdry[0]] = 1.0;
    CHECK_THROWS_AS(gauge_source(f.A, r, f.F, bad_phi), DataError);
}

TEST_CASE("random gauge field: support, normalization, determinism") {
    testbed::Fixture f = testbed::fixture_1d();
    Rng rng_a(54), rng_b(54), rng_c(55);
    Vec a = random_gauge_field(f.regions, f.grid.N, rng_a);
    Vec b = random_gauge_field(f.regions, f.grid.N, rng_b);
    Vec c = random_gauge_field(f.regions, f.grid.N, rng_c);
    CHECK((a - b).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((a - c).lpNorm<Eigen::Infinity>() > 0.0);
    CHECK(a.lpNorm<Eigen::Infinity>() == doctest::Approx(1.0).epsilon(1e-15));
    for (Index i = 0; i < f.grid.N; ++i) {
        bool on_support = false;
        for (Index j : f.regions.idx_gauge_support) on_support |= (i == j);
        if (!on_support) CHECK(a[i] == 0.0);
    }

    // a two-node-wide Omega has no admissible layer
    Grid g = build_grid(1, 1.0, 31);
    Regions thin = build_regions(g, {-0.55, -0.45}, {-0.075, 0.95});
    Rng rng_d(56);
    CHECK_THROWS_AS(random_gauge_field(thin, g.N, rng_d), GeometryError);
}

TEST_CASE("noise: level zero is the identity, seeds reproduce") {
    testbed::Fixture f = testbed::fixture_1d();
    ExteriorOperator E = make_exterior_operator(f.S, 0.5, f.regions);
    DNDataset data;
    data.samples.push_back(nonlocal_dn(E, f.F, Vec::Zero(f.grid.N)));
    Vec g_clean = data.samples[0].g;

    Rng rng(57);
    DNDataset copy = data;
    add_noise(copy, 0.0, rng);
    CHECK((copy.samples[0].g - g_clean).norm() == 0.0);

    Rng ra(58), rb(58);
    DNDataset da = data, db = data;
    add_noise(da, 0.01, ra);
    add_noise(db, 0.01, rb);
    CHECK((da.samples[0].g - db.samples[0].g).norm() == 0.0);
    CHECK((da.samples[0].g - g_clean).norm() > 0.0);
    CHECK((da.samples[0].f - data.samples[0].f).norm() == 0.0);  // inputs untouched
    CHECK(da.noise_level == 0.01);
}
