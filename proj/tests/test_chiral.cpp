#include <doctest.h>

#include <cmath>

#include "specflow/chiral_flow.hpp"
#include "specflow/errors.hpp"
#include "specflow/gaussian_flow.hpp"
#include "specflow/rng.hpp"

using namespace specflow;

TEST_CASE("delta-initial chiral density matches the widened semicircle") {
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(0.0), 0.5, 0.0};
    const std::vector<double> grid = {0.0, 1.0};
    auto c = chiral_density(spec, grid);
    CHECK(c.values[0] == doctest::Approx(2.0 / kPi).epsilon(1e-5));
    CHECK(c.values[1] == doctest::Approx(chiral_semicircle(1.0, 0.5)).epsilon(1e-5));
}

TEST_CASE("delta-initial quartic law at a_hat = 1") {
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(0.0), 0.5, 1.0};
    const std::vector<double> grid = {std::sqrt(3.0)};
    auto c = chiral_density(spec, grid);
    CHECK(c.values[0] == doctest::Approx(2.0 * std::sqrt(2.0) / (kPi * std::sqrt(3.0)))
                             .epsilon(1e-4));
}

TEST_CASE("pair-initial green satisfies the reduced cubic") {
    const double b = 1.0, ah = 1.0, tau = 0.5;
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(b), tau, ah};
    Philox rng(17, 0);
    for (int k = 0; k < 20; ++k) {
        const Complex z(4 * rng.uniform01() - 2, 0.1 + rng.uniform01());
        auto ev = evolve_green_chiral(spec, z);
        const Complex gh = ev.g * tau / z;
        const Complex res =
            gh * (z * z * (1.0 - gh) * (1.0 - gh) - ah * (1.0 - gh) - b * b) - (1.0 - gh);
        CHECK(std::abs(res) < 1e-10);
    }
}

TEST_CASE("block green combines the even part with the zero-mode pole") {
    ChiralFlowSpec a0{SpectralMeasure::chiral_pair(0.0), 0.5, 0.0};
    const Complex z(0.9, 0.6);
    CHECK(std::abs(chiral_block_green(a0, z) - evolve_green_chiral(a0, z).g / 2.0) < 1e-12);

    ChiralFlowSpec a1{SpectralMeasure::chiral_pair(0.0), 0.5, 1.0};
    const Complex z2(0, 2);
    const Complex want = evolve_green_chiral(a1, z2).g / 3.0 + (1.0 / 3.0) / z2;
    CHECK(std::abs(chiral_block_green(a1, z2) - want) < 1e-12);
}

TEST_CASE("block green far field carries unit mass") {
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(1.0), 0.5, 1.0};
    const Complex z(1e5, 1e5);
    CHECK(std::abs(z * chiral_block_green(spec, z) - 1.0) < 1e-4);
}

TEST_CASE("block green against the mixture-measure oracle") {
    // independent route: the block density is a weighted mixture of the even density
    // and an atom at zero; evaluate its transform directly from a dense solver curve
    const double ah = 1.0, tau = 0.5;
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(0.0), tau, ah};
    auto grid = linspace(-3.0, 3.0, 2401);
    auto dens = chiral_density(spec, grid);
    SpectralMeasure mix;
    mix.ac_grid = dens.grid;
    for (double v : dens.values) mix.ac_values.push_back(v / (2.0 + ah));
    mix.atoms = {{0.0, ah / (2.0 + ah)}};
    mix.total_mass = mix.computed_mass();
    const Complex z(0, 2);
    const Complex oracle = green_of_measure(mix, z);
    CHECK(std::abs(chiral_block_green(spec, z) - oracle) < 1e-4);
}

TEST_CASE("block green satisfies the inhomogeneous Burgers equation") {
    const double ah = 1.0;
    ChiralFlowSpec base{SpectralMeasure::chiral_pair(0.0), 0.5, ah};
    const Complex z(0.9, 1.1);
    const double ht = 1e-4, hz = 1e-4;
    auto g_at = [&](double tau, Complex zz) {
        ChiralFlowSpec s{SpectralMeasure::chiral_pair(0.0), tau, ah};
        return chiral_block_green(s, zz);
    };
    const Complex dgdt = (g_at(0.5 + ht, z) - g_at(0.5 - ht, z)) / (2 * ht);
    const Complex dgdz = (g_at(0.5, z + hz) - g_at(0.5, z - hz)) / (2 * hz);
    const Complex g = g_at(0.5, z);
    const Complex res = dgdt + (2.0 + ah) * g * dgdz + (ah * ah / (2.0 + ah)) / (z * z * z);
    CHECK(std::abs(res) < 1e-6);
}

TEST_CASE("wishart green reproduces the Marchenko-Pastur value") {
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(0.0), 0.125, 0.0};
    const std::vector<double> grid = {0.5};
    auto c = wishart_density(spec, grid);
    CHECK(c.values[0] == doctest::Approx(2.0 / kPi).epsilon(1e-5));
}

TEST_CASE("wishart zero time is the initial Stieltjes transform") {
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(1.0), 0.0, 0.0};
    const Complex zW(0.3, 0.8);
    auto ev = wishart_green(spec, zW);
    CHECK(std::abs(ev.g - 1.0 / (zW - 1.0)) < 1e-12);  // atom at y = b^2 = 1
}

TEST_CASE("wishart implicit-solution residual") {
    Philox rng(23, 0);
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(1.0), 0.5, 1.0};
    for (int k = 0; k < 20; ++k) {
        const Complex zW(6 * rng.uniform01() - 1.0, 0.2 + 2 * rng.uniform01());
        auto ev = wishart_green(spec, zW);
        // residual against the Dozier-Silverstein form is stored on the evaluation
        CHECK(ev.residual < 1e-9);
        CHECK(ev.branch_ok);
        // and the implicit solution in terms of the initial transform holds:
        // g = F g0(z F^2 - 2 a tau F), F = 1 - 2 tau g, g0(w) = 1/(w - 1)
        const Complex F = 1.0 - 2.0 * spec.tau_hat * ev.g;
        const Complex w = zW * F * F - 2.0 * spec.a_hat * spec.tau_hat * F;
        CHECK(std::abs(ev.g - F / (w - 1.0)) < 1e-9);
    }
}

TEST_CASE("wishart rejects the positive real axis") {
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(0.0), 0.5, 0.0};
    CHECK_THROWS_AS(wishart_green(spec, Complex(1.0, 0.0)), Error);
}

TEST_CASE("closed forms") {
    CHECK(raney_number(2, 1, 2) == 2);  // Catalan C_2
    CHECK(raney_number(3, 2, 2) == 7);
    CHECK(raney_number(3, 2, 0) == 1);
    CHECK(raney_number(3, 2, 1) == 2);
    CHECK(raney_number(3, 2, 3) == 30);
    CHECK(raney_number(3, 2, 4) == 143);
    CHECK_THROWS_AS(raney_number(1, 1, 2), Error);
    CHECK_THROWS_AS(raney_number(3, 4, 2), Error);

    // quartic support edges at a_hat = 1: positive roots of -x^4 + 6x^2 - 1
    const double e1 = std::sqrt(2.0) - 1.0, e2 = std::sqrt(2.0) + 1.0;
    CHECK(quartic_law(e1 - 1e-9, 1.0) == 0.0);
    CHECK(quartic_law(e2 + 1e-9, 1.0) == 0.0);
    CHECK(quartic_law(e1 + 1e-4, 1.0) > 0.0);

    // hard-edge divergence of the squared-variable law: y^{-1/2} growth
    const double tau = 0.125;
    CHECK(marchenko_pastur(1e-10, tau) * std::sqrt(1e-10) ==
          doctest::Approx(1.0 / (4.0 * kPi * tau) * std::sqrt(8.0 * tau)).epsilon(1e-4));
    CHECK(marchenko_pastur(1.5, tau) == 0.0);

    CHECK(chiral_semicircle(0.0, 0.5) == doctest::Approx(2.0 / kPi));
    CHECK(chiral_semicircle(2.0 * std::sqrt(1.0), 0.5) == 0.0);
}

TEST_CASE("raney density moments match the raney numbers") {
    auto grid = double_graded_grid(1e-10, 27.0 / 4.0, 16001, 3.0);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = raney_density(grid[i]);
    DensityCurve c{grid, vals, 0.5, EnsembleTag::wishart};
    for (int k = 0; k <= 5; ++k)
        CHECK(moments(c, k) ==
              doctest::Approx(double(raney_number(3, 2, k))).epsilon(1e-3));
}

TEST_CASE("solved flows stay even with unit half-line mass") {
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(1.0), 0.5, 1.0};
    auto grid = linspace(-3.2, 3.2, 1281);
    auto c = chiral_density(spec, grid);
    double asym = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        asym = std::max(asym, std::abs(c.values[i] - c.values[grid.size() - 1 - i]));
    CHECK(asym < 1e-6);
    CHECK(c.mass() == doctest::Approx(2.0).epsilon(1e-4));  // unit mass per half-line
}

TEST_CASE("gaussian-chiral bridge at a_hat = 0") {
    // rho(y; tau) = (1/2) rho_c(y; tau/2) for matched initial data
    const double tau = 0.5;
    GaussianFlowSpec g{SpectralMeasure::symmetric_pair(1.0), tau};
    ChiralFlowSpec c{SpectralMeasure::chiral_pair(1.0), tau / 2, 0.0};
    auto grid = linspace(-2.6, 2.6, 301);
    auto dg = evolve_density(g, grid);
    auto dc = chiral_density(c, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(dg.values[i] - 0.5 * dc.values[i]) < 1e-5);
}

TEST_CASE("hard edge detaches for positive a_hat") {
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(1.0), 0.5, 1.0};
    auto grid = linspace(1e-3, 0.05, 25);
    auto c = chiral_density(spec, grid);
    for (double v : c.values) CHECK(v < 1e-6);
}

TEST_CASE("three viewpoints agree on the density") {
    const double ah = 1.0, tau = 0.5;
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(0.0), tau, ah};
    auto xgrid = linspace(0.45, 2.4, 79);
    auto rho_c = chiral_density(spec, xgrid);
    // block view: ac part is rho_c / (2 + a)
    const auto ladder = default_eps_ladder();
    auto rho_ch = stieltjes_invert(
        [&](Complex z) {
            return chiral_block_green(spec, z);
        },
        xgrid, ladder, EnsembleTag::chiral, tau);
    // squared-variable view: rho_W(x^2) * 2x = rho_c(x) on the half line
    std::vector<double> ygrid(xgrid.size());
    for (std::size_t i = 0; i < xgrid.size(); ++i) ygrid[i] = xgrid[i] * xgrid[i];
    auto rho_w = wishart_density(spec, ygrid);
    for (std::size_t i = 0; i < xgrid.size(); ++i) {
        CHECK(std::abs(rho_ch.values[i] * (2.0 + ah) - rho_c.values[i]) < 1e-5);
        CHECK(std::abs(rho_w.values[i] * 2.0 * xgrid[i] - rho_c.values[i]) < 1e-5);
    }
}

TEST_CASE("hard-edge route through the squared variable") {
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(1.0), 0.5, 1.0};
    // |z| < 1e-3 near the real axis goes through the squared-variable solver
    auto ev = evolve_green_chiral(spec, Complex(5e-4, 1e-6));
    CHECK(finite(ev.g));
    CHECK(std::abs(ev.g) < 1.0);  // detached support; transform is small near 0
    CHECK_THROWS_AS(evolve_green_chiral(spec, Complex(0, 0)), Error);
}

TEST_CASE("chiral spec validation") {
    ChiralFlowSpec bad{SpectralMeasure::symmetric_pair(1.0), 0.5, 0.0};  // mass 1, not 2
    CHECK_THROWS_AS(bad.validate(), Error);
}
