#include <doctest.h>

#include <cmath>

#include "specflow/chiral_flow.hpp"
#include "specflow/errors.hpp"
#include "specflow/gaussian_flow.hpp"
#include "specflow/measures.hpp"
#include "specflow/rng.hpp"

using namespace specflow;

namespace {

SpectralMeasure semicircle_measure(std::size_t n = 4001) {
    const std::vector<double> edges = {-1.0, 1.0};
    auto grid = refined_grid(-1.0, 1.0, n, edges);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = wigner_semicircle(grid[i]);
    SpectralMeasure m = SpectralMeasure::from_density(std::move(grid), std::move(vals),
                                                      Domain::real_line, Symmetry::even);
    return m;
}

Complex semicircle_green(Complex z) {
    // delta-initial flow at tau = 1/4: 2 (z - sqrt(z^2 - 1)), Herglotz branch
    Complex r = std::sqrt(z * z - 1.0);
    if (r.imag() * z.imag() < 0) r = -r;
    return 2.0 * (z - r);
}

}  // namespace

TEST_CASE("green of a single atom") {
    auto m = SpectralMeasure::delta(0.0);
    CHECK(green_of_measure(m, Complex(2, 0)) == Complex(0.5, 0));
}

TEST_CASE("green of the symmetric pair") {
    auto m = SpectralMeasure::symmetric_pair(1.0);
    const Complex g = green_of_measure(m, Complex(2, 0));
    CHECK(std::abs(g - Complex(2.0 / 3.0, 0)) < 1e-15);
}

TEST_CASE("green of the gridded semicircle at z = 1.25") {
    auto m = semicircle_measure();
    const Complex g = green_of_measure(m, Complex(1.25, 0));
    CHECK(std::abs(g - Complex(1.0, 0)) < 1e-6);
}

TEST_CASE("green of the uniform circle measure") {
    auto m = SpectralMeasure::uniform_circle();
    const Complex g = green_of_measure(m, Complex(0, 1));
    CHECK(std::abs(g - Complex(0, -0.5)) < 1e-8);
}

TEST_CASE("green errors") {
    SpectralMeasure empty;
    CHECK_THROWS_AS(green_of_measure(empty, Complex(1, 1)), Error);
    auto m = SpectralMeasure::delta(0.5);
    try {
        green_of_measure(m, Complex(0.5, 1e-14));
        FAIL("expected PoleProximity");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::PoleProximity);
    }
}

TEST_CASE("hilbert transform of the semicircle") {
    auto m = semicircle_measure();
    CHECK(hilbert_transform(m, 0.5) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::abs(hilbert_transform(m, 0.0)) < 1e-10);
}

TEST_CASE("hilbert transform of an atom") {
    auto m = SpectralMeasure::delta(1.0);
    CHECK(hilbert_transform(m, 3.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(hilbert_transform(m, 1.0), Error);
}

TEST_CASE("hilbert transform of even measures vanishes at 0") {
    auto pair = SpectralMeasure::symmetric_pair(0.7);
    CHECK(std::abs(hilbert_transform(pair, 0.0)) < 1e-14);
    auto u = SpectralMeasure::uniform(-1.0, 1.0);
    CHECK(std::abs(hilbert_transform(u, 0.0)) < 1e-10);
}

TEST_CASE("stieltjes inversion of the closed-form semicircle green") {
    const auto ladder = default_eps_ladder();
    const std::vector<double> grid = {0.0, 2.0};
    auto curve = stieltjes_invert([](Complex z) { return semicircle_green(z); }, grid, ladder);
    CHECK(curve.values[0] == doctest::Approx(2.0 / kPi).epsilon(1e-6));
    CHECK(std::abs(curve.values[1]) < 1e-8);
}

TEST_CASE("stieltjes inversion of the Marchenko-Pastur green at tau = 1/8") {
    // wishart delta-initial green: 2 tau z g^2 - z g + 1 = 0, Herglotz branch
    auto mp_green = [](Complex z) {
        const double tau = 0.125;
        const Complex disc = std::sqrt(z * z - 8.0 * tau * z);
        Complex g = (z - disc) / (4.0 * tau * z);
        if (g.imag() * z.imag() > 0) g = (z + disc) / (4.0 * tau * z);
        return g;
    };
    const auto ladder = default_eps_ladder();
    const std::vector<double> grid = {0.5};
    auto curve = stieltjes_invert(mp_green, grid, ladder);
    CHECK(curve.values[0] == doctest::Approx(2.0 / kPi).epsilon(1e-6));
}

TEST_CASE("stieltjes inversion flags garbage ladders") {
    // a non-Herglotz artificial green whose ladder values diverge
    auto bad = [](Complex z) { return Complex(0, -1.0 / (z.imag() * z.imag())); };
    const std::vector<double> grid = {0.0};
    const std::vector<double> ladder = {1e-3, 5e-4, 2.5e-4};
    CHECK_THROWS_AS(stieltjes_invert(bad, grid, ladder), Error);
}

TEST_CASE("stieltjes inversion flags genuinely negative densities") {
    auto anti = [](Complex) { return Complex(0, 1.0); };  // rho = -1/pi everywhere
    const std::vector<double> grid = {0.0};
    const std::vector<double> ladder = {1e-3, 5e-4, 2.5e-4};
    try {
        stieltjes_invert(anti, grid, ladder);
        FAIL("expected NegativeDensity");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeDensity);
    }
}

TEST_CASE("moments of the semicircle") {
    auto m = semicircle_measure(2001);
    DensityCurve c{m.ac_grid, m.ac_values, 0.25, EnsembleTag::gaussian};
    CHECK(moments(c, 0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(moments(c, 2) == doctest::Approx(0.25).epsilon(1e-5));
    CHECK(std::abs(moments(c, 1)) < 1e-12);
    CHECK_THROWS_AS(moments(c, 21), Error);
}

TEST_CASE("first moment of the Raney density") {
    auto grid = double_graded_grid(1e-10, 27.0 / 4.0, 16001, 3.0);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = raney_density(grid[i]);
    DensityCurve c{grid, vals, 0.5, EnsembleTag::wishart};
    CHECK(moments(c, 1) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("support detection") {
    auto m = semicircle_measure(2001);
    DensityCurve c{m.ac_grid, m.ac_values, 0.25, EnsembleTag::gaussian};
    auto iv = support_detect(c, 1e-4);
    REQUIRE(iv.size() == 1);
    const double step = 2.0 / 2000.0;
    CHECK(std::abs(iv[0].lo + 1.0) <= 2 * step);
    CHECK(std::abs(iv[0].hi - 1.0) <= 2 * step);

    // merged critical two-delta law: edges at +-sqrt(27/8)
    const double edge = std::sqrt(27.0 / 8.0);
    auto grid = linspace(-2.0, 2.0, 4001);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = two_delta_merged_density(grid[i]);
    DensityCurve c2{grid, vals, 1.0, EnsembleTag::gaussian};
    auto iv2 = support_detect(c2, 1e-4);
    REQUIRE(iv2.size() == 1);
    CHECK(std::abs(iv2[0].lo + edge) <= 2 * 1e-3);
    CHECK(std::abs(iv2[0].hi - edge) <= 2 * 1e-3);

    DensityCurve zero{grid, std::vector<double>(grid.size(), 0.0), 0.0, EnsembleTag::generic};
    CHECK_THROWS_AS(support_detect(zero, 1e-4), Error);
}

TEST_CASE("support detection merges hairline gaps") {
    std::vector<double> grid = linspace(0.0, 1.0, 11);
    std::vector<double> vals = {1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 1};  // single below-threshold point
    DensityCurve c{grid, vals, 0.0, EnsembleTag::generic};
    auto iv = support_detect(c, 0.5);
    CHECK(iv.size() == 1);
}

TEST_CASE("Herglotz sign and conjugate symmetry on random measures") {
    Philox rng(20240809, 0);
    for (int rep = 0; rep < 25; ++rep) {
        SpectralMeasure m;
        const int atoms = 1 + int(rng.next_u32() % 3);
        for (int a = 0; a < atoms; ++a)
            m.atoms.push_back({2.0 * rng.uniform01() - 1.0, 0.2 + rng.uniform01()});
        if (rep % 2 == 0) {
            auto grid = linspace(-1.5, 0.8, 301);
            std::vector<double> vals(grid.size());
            for (auto& v : vals) v = rng.uniform01();
            m.ac_grid = grid;
            m.ac_values = vals;
        }
        m.total_mass = m.computed_mass();
        const Complex z(4.0 * rng.uniform01() - 2.0, 0.05 + 3.0 * rng.uniform01());
        const Complex g = green_of_measure(m, z);
        CHECK(g.imag() < 0);
        const Complex gc = green_of_measure(m, std::conj(z));
        CHECK(std::abs(gc - std::conj(g)) < 1e-12 * (1 + std::abs(g)));
    }
}

TEST_CASE("far-field decay") {
    auto m = semicircle_measure(1001);
    const Complex z(1e6, 1e6);
    CHECK(std::abs(z * green_of_measure(m, z) - m.total_mass) < 1e-6);
    auto pair = SpectralMeasure::symmetric_pair(0.3);
    CHECK(std::abs(z * green_of_measure(pair, z) - 1.0) < 1e-6);
}

TEST_CASE("inversion round-trip reproduces the ac part") {
    auto m = semicircle_measure(2001);
    auto grid = linspace(-1.0, 1.0, 2001);
    const auto ladder = default_eps_ladder();
    auto curve = stieltjes_invert([&](Complex z) { return green_of_measure(m, z); }, grid, ladder);
    double l1 = 0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double d0 = std::abs(curve.values[i] - wigner_semicircle(grid[i]));
        const double d1 = std::abs(curve.values[i + 1] - wigner_semicircle(grid[i + 1]));
        l1 += 0.5 * (d0 + d1) * (grid[i + 1] - grid[i]);
    }
    CHECK(l1 < 1e-3);
}

TEST_CASE("hilbert transform equals the half-sum of boundary values") {
    auto m = semicircle_measure(2001);
    const std::vector<double> xs = {-0.6, -0.1, 0.3, 0.8};
    const auto ladder = default_eps_ladder();
    for (double x : xs) {
        std::vector<double> re(ladder.size());
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            const Complex gp = green_of_measure(m, Complex(x, ladder[i]));
            const Complex gm = green_of_measure(m, Complex(x, -ladder[i]));
            re[i] = 0.5 * (gp + gm).real();
        }
        auto [val, corr] = extrapolate_to_zero(ladder, re);
        CHECK(hilbert_transform(m, x) == doctest::Approx(val).epsilon(1e-5));
    }
}

TEST_CASE("measure validation catches inconsistencies") {
    SpectralMeasure m;
    m.atoms = {{0.0, 1.0}};
    m.total_mass = 2.0;
    CHECK_THROWS_AS(m.validate(), Error);
    m.total_mass = 1.0;
    CHECK_NOTHROW(m.validate());
    m.ac_grid = {0.0, -1.0};
    m.ac_values = {0.5, 0.5};
    CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("even symmetry validation") {
    SpectralMeasure m;
    m.atoms = {{-1.0, 0.5}, {1.0, 0.5}};
    m.symmetry = Symmetry::even;
    m.total_mass = 1.0;
    CHECK_NOTHROW(m.validate());
    m.atoms[0].weight = 0.4;
    m.atoms[1].weight = 0.6;
    CHECK_THROWS_AS(m.validate(), Error);
}
