#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "specflow/circular_jacobi.hpp"
#include "specflow/errors.hpp"
#include "specflow/mc_oracle.hpp"

using namespace specflow;

namespace {

DensityCurve semicircle_curve(double radius, std::size_t n = 2001) {
    DensityCurve c;
    c.grid = linspace(-radius, radius, n);
    for (double x : c.grid)
        c.values.push_back(x * x < radius * radius
                               ? 2.0 / (kPi * radius * radius) * std::sqrt(radius * radius - x * x)
                               : 0.0);
    c.ensemble_tag = EnsembleTag::gaussian;
    return c;
}

}  // namespace

TEST_CASE("seed determinism") {
    GaussianFlowSpec spec{SpectralMeasure::delta(0.0), 0.25};
    auto a = sample_gaussian_flow(32, spec, 2, 3, 99);
    auto b = sample_gaussian_flow(32, spec, 2, 3, 99);
    CHECK(a.values == b.values);
    auto c = sample_gaussian_flow(32, spec, 2, 3, 100);
    CHECK(a.values != c.values);
}

TEST_CASE("trial count and dimension bookkeeping") {
    GaussianFlowSpec spec{SpectralMeasure::symmetric_pair(1.0), 0.1};
    auto s = sample_gaussian_flow(64, spec, 1, 5, 7);
    CHECK(s.values.size() == 64 * 5);
    CHECK(s.by_trial.size() == 5);
    CHECK(std::is_sorted(s.values.begin(), s.values.end()));
    CHECK_THROWS_AS(sample_gaussian_flow(64, spec, 2, 0, 7), Error);
    CHECK_THROWS_AS(sample_gaussian_flow(64, spec, 4, 3, 7), Error);
}

TEST_CASE("atom rounding guard") {
    SpectralMeasure m;
    m.atoms = {{-1.0, 1.0 / 3.0}, {1.0, 2.0 / 3.0}};
    m.total_mass = 1.0;
    GaussianFlowSpec spec{m, 0.1};
    try {
        sample_gaussian_flow(64, spec, 2, 1, 1);  // 64/3 is not near an integer
        FAIL("expected AtomRoundingError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AtomRoundingError);
    }
    CHECK_NOTHROW(sample_gaussian_flow(63, spec, 2, 1, 1));
}

TEST_CASE("gaussian sampler tracks the semicircle") {
    GaussianFlowSpec spec{SpectralMeasure::delta(0.0), 0.25};
    auto s = sample_gaussian_flow(128, spec, 2, 8, 12345);
    CHECK(wasserstein1(s, semicircle_curve(1.0)) < 0.03);
}

TEST_CASE("beta independence of the global law (small-size smoke)") {
    GaussianFlowSpec spec{SpectralMeasure::delta(0.0), 0.25};
    auto curve = semicircle_curve(1.0);
    const double w1 = wasserstein1(sample_gaussian_flow(128, spec, 1, 12, 5), curve);
    const double w2 = wasserstein1(sample_gaussian_flow(128, spec, 2, 12, 5), curve);
    CHECK(std::abs(w1 - w2) < 0.02);
}

TEST_CASE("trial scaling shrinks the distance to theory") {
    GaussianFlowSpec spec{SpectralMeasure::delta(0.0), 0.25};
    auto curve = semicircle_curve(1.0);
    std::vector<double> w4, w64;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        w4.push_back(wasserstein1(sample_gaussian_flow(64, spec, 2, 4, seed), curve));
        w64.push_back(wasserstein1(sample_gaussian_flow(64, spec, 2, 64, seed), curve));
    }
    std::sort(w4.begin(), w4.end());
    std::sort(w64.begin(), w64.end());
    CHECK(w64[2] < w4[2]);  // medians decrease
}

TEST_CASE("chiral sampler pre-checks") {
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(0.0), 0.125, 0.0};
    CHECK_THROWS_AS(sample_chiral_flow(64, 32, spec, 2, 1, 1), Error);  // n < m
    ChiralFlowSpec mis{SpectralMeasure::chiral_pair(0.0), 0.125, 1.0};
    try {
        sample_chiral_flow(64, 64, mis, 2, 1, 1);  // a_hat says n = 2m
        FAIL("expected InvalidArgument");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidArgument);
    }
}

TEST_CASE("chiral sampler tracks the Marchenko-Pastur law") {
    ChiralFlowSpec spec{SpectralMeasure::chiral_pair(0.0), 0.125, 0.0};
    auto s = sample_chiral_flow(96, 96, spec, 2, 8, 77);
    for (auto& v : s.values) v *= v;  // squared singular values
    DensityCurve mp;
    mp.grid = graded_grid(1e-8, 1.0, 3001, 2.0);
    for (double y : mp.grid) mp.values.push_back(marchenko_pastur(y, 0.125));
    mp.ensemble_tag = EnsembleTag::wishart;
    CHECK(wasserstein1(s, mp) < 0.04);
}

TEST_CASE("circular sampler basics") {
    auto s0 = sample_circular_flow(16, 4, 0.0, 3, 9);
    for (double v : s0.values) CHECK(v == 0.0);
    CHECK_THROWS_AS(sample_circular_flow(16, 4, 1.0, 3, 9), Error);  // steps < 50 tau

    auto s = sample_circular_flow(48, 4, 0.01, 6, 11);
    CHECK(s.values.size() == 48 * 6);
    // phases in (-pi, pi] and roughly within the semicircle support +-0.2
    for (double v : s.values) {
        CHECK(v > -kPi);
        CHECK(v <= kPi);
    }
    const double frac_inside =
        double(std::count_if(s.values.begin(), s.values.end(),
                             [](double v) { return std::abs(v) < 0.25; })) /
        double(s.values.size());
    CHECK(frac_inside > 0.99);
}

TEST_CASE("circular sampler matches the scaled semicircle at small time") {
    auto s = sample_circular_flow(96, 4, 0.01, 8, 2024);
    CHECK(wasserstein1(s, semicircle_curve(0.2)) < 0.01);
}

TEST_CASE("histogram and wasserstein plumbing") {
    EmpiricalSpectrum s;
    s.values = linspace(0.0, 1.0, 101);
    s.trials = 1;
    s.by_trial = {s.values};
    auto h = empirical_histogram(s, 20);
    CHECK(h.masses.size() == 20);
    double total = 0;
    for (double m : h.masses) total += m;
    CHECK(total == doctest::Approx(1.0));
    CHECK_THROWS_AS(empirical_histogram(s, 5), Error);

    // identical distributions: W1 = 0
    CHECK(wasserstein1(h, h) == doctest::Approx(0.0));
    // point mass at 0 vs point mass at 1: W1 = displacement = 1
    Histogram p0{{-1e-9, 1e-9}, {1.0}};
    Histogram p1{{1.0 - 1e-9, 1.0 + 1e-9}, {1.0}};
    CHECK(wasserstein1(p0, p1) == doctest::Approx(1.0).epsilon(1e-6));

    // histogram vs curve for matched distributions stays at the binning scale
    auto c = semicircle_curve(1.0);
    GaussianFlowSpec spec{SpectralMeasure::delta(0.0), 0.25};
    auto sample = sample_gaussian_flow(128, spec, 2, 16, 4);
    auto hh = empirical_histogram(sample, 64);
    CHECK(wasserstein1(hh, c) < 0.03);

    Histogram far{{100.0, 101.0}, {1.0}};
    CHECK_THROWS_AS(wasserstein1(far, c), Error);
}
