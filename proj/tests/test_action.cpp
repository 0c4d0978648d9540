#include <doctest.h>

#include <cmath>

#include "specflow/action.hpp"
#include "specflow/errors.hpp"
#include "specflow/gaussian_flow.hpp"
#include "specflow/rng.hpp"

using namespace specflow;

namespace {

Trajectory constant_trajectory(double tau, std::size_t nt, std::size_t nx) {
    Trajectory t;
    t.time_grid = linspace(0.0, tau, nt);
    t.space_grid = linspace(0.0, 1.0, nx);
    t.rho.assign(nt * nx, 1.0);
    t.v.assign(nt * nx, 0.0);
    return t;
}

Trajectory smooth_trajectory(double tau, std::size_t nt, std::size_t nx) {
    // rho a fixed smooth bump of unit mass, v a smooth shear
    Trajectory t;
    t.time_grid = linspace(0.0, tau, nt);
    t.space_grid = linspace(-1.0, 1.0, nx);
    for (std::size_t it = 0; it < nt; ++it)
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = t.space_grid[ix];
            t.rho.push_back(0.75 * (1.0 - x * x));
            t.v.push_back(0.3 * std::sin(kPi * x) * (1.0 + t.time_grid[it]));
        }
    return t;
}

}  // namespace

TEST_CASE("static uniform slab") {
    // rho = 1 on [0,1], v = 0, tau = 1: S = (1/2) * (pi^2/3) = pi^2/6
    auto t = constant_trajectory(1.0, 9, 201);
    CHECK(gaussian_action(t) == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-8));
}

TEST_CASE("empty time interval") {
    Trajectory t;
    t.time_grid = {0.0};
    t.space_grid = linspace(0.0, 1.0, 101);
    t.rho.assign(101, 1.0);
    t.v.assign(101, 0.7);
    CHECK(gaussian_action(t) == 0.0);
}

TEST_CASE("time additivity") {
    auto t = smooth_trajectory(1.0, 17, 201);
    const double whole = gaussian_action(t);
    // split at tau/2 (index 8)
    auto first = t, second = t;
    first.time_grid = std::vector<double>(t.time_grid.begin(), t.time_grid.begin() + 9);
    first.rho = std::vector<double>(t.rho.begin(), t.rho.begin() + 9 * 201);
    first.v = std::vector<double>(t.v.begin(), t.v.begin() + 9 * 201);
    second.time_grid = std::vector<double>(9);
    for (int i = 0; i < 9; ++i) second.time_grid[i] = t.time_grid[8 + i] - t.time_grid[8];
    second.rho = std::vector<double>(t.rho.begin() + 8 * 201, t.rho.end());
    second.v = std::vector<double>(t.v.begin() + 8 * 201, t.v.end());
    CHECK(gaussian_action(first) + gaussian_action(second) ==
          doctest::Approx(whole).epsilon(1e-10));
}

TEST_CASE("positivity") {
    Philox rng(3, 0);
    for (int rep = 0; rep < 10; ++rep) {
        Trajectory t;
        t.time_grid = linspace(0.0, 0.5, 5);
        t.space_grid = linspace(-1.0, 1.0, 41);
        for (std::size_t k = 0; k < 5 * 41; ++k) {
            t.rho.push_back(0.5);  // constant slices keep the mass fixed
            t.v.push_back(2.0 * rng.uniform01() - 1.0);
        }
        CHECK(gaussian_action(t) >= 0.0);
    }
}

TEST_CASE("grid convergence on a smooth trajectory") {
    const double coarse = gaussian_action(smooth_trajectory(1.0, 9, 101));
    const double fine = gaussian_action(smooth_trajectory(1.0, 17, 201));
    CHECK(std::abs(fine - coarse) < 1e-6 * std::max(1.0, std::abs(fine)));
}

TEST_CASE("mass drift is rejected") {
    auto t = constant_trajectory(1.0, 5, 101);
    for (std::size_t ix = 0; ix < 101; ++ix) t.rho[4 * 101 + ix] = 1.0 + 1e-4;
    CHECK_THROWS_AS(gaussian_action(t), Error);
}

TEST_CASE("chiral action reduces to the gaussian one at zero charge") {
    Trajectory t;
    t.time_grid = linspace(0.0, 0.8, 9);
    const std::size_t nx = 200;  // even count, symmetric, no zero node
    const double hi = 1.0, h = 2.0 * hi / nx;
    for (std::size_t i = 0; i < nx; ++i) t.space_grid.push_back(-hi + h * (0.5 + double(i)));
    for (std::size_t it = 0; it < 9; ++it)
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double x = t.space_grid[ix];
            t.rho.push_back(0.75 * (1.0 - x * x) + 0.01);
            t.v.push_back(0.2 * x * x * x);
        }
    CHECK(chiral_action(t, 0.0) == doctest::Approx(gaussian_action(t)).epsilon(1e-12));
}

TEST_CASE("chiral 1/p term against the doubled half-line oracle") {
    // even rho, odd v: the integrand (2a/p) rho v is even; integrate the half line
    // with plain quadrature and double it
    Trajectory t;
    t.time_grid = linspace(0.0, 1.0, 9);
    const std::size_t nx = 400;
    const double hi = 1.0, h = 2.0 * hi / nx;
    for (std::size_t i = 0; i < nx; ++i) t.space_grid.push_back(-hi + h * (0.5 + double(i)));
    auto rho_f = [](double x) { return 0.75 * (1.0 - x * x) + 0.01; };
    auto v_f = [](double x) { return 0.4 * std::sin(kPi * x); };  // odd
    for (std::size_t it = 0; it < 9; ++it)
        for (std::size_t ix = 0; ix < nx; ++ix) {
            t.rho.push_back(rho_f(t.space_grid[ix]));
            t.v.push_back(v_f(t.space_grid[ix]));
        }
    const double a_hat = 1.0;
    const double s = chiral_action(t, a_hat);
    const double s0 = gaussian_action(t);
    // oracle for the singular part: time-independent integrand here
    auto f = [&](double p) { return 2.0 * a_hat * rho_f(p) * v_f(p) / p; };
    auto grid = graded_grid(1e-8, hi, 400001, 1.0);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid[i]);
    const double half_line = trapezoid(grid, vals);
    const double want = s0 + 0.5 * (2.0 * half_line) * 1.0;  // (1/2) int dt of a constant
    CHECK(s == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("zero trajectory has zero action") {
    Trajectory t;
    t.time_grid = linspace(0.0, 1.0, 5);
    const std::size_t nx = 40;
    const double h = 2.0 / nx;
    for (std::size_t i = 0; i < nx; ++i) t.space_grid.push_back(-1.0 + h * (0.5 + double(i)));
    t.rho.assign(5 * nx, 0.0);
    t.v.assign(5 * nx, 0.0);
    CHECK(chiral_action(t, 1.0) == 0.0);
}

TEST_CASE("singular integrand guard") {
    Trajectory t;
    t.time_grid = linspace(0.0, 1.0, 3);
    t.space_grid = linspace(-1.0, 1.0, 41);  // odd count includes p = 0
    t.rho.assign(3 * 41, 0.1);
    t.v.assign(3 * 41, 0.0);
    CHECK_THROWS_AS(chiral_action(t, 1.0), Error);
    CHECK_NOTHROW(chiral_action(t, 0.0));
}

TEST_CASE("hilbert identity for the semicircle") {
    auto grid = linspace(-1.0, 1.0, 3001);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = wigner_semicircle(grid[i]);
    auto [lhs, rhs] = hilbert_identity_check({grid, vals, 0.25, EnsembleTag::gaussian});
    CHECK(rhs == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(lhs - rhs) < 1e-3);
}

TEST_CASE("hilbert identity for smooth even test densities") {
    // smooth compactly supported bumps: the identity holds within quadrature accuracy
    auto bump = [](double x, double w) {
        const double u = x / w;
        return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
    };
    for (double w : {0.6, 0.8, 1.0, 1.2, 1.5}) {
        auto grid = linspace(-w, w, 4001);
        std::vector<double> vals(grid.size());
        double mass = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = bump(grid[i], w);
        mass = trapezoid(grid, vals);
        for (auto& v : vals) v /= mass;
        auto [lhs, rhs] = hilbert_identity_check({grid, vals, 0.0, EnsembleTag::generic});
        CHECK(std::abs(lhs - rhs) < 1e-3 * std::max(1.0, rhs));
    }
}

TEST_CASE("hilbert identity on the uniform slab") {
    // the slab's transform has log singularities at the edges; resolve them
    const std::vector<double> edges = {-1.0, 1.0};
    auto grid = refined_grid(-1.0, 1.0, 1501, edges, 64, 0.02);
    std::vector<double> vals(grid.size(), 0.5);
    auto [lhs, rhs] = hilbert_identity_check({grid, vals, 0.0, EnsembleTag::generic});
    CHECK(std::abs(lhs - rhs) < 1e-3 * std::max(1.0, rhs));
}

TEST_CASE("zero slice maps to zero") {
    auto grid = linspace(-1.0, 1.0, 101);
    std::vector<double> vals(grid.size(), 0.0);
    auto [lhs, rhs] = hilbert_identity_check({grid, vals, 0.0, EnsembleTag::generic});
    CHECK(lhs == 0.0);
    CHECK(rhs == 0.0);
}
