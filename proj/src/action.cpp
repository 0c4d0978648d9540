#include "specflow/action.hpp"

#include <cmath>

#include "specflow/errors.hpp"

namespace specflow {

namespace {

void require_uniform(std::span<const double> g, const char* what) {
    require(g.size() >= 1, ErrorCode::InvalidArgument, std::string(what) + " grid empty");
    if (g.size() < 3) return;
    const double h = g[1] - g[0];
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        require(std::abs((g[i + 1] - g[i]) - h) < 1e-12 * std::max(1.0, std::abs(h)),
                ErrorCode::InvalidArgument, std::string(what) + " grid must be uniform");
}

}  // namespace

double Trajectory::slice_mass(std::size_t it) const {
    double s = 0;
    for (std::size_t ix = 0; ix + 1 < nx(); ++ix)
        s += 0.5 * (rho_at(it, ix) + rho_at(it, ix + 1)) * (space_grid[ix + 1] - space_grid[ix]);
    return s;
}

void Trajectory::validate() const {
    require(!time_grid.empty() && space_grid.size() >= 3, ErrorCode::InvalidArgument,
            "trajectory needs a time grid and >= 3 space points");
    require(std::abs(time_grid.front()) < 1e-14, ErrorCode::InvalidArgument,
            "time grid must start at 0");
    for (std::size_t i = 0; i + 1 < time_grid.size(); ++i)
        require(time_grid[i] < time_grid[i + 1], ErrorCode::InvalidArgument,
                "time grid must increase");
    require_uniform(time_grid, "time");
    require_uniform(space_grid, "space");
    require(rho.size() == nt() * nx() && v.size() == nt() * nx(), ErrorCode::InvalidArgument,
            "rho/v shape mismatch");
    for (double r : rho)
        require(r >= 0, ErrorCode::InvalidArgument, "rho must be nonnegative");
    const double m0 = slice_mass(0);
    for (std::size_t it = 1; it < nt(); ++it)
        require(std::abs(slice_mass(it) - m0) <= 1e-6, ErrorCode::MassDrift,
                "slice mass drifted beyond 1e-6");
}

namespace {

double space_then_time(const Trajectory& t, const std::vector<double>& per_slice) {
    if (t.nt() < 2) return 0.0;
    return simpson(t.time_grid, per_slice);
}

}  // namespace

double gaussian_action(const Trajectory& t) {
    t.validate();
    std::vector<double> s(t.nt());
    std::vector<double> f(t.nx());
    for (std::size_t it = 0; it < t.nt(); ++it) {
        for (std::size_t ix = 0; ix < t.nx(); ++ix) {
            const double r = t.rho_at(it, ix), vv = t.v_at(it, ix);
            f[ix] = r * (vv * vv + (kPi * kPi / 3.0) * r * r);
        }
        s[it] = simpson(t.space_grid, f);
    }
    return 0.5 * space_then_time(t, s);
}

double chiral_action(const Trajectory& t, double a_hat) {
    t.validate();
    const std::size_t nx = t.nx();
    const auto& p = t.space_grid;
    for (std::size_t i = 0; i < nx; ++i)
        require(std::abs(p[i] + p[nx - 1 - i]) < 1e-12 * std::max(1.0, std::abs(p[i])),
                ErrorCode::InvalidArgument, "space grid must be symmetric about 0");
    const bool has_zero_node = (nx % 2 == 1);
    if (a_hat > 0)
        require(!has_zero_node, ErrorCode::SingularIntegrand,
                "a_hat > 0 requires a grid excluding the p = 0 node");
    if (a_hat == 0.0) return gaussian_action(t);

    std::vector<double> s(t.nt());
    std::vector<double> f(nx);
    const std::size_t half = nx / 2;  // first positive node index
    for (std::size_t it = 0; it < t.nt(); ++it) {
        // regular part everywhere
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double r = t.rho_at(it, ix), vv = t.v_at(it, ix);
            f[ix] = r * (vv * vv + (kPi * kPi / 3.0) * r * r);
        }
        double acc = simpson(t.space_grid, f);
        // singular part 2a rho v / p: Simpson away from the central gap
        for (std::size_t ix = 0; ix < nx; ++ix)
            f[ix] = 2.0 * a_hat * t.rho_at(it, ix) * t.v_at(it, ix) / p[ix];
        const std::span<const double> pl(p.data(), half);
        const std::span<const double> fl(f.data(), half);
        const std::span<const double> pr(p.data() + half, nx - half);
        const std::span<const double> fr(f.data() + half, nx - half);
        acc += simpson(pl, fl) + simpson(pr, fr);
        // central gap [-p1, p1]: cubic through the four nearest nodes, odd terms cancel
        {
            const double x1 = p[half - 2], x2 = p[half - 1], x3 = p[half], x4 = p[half + 1];
            const double y1 = f[half - 2], y2 = f[half - 1], y3 = f[half], y4 = f[half + 1];
            // Newton divided differences for the interpolating cubic
            const double d12 = (y2 - y1) / (x2 - x1);
            const double d23 = (y3 - y2) / (x3 - x2);
            const double d34 = (y4 - y3) / (x4 - x3);
            const double d123 = (d23 - d12) / (x3 - x1);
            const double d234 = (d34 - d23) / (x4 - x2);
            const double d1234 = (d234 - d123) / (x4 - x1);
            // expand to monomial coefficients c0..c3
            double c0 = y1 - d12 * x1 + d123 * x1 * x2 - d1234 * x1 * x2 * x3;
            double c2 = d123 - d1234 * (x1 + x2 + x3);
            const double a = x3;  // = p1
            acc += 2.0 * c0 * a + (2.0 / 3.0) * c2 * a * a * a;
        }
        s[it] = acc;
    }
    return 0.5 * space_then_time(t, s);
}

std::pair<double, double> hilbert_identity_check(const DensityCurve& rho_slice) {
    const auto& g = rho_slice.grid;
    const auto& v = rho_slice.values;
    require(g.size() >= 5, ErrorCode::InvalidArgument, "slice too small");
    SpectralMeasure m = SpectralMeasure::from_density(g, v);
    std::vector<double> lhs_f(g.size(), 0.0), rhs_f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        rhs_f[i] = v[i] * v[i] * v[i];
        if (v[i] > 1e-12 && i > 0 && i + 1 < g.size()) {
            const double h = hilbert_transform(m, g[i]);
            lhs_f[i] = v[i] * h * h;
        }
    }
    const double lhs = simpson(g, lhs_f);
    const double rhs = (kPi * kPi / 3.0) * simpson(g, rhs_f);
    return {lhs, rhs};
}

}  // namespace specflow
