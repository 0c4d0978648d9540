#include "specflow/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "specflow/errors.hpp"

namespace specflow {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    require(n >= 2, ErrorCode::InvalidArgument, "linspace needs n >= 2");
    std::vector<double> g(n);
    const double h = (hi - lo) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + h * double(i);
    g.back() = hi;
    return g;
}

std::vector<double> refined_grid(double lo, double hi, std::size_t n_base,
                                 std::span<const double> edges, int factor, double width_frac) {
    require(hi > lo, ErrorCode::InvalidArgument, "refined_grid needs hi > lo");
    const double h = (hi - lo) / double(n_base - 1);
    const double w = width_frac * (hi - lo);
    auto near_edge = [&](double x) {
        for (double e : edges)
            if (std::abs(x - e) <= w) return true;
        return false;
    };
    std::vector<double> g;
    g.push_back(lo);
    double x = lo;
    while (x < hi - 1e-15 * (hi - lo)) {
        const double step = near_edge(x) ? h / factor : h;
        x = std::min(x + step, hi);
        g.push_back(x);
    }
    g.back() = hi;
    return g;
}

std::vector<double> graded_grid(double lo, double hi, std::size_t n, double power) {
    require(n >= 2 && power > 0, ErrorCode::InvalidArgument, "graded_grid parameters");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = double(i) / double(n - 1);
        g[i] = lo + (hi - lo) * std::pow(u, power);
    }
    g.back() = hi;
    return g;
}

std::vector<double> double_graded_grid(double lo, double hi, std::size_t n, double power) {
    require(n >= 2 && power >= 1, ErrorCode::InvalidArgument, "double_graded_grid parameters");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = double(i) / double(n - 1);
        const double up = std::pow(u, power);
        const double vp = std::pow(1.0 - u, power);
        g[i] = lo + (hi - lo) * up / (up + vp);
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

double trapezoid(std::span<const double> grid, std::span<const double> values) {
    double s = 0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        s += 0.5 * (values[i] + values[i + 1]) * (grid[i + 1] - grid[i]);
    return s;
}

double simpson(std::span<const double> grid, std::span<const double> values) {
    const std::size_t n = grid.size();
    if (n < 2) return 0;
    if (n == 2) return 0.5 * (values[0] + values[1]) * (grid[1] - grid[0]);
    double s = 0;
    std::size_t i = 0;
    while (i + 2 < n || (i + 2 == n)) {
        if (i + 2 > n - 1) break;
        // quadratic through (x0,x1,x2); exact weights for non-uniform spacing
        const double x0 = grid[i], x1 = grid[i + 1], x2 = grid[i + 2];
        const double h0 = x1 - x0, h1 = x2 - x1, H = x2 - x0;
        const double w0 = H * (2 * h0 - h1) / (6 * h0);
        const double w1 = H * H * H / (6 * h0 * h1);
        const double w2 = H * (2 * h1 - h0) / (6 * h1);
        s += w0 * values[i] + w1 * values[i + 1] + w2 * values[i + 2];
        i += 2;
    }
    if (i == n - 2)  // odd interval count: trapezoid on the last cell
        s += 0.5 * (values[n - 2] + values[n - 1]) * (grid[n - 1] - grid[n - 2]);
    return s;
}

std::pair<double, double> extrapolate_to_zero(std::span<const double> xs, std::span<const double> ys) {
    const std::size_t n = xs.size();
    require(n >= 2 && ys.size() == n, ErrorCode::InvalidArgument, "extrapolation needs >= 2 samples");
    // Neville tableau at t = 0, updated in place; Q[i] ends as T[i][i]
    std::vector<double> q(ys.begin(), ys.end());
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = n - 1; i >= j; --i) {
            q[i] = ((0.0 - xs[i - j]) * q[i] - (0.0 - xs[i]) * q[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    return {q[n - 1], std::abs(q[n - 1] - q[n - 2])};
}

Complex half_cot(Complex u) {
    const double im = u.imag();
    if (im > 40.0) return Complex(0.0, -0.5);
    if (im < -40.0) return Complex(0.0, 0.5);
    const Complex h = 0.5 * u;
    return 0.5 * std::cos(h) / std::sin(h);
}

Complex half_cot_deriv(Complex u) {
    const double im = u.imag();
    if (std::abs(im) > 40.0) return Complex(0.0, 0.0);
    const Complex s = std::sin(0.5 * u);
    return -0.25 / (s * s);
}

Complex cot_kernel_remainder(Complex u) {
    const double twopi = 2 * kPi;
    if (std::abs(u) < 0.5) {
        // 0.5cot(u/2) - 1/u = -u/12 - u^3/720 - u^5/30240 - ...
        const Complex u2 = u * u;
        Complex near = -u / 12.0 - u * u2 / 720.0 - u * u2 * u2 / 30240.0;
        return near - 1.0 / (u - twopi) - 1.0 / (u + twopi);
    }
    return half_cot(u) - 1.0 / u - 1.0 / (u - twopi) - 1.0 / (u + twopi);
}

Complex cot_kernel_remainder_deriv(Complex u) {
    const double twopi = 2 * kPi;
    auto sq = [](Complex w) { return w * w; };
    if (std::abs(u) < 0.5) {
        const Complex u2 = u * u;
        Complex near = -1.0 / 12.0 - u2 / 240.0 - u2 * u2 / 6048.0;
        return near + 1.0 / sq(u - twopi) + 1.0 / sq(u + twopi);
    }
    return half_cot_deriv(u) + 1.0 / sq(u) + 1.0 / sq(u - twopi) + 1.0 / sq(u + twopi);
}

}  // namespace specflow
