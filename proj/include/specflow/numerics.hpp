#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace specflow {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<double> linspace(double lo, double hi, std::size_t n);

// Uniform base grid with spacing divided by `factor` inside `width_frac * (hi - lo)`
// of each listed edge. Used for curves with square-root edges.
std::vector<double> refined_grid(double lo, double hi, std::size_t n_base,
                                 std::span<const double> edges, int factor = 8,
                                 double width_frac = 0.02);

// Power-law graded grid lo + (hi - lo) * u^power, u uniform on [0, 1]. Concentrates
// points near `lo`; used for integrable singular endpoints (x^{-1/2}, x^{-1/3}).
std::vector<double> graded_grid(double lo, double hi, std::size_t n, double power);

// Grid concentrated at both endpoints via u^p / (u^p + (1-u)^p).
std::vector<double> double_graded_grid(double lo, double hi, std::size_t n, double power);

double trapezoid(std::span<const double> grid, std::span<const double> values);

// Composite Simpson on a possibly non-uniform grid (quadratic through point triples,
// trapezoid on a trailing odd interval).
double simpson(std::span<const double> grid, std::span<const double> values);

// Neville polynomial extrapolation of samples (x_i, y_i) to x = 0.
// Returns {value, |last diagonal correction|}.
std::pair<double, double> extrapolate_to_zero(std::span<const double> xs, std::span<const double> ys);

// 0.5 * cot(u / 2) with overflow-safe asymptotics for large |Im u|.
Complex half_cot(Complex u);
// d/du of half_cot: -1 / (4 sin^2(u/2)).
Complex half_cot_deriv(Complex u);

// 0.5*cot(u/2) - 1/u - 1/(u - 2pi) - 1/(u + 2pi); analytic for |u| < 4pi, series near 0.
Complex cot_kernel_remainder(Complex u);
// derivative of the remainder
Complex cot_kernel_remainder_deriv(Complex u);

inline bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace specflow
