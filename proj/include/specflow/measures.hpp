#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specflow/numerics.hpp"

namespace specflow {

enum class Symmetry { even, none };
enum class Domain { real_line, positive_halfline, circle };
enum class EnsembleTag { generic, gaussian, chiral, wishart, circular, jacobi };

std::string to_string(Domain d);
std::string to_string(Symmetry s);
std::string to_string(EnsembleTag t);

struct Atom {
    double location;
    double weight;
};

// A spectral measure: point masses plus a gridded absolutely continuous part.
// Conventions: Gaussian and circular flows use total mass 1; the chiral flow uses
// the even full-line density with total mass 2 (unit mass per half-line).
struct SpectralMeasure {
    std::vector<Atom> atoms;
    std::vector<double> ac_grid;    // strictly increasing; empty if purely atomic
    std::vector<double> ac_values;  // nonnegative, aligned with ac_grid
    Symmetry symmetry = Symmetry::none;
    Domain domain = Domain::real_line;
    double total_mass = 1.0;

    bool empty() const { return atoms.empty() && ac_grid.size() < 2; }
    bool has_ac() const { return ac_grid.size() >= 2; }
    double atom_mass() const;
    double ac_mass() const;
    double computed_mass() const { return atom_mass() + ac_mass(); }

    double support_min() const;
    double support_max() const;
    // Euclidean distance from z to the support set (atoms and ac cells with positive mass).
    double distance_to_support(Complex z) const;

    void validate() const;  // throws InvalidMeasure

    static SpectralMeasure delta(double x, Domain dom = Domain::real_line);
    // (delta(x-a) + delta(x+a))/2, the unit-mass symmetric pair
    static SpectralMeasure symmetric_pair(double a);
    // chiral convention: delta(x-b) + delta(x+b), total mass 2 (b = 0 gives 2*delta)
    static SpectralMeasure chiral_pair(double b);
    static SpectralMeasure uniform(double a, double b, std::size_t n = 801, double mass = 1.0,
                                   Domain dom = Domain::real_line);
    static SpectralMeasure from_density(std::vector<double> grid, std::vector<double> values,
                                        Domain dom = Domain::real_line,
                                        Symmetry sym = Symmetry::none);
    static SpectralMeasure uniform_circle();
};

struct DensityCurve {
    std::vector<double> grid;
    std::vector<double> values;
    double tau_hat = 0.0;
    EnsembleTag ensemble_tag = EnsembleTag::generic;

    double mass() const;
    double value_at(double x) const;  // linear interpolation, 0 outside
};

// int rho(y)/(w - y) dy over a gridded density (derivative = true gives d/dw).
// Switches to pole-subtracted quadrature when w approaches the grid segment.
Complex ac_cauchy_transform(std::span<const double> grid, std::span<const double> values,
                            Complex w, bool derivative = false);

// Stieltjes/Green transform: sum_i w_i/(z - x_i) + int rho(y)/(z - y) dy for line domains,
// (1/2) int cot((z - y)/2) dmu(y) on the circle. Near-axis evaluations switch to
// pole-subtracted quadrature automatically.
Complex green_of_measure(const SpectralMeasure& m, Complex z);
// z-derivative of the transform (same quadrature rules).
Complex green_of_measure_deriv(const SpectralMeasure& m, Complex z);

// Principal-value Hilbert transform at real x (cot kernel on the circle).
double hilbert_transform(const SpectralMeasure& m, double x);

inline std::vector<double> default_eps_ladder() { return {1e-3, 5e-4, 2.5e-4}; }

// Sokhotski-Plemelj inversion: rho(x) = -(1/pi) Im G(x + i eps), Richardson-extrapolated
// across the ladder.
DensityCurve stieltjes_invert(const std::function<Complex(Complex)>& green_at,
                              std::span<const double> x_grid, std::span<const double> eps_ladder,
                              EnsembleTag tag = EnsembleTag::generic, double tau_hat = 0.0);

// k-th moment of the curve by composite Simpson; k <= 20.
double moments(const DensityCurve& curve, int k);

struct Interval {
    double lo;
    double hi;
};

// Maximal grid intervals with values > threshold; gaps shorter than 2 grid steps are merged.
std::vector<Interval> support_detect(const DensityCurve& curve, double threshold);

}  // namespace specflow
