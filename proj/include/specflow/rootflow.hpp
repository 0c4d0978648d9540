#pragma once

#include <array>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "specflow/numerics.hpp"

namespace specflow {

// One solved Green's-function value with branch metadata.
struct GreenEvaluation {
    Complex z;
    Complex g;
    double residual = 0.0;
    bool branch_ok = false;
};

struct ContinuationPlan {
    Complex start_z;
    std::vector<Complex> path;  // targets visited in order, warm-started
    double newton_tol = 1e-11;
    int max_damping_halvings = 40;

    void validate() const;  // path spacing must stay inside the Newton basin
};

// Path from the far field straight down/over to `target`, spacing bounded by
// 0.5 * min(1, |Im z|). start at |z| ~ far_radius on the same side of the axis.
ContinuationPlan make_descent_plan(Complex target, double far_radius = 1e3);

std::array<Complex, 2> solve_quadratic(Complex c2, Complex c1, Complex c0);
std::array<Complex, 3> solve_cubic(Complex c3, Complex c2, Complex c1, Complex c0);

// All roots of sum_k coeffs[k] w^k (ascending order), companion-matrix eigenvalues
// polished by Newton. Degenerate leading coefficients are stripped.
std::vector<Complex> solve_polynomial(std::vector<Complex> coeffs);

// Herglotz branch pick: continuity against `prev` when given, else the root with
// Im(root) Im(z) < 0, ties broken by closeness to mass/z.
Complex herglotz_select(std::span<const Complex> roots, Complex z, std::optional<Complex> prev,
                        double mass);

using ImplicitFn = std::function<Complex(Complex g, Complex z)>;

// Damped-Newton homotopy continuation of F(g, z) = 0 along plan.path, warm-started
// from the previous solution. g_start must satisfy |F(g_start, start_z)| < 1e-6.
std::vector<GreenEvaluation> continuation_solve(const ImplicitFn& F, const ImplicitFn& dFdg,
                                                const ContinuationPlan& plan, Complex g_start,
                                                std::ostream* diagnostics = nullptr);

// Single damped-Newton solve at fixed z (shared with the circular solver).
GreenEvaluation newton_solve(const ImplicitFn& F, const ImplicitFn& dFdg, Complex z, Complex g0,
                             double tol, int max_damping_halvings = 40,
                             std::ostream* diagnostics = nullptr);

}  // namespace specflow
