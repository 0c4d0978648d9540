#include "specflow/gaussian_flow.hpp"

#include <cmath>

#include "specflow/detail/poly.hpp"
#include "specflow/errors.hpp"

namespace specflow {

using detail::Poly;

void GaussianFlowSpec::validate() const {
    initial.validate();
    require(initial.domain == Domain::real_line, ErrorCode::InvalidArgument,
            "Gaussian flow needs a real-line initial measure");
    require(std::abs(initial.total_mass - 1.0) < 1e-10, ErrorCode::InvalidArgument,
            "Gaussian flow needs a unit-mass initial measure");
    require(tau_hat >= 0, ErrorCode::InvalidArgument, "tau_hat must be nonnegative");
}

namespace {

// polynomial in g for atomic initial data:
//   g * prod_i ((z - x_i) - tau g) - sum_i w_i prod_{j != i} ((z - x_j) - tau g) = 0
Poly atomic_polynomial(const SpectralMeasure& m, double tau, Complex z) {
    Poly acc = {Complex(0, 0), Complex(1, 0)};  // g
    for (const auto& a : m.atoms) acc = detail::poly_mul(acc, Poly{z - a.location, -tau});
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        Poly term = {Complex(1, 0)};
        for (std::size_t j = 0; j < m.atoms.size(); ++j) {
            if (j == i) continue;
            term = detail::poly_mul(term, Poly{z - m.atoms[j].location, -tau});
        }
        detail::poly_axpy(acc, term, -m.atoms[i].weight);
    }
    return acc;
}

GreenEvaluation eval_from_root(const Poly& p, Complex z, Complex g) {
    const double res = std::abs(detail::poly_eval(p, g)) / detail::poly_scale_at(p, g);
    return {z, g, res, res < 1e-10};
}

Complex select_by_descent(const SpectralMeasure& m, double tau, Complex z, double mass) {
    // track the physical branch down from the far field where mass/z identifies it
    const double span = std::max(1.0, std::max(std::abs(m.support_min()), std::abs(m.support_max())));
    double im0 = 8.0 * (span + std::sqrt(tau) + std::abs(z));
    const double side = z.imag() >= 0 ? 1.0 : -1.0;
    Complex prev;
    {
        const Complex z0(z.real(), side * im0);
        auto roots = solve_polynomial(atomic_polynomial(m, tau, z0));
        prev = herglotz_select(roots, z0, std::nullopt, mass);
    }
    const double floor_im = std::max(std::abs(z.imag()), 1e-9);
    double im = im0;
    while (im > floor_im * 1.001) {
        im = std::max(im * 0.6, floor_im);
        const Complex zk(z.real(), side * im);
        auto roots = solve_polynomial(atomic_polynomial(m, tau, zk));
        prev = herglotz_select(roots, zk, prev, mass);
    }
    return prev;
}

}  // namespace

GreenEvaluation evolve_green(const GaussianFlowSpec& spec, Complex z, std::optional<Complex> warm) {
    spec.validate();
    const SpectralMeasure& m = spec.initial;
    const double tau = spec.tau_hat;
    if (tau == 0.0) {
        const Complex g = green_of_measure(m, z);
        return {z, g, 0.0, true};
    }

    if (!m.has_ac() && m.atoms.size() <= 6) {
        const Poly p = atomic_polynomial(m, tau, z);
        auto roots = solve_polynomial(p);
        Complex g;
        if (warm) {
            g = herglotz_select(roots, z, warm, m.total_mass);
        } else {
            const Complex tracked = select_by_descent(m, tau, z, m.total_mass);
            g = herglotz_select(roots, z, tracked, m.total_mass);
        }
        return eval_from_root(p, z, g);
    }

    auto F = [&](Complex g, Complex zz) -> Complex {
        return g - green_of_measure(m, zz - tau * g);
    };
    auto dF = [&](Complex g, Complex zz) -> Complex {
        return 1.0 + tau * green_of_measure_deriv(m, zz - tau * g);
    };
    if (warm) return newton_solve(F, dF, z, *warm, 1e-11);
    ContinuationPlan plan = make_descent_plan(z);
    auto evals = continuation_solve(F, dF, plan, m.total_mass / plan.start_z);
    return evals.back();
}

DensityCurve evolve_density(const GaussianFlowSpec& spec, std::span<const double> grid,
                            std::span<const double> eps_ladder) {
    spec.validate();
    std::optional<Complex> warm;
    auto green_at = [&](Complex z) -> Complex {
        try {
            GreenEvaluation ev = evolve_green(spec, z, warm);
            warm = ev.g;
            return ev.g;
        } catch (const Error&) {
            // warm start left the Newton basin (possible right at a spectral edge);
            // retry with full branch tracking from the far field
            GreenEvaluation ev = evolve_green(spec, z, std::nullopt);
            warm = ev.g;
            return ev.g;
        }
    };
    DensityCurve c = stieltjes_invert(green_at, grid, eps_ladder, EnsembleTag::gaussian,
                                      spec.tau_hat);
    return c;
}

DensityCurve evolve_density(const GaussianFlowSpec& spec, std::span<const double> grid) {
    const auto ladder = default_eps_ladder();
    return evolve_density(spec, grid, ladder);
}

double wigner_semicircle(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return 2.0 / kPi * std::sqrt(1.0 - x * x);
}

double two_delta_merged_density(double y) {
    const double s = 27.0 - 8.0 * y * y;
    if (s <= 0.0) return 0.0;
    const double t = std::sqrt(s);
    const double c = 3.0 * std::sqrt(3.0);
    return std::cbrt(std::abs(y)) / (2.0 * std::sqrt(3.0) * kPi) *
           (std::cbrt((c + t) * (c + t)) - std::cbrt((c - t) * (c - t)));
}

}  // namespace specflow
