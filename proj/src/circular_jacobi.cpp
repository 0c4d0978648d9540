#include "specflow/circular_jacobi.hpp"

#include <cmath>

#include "specflow/characteristics.hpp"
#include "specflow/errors.hpp"

namespace specflow {

void CircularFlowSpec::validate() const {
    initial.validate();
    require(initial.domain == Domain::circle, ErrorCode::InvalidArgument,
            "circular flow needs a circle-domain initial measure");
    require(std::abs(initial.total_mass - 1.0) < 1e-10, ErrorCode::InvalidArgument,
            "circular initial measure must have mass 1");
    require(tau_hat >= 0, ErrorCode::InvalidArgument, "tau_hat must be nonnegative");
}

void JacobiFlowSpec::validate() const {
    initial.validate();
    require(initial.domain == Domain::circle, ErrorCode::InvalidArgument,
            "Jacobi flow needs a circle-domain initial measure");
    require(initial.symmetry == Symmetry::even, ErrorCode::InvalidArgument,
            "Jacobi initial measure must be stored with its even extension");
    require(std::abs(initial.total_mass - 2.0) < 1e-10, ErrorCode::InvalidArgument,
            "Jacobi initial measure must have total mass 2");
    require(tau_hat >= 0 && a_hat >= 0, ErrorCode::InvalidArgument,
            "tau_hat and a_hat must be nonnegative");
    if (a_hat > 0) {
        for (const auto& a : initial.atoms)
            require(std::abs(a.location) > 1e-12 && std::abs(std::abs(a.location) - kPi) > 1e-12,
                    ErrorCode::InvalidInitialData,
                    "a_hat > 0 forbids initial mass at phi = 0 or pi");
        if (initial.has_ac())
            for (std::size_t i = 0; i < initial.ac_grid.size(); ++i)
                if (initial.ac_values[i] > 0)
                    require(std::abs(initial.ac_grid[i]) > 1e-9 &&
                                std::abs(std::abs(initial.ac_grid[i]) - kPi) > 1e-9,
                            ErrorCode::InvalidInitialData,
                            "a_hat > 0 forbids initial mass at phi = 0 or pi");
    }
}

namespace {

double wrap_to_period(double x) {
    double r = std::remainder(x, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

}  // namespace

GreenEvaluation solve_circular_equation(const SpectralMeasure& m0, double tau, Complex z,
                                        std::optional<Complex> warm) {
    require(z.imag() != 0.0, ErrorCode::PoleProximity, "circular solve needs Im z != 0");
    if (tau == 0.0) {
        const Complex g = green_of_measure(m0, z);
        return {z, g, 0.0, true};
    }
    auto F = [&](Complex g, Complex zz) -> Complex {
        return g - green_of_measure(m0, zz - tau * g);
    };
    auto dF = [&](Complex g, Complex zz) -> Complex {
        return 1.0 + tau * green_of_measure_deriv(m0, zz - tau * g);
    };
    const Complex seed = warm ? *warm
                              : Complex(0.0, -0.5 * (z.imag() > 0 ? 1.0 : -1.0) * m0.total_mass);
    GreenEvaluation ev;
    try {
        ev = newton_solve(F, dF, z, seed, 1e-12);
    } catch (const Error&) {
        if (warm) {
            ev = newton_solve(F, dF, z,
                              Complex(0.0, -0.5 * (z.imag() > 0 ? 1.0 : -1.0) * m0.total_mass),
                              1e-12);
        } else {
            // descend in Im z with warm starts
            const double side = z.imag() > 0 ? 1.0 : -1.0;
            double im = 8.0 * (1.0 + tau);
            Complex g(0.0, -0.5 * side * m0.total_mass);
            while (im > std::abs(z.imag())) {
                im = std::max(0.7 * im, std::abs(z.imag()));
                ev = newton_solve(F, dF, Complex(z.real(), side * im), g, 1e-12);
                g = ev.g;
            }
            ev = newton_solve(F, dF, z, g, 1e-12);
        }
    }
    const Complex arg = z - tau * ev.g;
    const Complex wrapped(wrap_to_period(arg.real()), arg.imag());
    require(m0.distance_to_support(wrapped) > 1e-6, ErrorCode::PoleProximity,
            "z - tau G landed within 1e-6 of the initial support");
    return ev;
}

GreenEvaluation circular_green(const CircularFlowSpec& spec, Complex z,
                               std::optional<Complex> warm) {
    spec.validate();
    return solve_circular_equation(spec.initial, spec.tau_hat, z, warm);
}

DensityCurve circular_density(const CircularFlowSpec& spec, std::span<const double> phi_grid,
                              std::span<const double> eps_ladder) {
    spec.validate();
    for (double p : phi_grid)
        require(p > -kPi - 1e-12 && p <= kPi + 1e-12, ErrorCode::InvalidArgument,
                "phi grid must lie in (-pi, pi]");
    std::optional<Complex> warm;
    auto green_at = [&](Complex z) -> Complex {
        try {
            GreenEvaluation ev = solve_circular_equation(spec.initial, spec.tau_hat, z, warm);
            warm = ev.g;
            return ev.g;
        } catch (const Error&) {
            GreenEvaluation ev = solve_circular_equation(spec.initial, spec.tau_hat, z,
                                                         std::nullopt);
            warm = ev.g;
            return ev.g;
        }
    };
    return stieltjes_invert(green_at, phi_grid, eps_ladder, EnsembleTag::circular, spec.tau_hat);
}

DensityCurve circular_density(const CircularFlowSpec& spec, std::span<const double> phi_grid) {
    const auto ladder = default_eps_ladder();
    return circular_density(spec, phi_grid, ladder);
}

GreenEvaluation jacobi_green(const JacobiFlowSpec& spec, Complex z,
                             std::optional<Complex> alpha_seed, Complex* alpha_out) {
    spec.validate();
    const SpectralMeasure m0 = spec.initial;
    auto g0 = [m0](Complex w) { return green_of_measure(m0, w); };
    if (spec.tau_hat == 0.0) {
        if (alpha_out) *alpha_out = z;
        return {z, g0(z), 0.0, true};
    }
    CharSystem sys = CharSystem::jacobi(spec.a_hat, g0);
    auto cold_seed = [&](Complex zz) {
        return zz - spec.tau_hat * (spec.a_hat * half_cot(zz) + g0(zz));
    };
    if (alpha_seed) {
        try {
            return invert_to_target(sys, z, spec.tau_hat, *alpha_seed, alpha_out);
        } catch (const Error&) {
            // fall through to the cold path
        }
    }
    try {
        return invert_to_target(sys, z, spec.tau_hat, cold_seed(z), alpha_out);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CausticEncountered) throw;
        // the first-order seed fails inside sharp bumps; descend from high Im z
        // where it is reliable, warm-chaining the characteristic label
        const double side = z.imag() >= 0 ? 1.0 : -1.0;
        double im = 2.0;
        Complex alpha = cold_seed(Complex(z.real(), side * im));
        GreenEvaluation ev;
        while (true) {
            const Complex zk(z.real(), side * std::max(im, std::abs(z.imag())));
            ev = invert_to_target(sys, zk, spec.tau_hat, alpha, &alpha);
            if (im <= std::abs(z.imag())) break;
            im *= 0.55;
        }
        if (alpha_out) *alpha_out = alpha;
        return ev;
    }
}

DensityCurve jacobi_density(const JacobiFlowSpec& spec, std::span<const double> phi_grid,
                            std::span<const double> eps_ladder) {
    spec.validate();
    for (double p : phi_grid)
        require(p > 0 && p < kPi, ErrorCode::InvalidArgument, "Jacobi grid must lie in (0, pi)");
    std::optional<Complex> alpha_warm;
    auto green_at = [&](Complex z) -> Complex {
        Complex alpha;
        GreenEvaluation ev = jacobi_green(spec, z, alpha_warm, &alpha);
        alpha_warm = alpha;
        return ev.g;
    };
    return stieltjes_invert(green_at, phi_grid, eps_ladder, EnsembleTag::jacobi, spec.tau_hat);
}

DensityCurve jacobi_density(const JacobiFlowSpec& spec, std::span<const double> phi_grid) {
    const auto ladder = default_eps_ladder();
    return jacobi_density(spec, phi_grid, ladder);
}

}  // namespace specflow
