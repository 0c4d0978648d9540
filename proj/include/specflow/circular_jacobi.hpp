#pragma once

#include <optional>
#include <span>

#include "specflow/measures.hpp"
#include "specflow/rootflow.hpp"

namespace specflow {

struct CircularFlowSpec {
    SpectralMeasure initial;  // circle domain, total mass 1
    double tau_hat = 0.0;

    void validate() const;
};

// Unitary sub-block flow in trigonometric variables: even eigenphase density on
// (-pi, pi) with mass 2 (unit mass on (0, pi)), hard walls at 0 and pi.
struct JacobiFlowSpec {
    SpectralMeasure initial;  // circle domain, even extension, total mass 2
    double tau_hat = 0.0;
    double a_hat = 0.0;

    void validate() const;
};

// Solve G = (1/2) int rho0(mu) cot((z - tau G - mu)/2) dmu by damped Newton from the
// far-field seed -(i/2) sign(Im z) mass. Works for any total mass; the public
// circular API enforces mass 1.
GreenEvaluation solve_circular_equation(const SpectralMeasure& m0, double tau, Complex z,
                                        std::optional<Complex> warm = std::nullopt);

GreenEvaluation circular_green(const CircularFlowSpec& spec, Complex z,
                               std::optional<Complex> warm = std::nullopt);

DensityCurve circular_density(const CircularFlowSpec& spec, std::span<const double> phi_grid,
                              std::span<const double> eps_ladder);
DensityCurve circular_density(const CircularFlowSpec& spec, std::span<const double> phi_grid);

// Jacobi flow solved by the method of characteristics on the cot-kernel system.
// A failed cold start retries by descending in Im z with warm-chained shooting seeds.
GreenEvaluation jacobi_green(const JacobiFlowSpec& spec, Complex z,
                             std::optional<Complex> alpha_seed = std::nullopt,
                             Complex* alpha_out = nullptr);

DensityCurve jacobi_density(const JacobiFlowSpec& spec, std::span<const double> phi_grid,
                            std::span<const double> eps_ladder);
DensityCurve jacobi_density(const JacobiFlowSpec& spec, std::span<const double> phi_grid);

}  // namespace specflow
