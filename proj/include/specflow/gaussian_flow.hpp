#pragma once

#include <optional>
#include <span>

#include "specflow/measures.hpp"
#include "specflow/rootflow.hpp"

namespace specflow {

// Gaussian additive flow: the Green's function at scaled time tau_hat solves
// G = G0(z - tau_hat G) with G0 the transform of the initial unit-mass measure.
struct GaussianFlowSpec {
    SpectralMeasure initial;  // real-line domain, total mass 1
    double tau_hat = 0.0;

    void validate() const;
};

// Solve the functional equation at one z. Atomic initial data with at most six atoms
// reduces to a polynomial; otherwise damped-Newton continuation from the far field.
// `warm` short-circuits branch tracking when a nearby solution is known.
GreenEvaluation evolve_green(const GaussianFlowSpec& spec, Complex z,
                             std::optional<Complex> warm = std::nullopt);

DensityCurve evolve_density(const GaussianFlowSpec& spec, std::span<const double> grid,
                            std::span<const double> eps_ladder);
DensityCurve evolve_density(const GaussianFlowSpec& spec, std::span<const double> grid);

// delta-initial golden density at tau_hat = 1/4
double wigner_semicircle(double x);
// merged critical two-delta golden density (support |y| <= sqrt(27/8)); the flow
// configuration it describes is initial atoms at +-1/sqrt(2) evolved to tau_hat = 1/2
double two_delta_merged_density(double y);

}  // namespace specflow
