#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "specflow/measures.hpp"
#include "specflow/rootflow.hpp"

namespace specflow {

// Chiral/Wishart additive flow. The initial measure is the even full-line singular
// value density with total mass 2 (unit mass per half-line); a_hat is the rectangular
// asymmetry n/m - 1 in the large-size limit.
struct ChiralFlowSpec {
    SpectralMeasure initial;
    double tau_hat = 0.0;
    double a_hat = 0.0;

    void validate() const;
};

// Green's function of the even singular-value density (mass-2 transform). Atomic data
// with at most three symmetric pairs reduces to a polynomial of degree 2k+1; gridded
// data goes through far-field Newton continuation. Near the hard edge (|z| < 1e-3 on
// the real axis) the evaluation is routed through the squared-variable Green's
// function, which is regular at the origin.
GreenEvaluation evolve_green_chiral(const ChiralFlowSpec& spec, Complex z,
                                    std::optional<Complex> warm = std::nullopt);

// Green's function of the full block-matrix spectrum: G^c/(2+a) + (a/(2+a))/z.
Complex chiral_block_green(const ChiralFlowSpec& spec, Complex z);

// Green's function of the squared singular values (eigenvalues of W^dagger W).
// Solved in the squared variable; consistent with G^c under z -> z^2 and checked
// against the Dozier-Silverstein residual.
GreenEvaluation wishart_green(const ChiralFlowSpec& spec, Complex zW,
                              std::optional<Complex> warm = std::nullopt);

DensityCurve chiral_density(const ChiralFlowSpec& spec, std::span<const double> grid,
                            std::span<const double> eps_ladder);
DensityCurve chiral_density(const ChiralFlowSpec& spec, std::span<const double> grid);
DensityCurve wishart_density(const ChiralFlowSpec& spec, std::span<const double> grid,
                             std::span<const double> eps_ladder);
DensityCurve wishart_density(const ChiralFlowSpec& spec, std::span<const double> grid);

// closed-form laws
double chiral_semicircle(double x, double tau_hat);   // delta-initial, a_hat = 0
double marchenko_pastur(double y, double tau_hat);    // squared-variable version
double quartic_law(double x, double a_hat);           // delta-initial, tau_hat = 1/2
double raney_density(double x);                       // +-1 initial, a_hat = 0, squared values
std::int64_t raney_number(int p, int r, int k);       // moments of the (p, r) Raney law

}  // namespace specflow
