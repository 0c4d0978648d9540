#pragma once

#include <span>
#include <utility>
#include <vector>

#include "specflow/measures.hpp"

namespace specflow {

// Discretized hydrodynamic trajectory (rho, v = grad of the momentum potential) on
// uniform time x space grids; matrices stored flat, row-major (time index slowest).
struct Trajectory {
    std::vector<double> time_grid;   // increasing, starts at 0
    std::vector<double> space_grid;  // increasing, uniform
    std::vector<double> rho;         // nt x nx, nonnegative
    std::vector<double> v;           // nt x nx

    std::size_t nt() const { return time_grid.size(); }
    std::size_t nx() const { return space_grid.size(); }
    double rho_at(std::size_t it, std::size_t ix) const { return rho[it * nx() + ix]; }
    double v_at(std::size_t it, std::size_t ix) const { return v[it * nx() + ix]; }
    double slice_mass(std::size_t it) const;

    void validate() const;  // grid shape/uniformity and slice-mass drift
};

// S = (1/2) int dt int dp rho (v^2 + (pi^2/3) rho^2), composite Simpson in both axes.
double gaussian_action(const Trajectory& t);

// adds the (2 a / p) v term; space grid must be symmetric about 0 and exclude the
// p = 0 node when a_hat > 0 (the central gap is integrated from a local polynomial fit)
double chiral_action(const Trajectory& t, double a_hat);

// returns {int rho H[rho]^2, (pi^2/3) int rho^3}
std::pair<double, double> hilbert_identity_check(const DensityCurve& rho_slice);

}  // namespace specflow
