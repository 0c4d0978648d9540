#pragma once

#include <functional>
#include <vector>

#include "specflow/numerics.hpp"
#include "specflow/rootflow.hpp"

namespace specflow {

// First-order system A dG/dtau + B dG/dz = C reduced to ODEs along characteristics:
// dtau/dbeta = A, dz/dbeta = B, dG/dbeta = C, with z(alpha,0) = alpha and
// G(alpha,0) = initial_green(alpha).
struct CharSystem {
    using Coef = std::function<Complex(Complex g, Complex z, double t)>;
    Coef A, B, C;
    std::function<Complex(Complex)> initial_green;
    // all systems built here have constant A; beta_end = tau / a_const
    double a_const = 1.0;

    static CharSystem gaussian(std::function<Complex(Complex)> g0);
    static CharSystem chiral(double a_hat, std::function<Complex(Complex)> g0);
    static CharSystem wishart(double a_hat, std::function<Complex(Complex)> g0);
    static CharSystem jacobi(double a_hat, std::function<Complex(Complex)> g0);
};

struct CharState {
    double beta;
    Complex z;
    Complex g;
    double t;
};

struct CharPath {
    Complex alpha;
    std::vector<CharState> states;

    const CharState& terminal() const { return states.back(); }
};

// RK4 with step-halving error control (local error < 1e-10 per unit beta).
CharPath integrate_characteristic(const CharSystem& sys, Complex alpha, double beta_end,
                                  double step);

// Secant shooting on alpha so the characteristic lands on z_target at time tau_hat.
// `alpha_out`, when given, receives the converged characteristic label for warm
// restarts at nearby targets.
GreenEvaluation invert_to_target(const CharSystem& sys, Complex z_target, double tau_hat,
                                 Complex alpha_seed, Complex* alpha_out = nullptr);

}  // namespace specflow
