#include "specflow/characteristics.hpp"

#include <cmath>

#include "specflow/errors.hpp"

namespace specflow {

CharSystem CharSystem::gaussian(std::function<Complex(Complex)> g0) {
    CharSystem s;
    s.A = [](Complex, Complex, double) { return Complex(1, 0); };
    s.B = [](Complex g, Complex, double) { return g; };
    s.C = [](Complex, Complex, double) { return Complex(0, 0); };
    s.initial_green = std::move(g0);
    s.a_const = 1.0;
    return s;
}

CharSystem CharSystem::chiral(double a_hat, std::function<Complex(Complex)> g0) {
    CharSystem s;
    s.A = [](Complex, Complex, double) { return Complex(1, 0); };
    s.B = [a_hat](Complex g, Complex z, double) { return g + a_hat / z; };
    s.C = [a_hat](Complex g, Complex z, double) { return a_hat * g / (z * z); };
    s.initial_green = std::move(g0);
    s.a_const = 1.0;
    return s;
}

CharSystem CharSystem::wishart(double a_hat, std::function<Complex(Complex)> g0) {
    CharSystem s;
    s.A = [](Complex, Complex, double) { return Complex(0.5, 0); };
    s.B = [a_hat](Complex g, Complex z, double) { return a_hat + 2.0 * z * g; };
    s.C = [](Complex g, Complex, double) { return -g * g; };
    s.initial_green = std::move(g0);
    s.a_const = 0.5;
    return s;
}

CharSystem CharSystem::jacobi(double a_hat, std::function<Complex(Complex)> g0) {
    CharSystem s;
    s.A = [](Complex, Complex, double) { return Complex(1, 0); };
    s.B = [a_hat](Complex g, Complex z, double) { return a_hat * half_cot(z) + g; };
    s.C = [a_hat](Complex g, Complex z, double) {
        const Complex sn = std::sin(0.5 * z);
        return 0.25 * a_hat * g / (sn * sn);
    };
    s.initial_green = std::move(g0);
    s.a_const = 1.0;
    return s;
}

namespace {

struct State {
    Complex z;
    Complex g;
    double t;
};

struct Deriv {
    Complex dz;
    Complex dg;
    double dt;
};

Deriv rhs(const CharSystem& sys, const State& s) {
    const Complex a = sys.A(s.g, s.z, s.t);
    require(std::abs(a) > 1e-14, ErrorCode::CharacteristicDegenerate,
            "A coefficient vanished along the characteristic");
    return {sys.B(s.g, s.z, s.t), sys.C(s.g, s.z, s.t), a.real()};
}

State rk4_step(const CharSystem& sys, const State& s, double h) {
    auto adv = [](const State& base, const Deriv& d, double f) {
        return State{base.z + f * d.dz, base.g + f * d.dg, base.t + f * d.dt};
    };
    const Deriv k1 = rhs(sys, s);
    const Deriv k2 = rhs(sys, adv(s, k1, h / 2));
    const Deriv k3 = rhs(sys, adv(s, k2, h / 2));
    const Deriv k4 = rhs(sys, adv(s, k3, h));
    State out;
    out.z = s.z + h / 6.0 * (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz);
    out.g = s.g + h / 6.0 * (k1.dg + 2.0 * k2.dg + 2.0 * k3.dg + k4.dg);
    out.t = s.t + h / 6.0 * (k1.dt + 2.0 * k2.dt + 2.0 * k3.dt + k4.dt);
    return out;
}

void check_blowup(const State& s) {
    require(finite(s.z) && finite(s.g) && std::abs(s.z) < 1e12 && std::abs(s.g) < 1e12,
            ErrorCode::CharacteristicBlowup, "characteristic state exceeded 1e12");
}

State integrate_terminal(const CharSystem& sys, Complex alpha, double beta_end, double step,
                         CharPath* record) {
    const Complex g0 = sys.initial_green(alpha);
    require(finite(g0), ErrorCode::InvalidArgument, "initial_green not finite at alpha");
    State s{alpha, g0, 0.0};
    if (record) record->states.push_back({0.0, s.z, s.g, s.t});
    if (beta_end == 0.0) return s;
    double beta = 0.0;
    double h = std::min(step, beta_end);
    const double h_min = beta_end * 1e-10;
    long steps_taken = 0;
    while (beta < beta_end * (1 - 1e-15)) {
        require(++steps_taken < 2'000'000, ErrorCode::CharacteristicBlowup,
                "step size collapsed (solution blowing up or too stiff)");
        h = std::min(h, beta_end - beta);
        const State one = rk4_step(sys, s, h);
        const State half = rk4_step(sys, rk4_step(sys, s, h / 2), h / 2);
        check_blowup(half);
        const double err = std::max({std::abs(one.z - half.z), std::abs(one.g - half.g),
                                     std::abs(one.t - half.t)}) /
                           15.0;
        if (err > 1e-10 * h && h > h_min) {
            h *= 0.5;
            continue;
        }
        s = half;
        beta += h;
        if (record) record->states.push_back({beta, s.z, s.g, s.t});
        if (err < 1e-12 * h) h *= 2.0;  // cheap growth control
    }
    return s;
}

}  // namespace

CharPath integrate_characteristic(const CharSystem& sys, Complex alpha, double beta_end,
                                  double step) {
    require(beta_end > 0, ErrorCode::InvalidArgument, "beta_end must be positive");
    require(step > 0 && step <= beta_end / 10.0 + 1e-15, ErrorCode::InvalidArgument,
            "step must satisfy step <= beta_end/10");
    CharPath path;
    path.alpha = alpha;
    integrate_terminal(sys, alpha, beta_end, step, &path);
    return path;
}

GreenEvaluation invert_to_target(const CharSystem& sys, Complex z_target, double tau_hat,
                                 Complex alpha_seed, Complex* alpha_out) {
    if (tau_hat == 0.0) {
        if (alpha_out) *alpha_out = z_target;
        const Complex g = sys.initial_green(z_target);
        return {z_target, g, 0.0, true};
    }
    const double beta_end = tau_hat / sys.a_const;
    const double step = beta_end / 16.0;
    const double tol = 1e-10 * (1.0 + std::abs(z_target));

    auto land = [&](Complex alpha) -> State {
        State s = integrate_terminal(sys, alpha, beta_end, step, nullptr);
        require(std::abs(s.t - tau_hat) < 1e-8 * (1 + tau_hat), ErrorCode::ShootingFailure,
                "characteristic time drifted from tau_hat");
        return s;
    };

    Complex a0 = alpha_seed;
    Complex a1 = alpha_seed * (1.0 + 1e-5) + Complex(0, 1e-7);
    State s0 = land(a0);
    State s1 = land(a1);
    Complex f0 = s0.z - z_target;
    Complex f1 = s1.z - z_target;
    int rescues = 0;
    if (std::abs(f0) < tol) {
        if (alpha_out) *alpha_out = a0;
        return {z_target, s0.g, std::abs(f0), true};
    }

    for (int it = 0; it < 100; ++it) {
        if (std::abs(f1) < tol) {
            if (alpha_out) *alpha_out = a1;
            return {z_target, s1.g, std::abs(f1), true};
        }
        const Complex df = f1 - f0;
        const Complex da = a1 - a0;
        require(std::abs(da) > 1e-300, ErrorCode::ShootingFailure, "secant iterates collapsed");
        const Complex jac = df / da;
        // a caustic is a fold of the characteristic map: dz/dalpha -> 0
        require(std::abs(jac) > 1e-8, ErrorCode::CausticEncountered,
                "characteristic Jacobian dz/dalpha vanishing near z_target");
        Complex a2 = a1 - f1 / jac;
        State s2;
        bool landed = false;
        for (int attempt = 0; attempt < 40 && !landed; ++attempt) {
            try {
                s2 = land(a2);
                landed = true;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::CharacteristicBlowup &&
                    e.code() != ErrorCode::CharacteristicDegenerate)
                    throw;
                // trial label strayed into a singular region; damp toward the last good one
                a2 = 0.5 * (a2 + a1);
                require(++rescues < 200, ErrorCode::ShootingFailure,
                        "secant iterates keep entering a singular region");
            }
        }
        require(landed, ErrorCode::ShootingFailure, "could not land a characteristic");
        a0 = a1;
        f0 = f1;
        a1 = a2;
        s1 = s2;
        f1 = s1.z - z_target;
    }
    raise(ErrorCode::ShootingFailure, "shooting did not converge in 100 iterations");
}

}  // namespace specflow
