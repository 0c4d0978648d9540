#include "specflow/chiral_flow.hpp"

#include <cmath>

#include "specflow/detail/poly.hpp"
#include "specflow/errors.hpp"

namespace specflow {

using detail::Poly;

void ChiralFlowSpec::validate() const {
    initial.validate();
    require(initial.domain == Domain::real_line, ErrorCode::InvalidArgument,
            "chiral flow needs a real-line (even) initial measure");
    require(initial.symmetry == Symmetry::even, ErrorCode::InvalidArgument,
            "chiral flow needs an even initial measure");
    require(std::abs(initial.total_mass - 2.0) < 1e-10, ErrorCode::InvalidArgument,
            "chiral initial measure must have total mass 2");
    require(tau_hat >= 0 && a_hat >= 0, ErrorCode::InvalidArgument,
            "tau_hat and a_hat must be nonnegative");
}

namespace {

// half-line view of the even measure: int_{I+} rho(mu) f(mu) dmu
struct HalfLine {
    std::vector<Atom> atoms;  // mu >= 0; an atom at 0 carries half its full weight
    std::vector<double> grid;
    std::vector<double> values;

    bool atomic() const { return grid.empty(); }
};

HalfLine half_line_of(const SpectralMeasure& m) {
    HalfLine h;
    for (const auto& a : m.atoms) {
        if (a.location > 0)
            h.atoms.push_back(a);
        else if (a.location == 0)
            h.atoms.push_back({0.0, 0.5 * a.weight});
    }
    if (m.has_ac()) {
        for (std::size_t i = 0; i < m.ac_grid.size(); ++i) {
            if (m.ac_grid[i] < 0) continue;
            h.grid.push_back(m.ac_grid[i]);
            h.values.push_back(m.ac_values[i]);
        }
        if (h.grid.size() < 2) {
            h.grid.clear();
            h.values.clear();
        }
    }
    return h;
}

// Q(c) = int rho_+(mu) / (c - mu^2) dmu, via partial fractions around s = sqrt(c)
Complex pair_pole_sum(const HalfLine& h, Complex c, bool derivative) {
    const Complex s = std::sqrt(c);
    Complex q = 0;
    for (const auto& a : h.atoms) {
        const Complex d = c - a.location * a.location;
        q += derivative ? -a.weight / (d * d) : a.weight / d;
    }
    if (!h.grid.empty()) {
        if (!derivative) {
            const Complex i_p = ac_cauchy_transform(h.grid, h.values, s, false);
            const Complex i_m = ac_cauchy_transform(h.grid, h.values, -s, false);
            q += (i_p - i_m) / (2.0 * s);
        } else {
            // d/dc int rho/(c - mu^2) = -int rho/(c - mu^2)^2
            const Complex i_p = ac_cauchy_transform(h.grid, h.values, s, false);
            const Complex i_m = ac_cauchy_transform(h.grid, h.values, -s, false);
            const Complex q0 = (i_p - i_m) / (2.0 * s);
            const Complex j_p = -ac_cauchy_transform(h.grid, h.values, s, true);
            const Complex j_m = -ac_cauchy_transform(h.grid, h.values, -s, true);
            q += -(j_p + j_m + 2.0 * q0) / (4.0 * c);
        }
    }
    return q;
}

// polynomial for atomic pairs, variable G:
//   G * prod_i (Dt*E - mu_i^2 z) - 2 z sum_i w_i E prod_{j!=i} (Dt*E - mu_j^2 z) = 0
// with E = z - tau G, Dt = z^2 - tau z G - 2 a tau (both linear in G).
Poly chiral_polynomial(const HalfLine& h, double tau, double a_hat, Complex z) {
    const Poly E = {z, -tau};
    const Poly Dt = {z * z - 2.0 * a_hat * tau, -tau * z};
    const Poly DtE = detail::poly_mul(Dt, E);
    std::vector<Poly> factors;
    for (const auto& a : h.atoms) {
        Poly f = DtE;
        f[0] -= a.location * a.location * z;
        factors.push_back(std::move(f));
    }
    Poly acc = {Complex(0, 0), Complex(1, 0)};  // G
    for (const auto& f : factors) acc = detail::poly_mul(acc, f);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        Poly term = E;
        for (std::size_t j = 0; j < factors.size(); ++j) {
            if (j == i) continue;
            term = detail::poly_mul(term, factors[j]);
        }
        detail::poly_axpy(acc, term, -2.0 * z * h.atoms[i].weight);
    }
    return acc;
}

Complex chfin_implicit(const HalfLine& h, double tau, double a_hat, Complex g, Complex z) {
    const Complex E = z - tau * g;
    const Complex D = z - tau * g - 2.0 * a_hat * tau / z;
    return g - 2.0 * E * pair_pole_sum(h, D * E, false);
}

Complex chfin_implicit_dg(const HalfLine& h, double tau, double a_hat, Complex g, Complex z) {
    const Complex E = z - tau * g;
    const Complex D = z - tau * g - 2.0 * a_hat * tau / z;
    const Complex q = pair_pole_sum(h, D * E, false);
    const Complex dq = pair_pole_sum(h, D * E, true);
    // dE/dg = dD/dg = -tau, d(DE)/dg = -tau (D + E)
    return 1.0 + 2.0 * tau * q + 2.0 * E * dq * tau * (D + E);
}

Complex track_chiral_branch(const HalfLine& h, double tau, double a_hat, Complex z, double span) {
    double im = 8.0 * (span + std::sqrt(tau) * (1.0 + std::sqrt(a_hat)) + std::abs(z) + 1.0);
    const double side = z.imag() >= 0 ? 1.0 : -1.0;
    Complex prev;
    {
        const Complex z0(z.real(), side * im);
        auto roots = solve_polynomial(chiral_polynomial(h, tau, a_hat, z0));
        prev = herglotz_select(roots, z0, std::nullopt, 2.0);
    }
    const double floor_im = std::max(std::abs(z.imag()), 1e-9);
    while (im > floor_im * 1.001) {
        im = std::max(im * 0.6, floor_im);
        const Complex zk(z.real(), side * im);
        auto roots = solve_polynomial(chiral_polynomial(h, tau, a_hat, zk));
        prev = herglotz_select(roots, zk, prev, 2.0);
    }
    return prev;
}

// Dozier-Silverstein form in the squared variable; atoms y_i = mu_i^2.
// g = F * sum_i w_i / (z F^2 - 2 a tau F - y_i), F = 1 - 2 tau g.
Poly wishart_polynomial(const HalfLine& h, double tau, double a_hat, Complex z) {
    const Poly F = {Complex(1, 0), -2.0 * tau};
    const Poly F2 = detail::poly_mul(F, F);
    std::vector<Poly> factors;
    for (const auto& a : h.atoms) {
        Poly f = F2;
        for (auto& c : f) c *= z;
        detail::poly_axpy(f, F, Complex(-2.0 * a_hat * tau, 0));
        f[0] -= a.location * a.location;
        factors.push_back(std::move(f));
    }
    Poly acc = {Complex(0, 0), Complex(1, 0)};
    for (const auto& f : factors) acc = detail::poly_mul(acc, f);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        Poly term = F;
        for (std::size_t j = 0; j < factors.size(); ++j) {
            if (j == i) continue;
            term = detail::poly_mul(term, factors[j]);
        }
        detail::poly_axpy(acc, term, -h.atoms[i].weight);
    }
    return acc;
}

Complex ggw_implicit(const HalfLine& h, double tau, double a_hat, Complex g, Complex z) {
    const Complex F = 1.0 - 2.0 * tau * g;
    const Complex c = z * F * F - 2.0 * a_hat * tau * F;
    return g - F * pair_pole_sum(h, c, false);
}

Complex ggw_implicit_dg(const HalfLine& h, double tau, double a_hat, Complex g, Complex z) {
    const Complex F = 1.0 - 2.0 * tau * g;
    const Complex c = z * F * F - 2.0 * a_hat * tau * F;
    const Complex q = pair_pole_sum(h, c, false);
    const Complex dq = pair_pole_sum(h, c, true);
    const Complex dF = -2.0 * tau;
    const Complex dc = (2.0 * z * F - 2.0 * a_hat * tau) * dF;
    return 1.0 - dF * q - F * dq * dc;
}

Complex track_wishart_branch(const HalfLine& h, double tau, double a_hat, Complex z, double span) {
    double im = 8.0 * (span * span + tau * (1.0 + a_hat) + std::abs(z) + 1.0);
    const double side = z.imag() >= 0 ? 1.0 : -1.0;
    Complex prev;
    {
        const Complex z0(z.real(), side * im);
        auto roots = solve_polynomial(wishart_polynomial(h, tau, a_hat, z0));
        prev = herglotz_select(roots, z0, std::nullopt, 1.0);
    }
    const double floor_im = std::max(std::abs(z.imag()), 1e-9);
    while (im > floor_im * 1.001) {
        im = std::max(im * 0.6, floor_im);
        const Complex zk(z.real(), side * im);
        auto roots = solve_polynomial(wishart_polynomial(h, tau, a_hat, zk));
        prev = herglotz_select(roots, zk, prev, 1.0);
    }
    return prev;
}

GreenEvaluation wishart_green_direct(const ChiralFlowSpec& spec, Complex zW,
                                     std::optional<Complex> warm) {
    const HalfLine h = half_line_of(spec.initial);
    const double tau = spec.tau_hat;
    if (tau == 0.0) {
        const Complex g = pair_pole_sum(h, zW, false);
        return {zW, g, 0.0, true};
    }
    const double span = std::max(std::abs(spec.initial.support_min()),
                                 std::abs(spec.initial.support_max()));
    if (h.atomic() && h.atoms.size() <= 3) {
        const Poly p = wishart_polynomial(h, tau, spec.a_hat, zW);
        auto roots = solve_polynomial(p);
        Complex g;
        if (warm)
            g = herglotz_select(roots, zW, warm, 1.0);
        else
            g = herglotz_select(roots, zW, track_wishart_branch(h, tau, spec.a_hat, zW, span), 1.0);
        const double res =
            std::abs(detail::poly_eval(p, g)) / detail::poly_scale_at(p, g);
        return {zW, g, res, res < 1e-9};
    }
    auto F = [&](Complex g, Complex zz) { return ggw_implicit(h, tau, spec.a_hat, g, zz); };
    auto dF = [&](Complex g, Complex zz) { return ggw_implicit_dg(h, tau, spec.a_hat, g, zz); };
    if (warm) return newton_solve(F, dF, zW, *warm, 1e-11);
    ContinuationPlan plan = make_descent_plan(zW);
    auto evals = continuation_solve(F, dF, plan, 1.0 / plan.start_z);
    return evals.back();
}

}  // namespace

GreenEvaluation evolve_green_chiral(const ChiralFlowSpec& spec, Complex z,
                                    std::optional<Complex> warm) {
    spec.validate();
    require(z != Complex(0, 0), ErrorCode::PoleProximity, "hard-edge pole at z = 0");
    const double tau = spec.tau_hat;
    if (tau == 0.0) {
        const Complex g = green_of_measure(spec.initial, z);
        return {z, g, 0.0, true};
    }
    // the squared-variable map regularizes the hard edge
    if (std::abs(z.real()) < 1e-3 && std::abs(z.imag()) < 1e-3) {
        GreenEvaluation w = wishart_green_direct(spec, z * z, std::nullopt);
        return {z, 2.0 * z * w.g, w.residual, w.branch_ok};
    }
    const HalfLine h = half_line_of(spec.initial);
    const double span = std::max(std::abs(spec.initial.support_min()),
                                 std::abs(spec.initial.support_max()));
    if (h.atomic() && h.atoms.size() <= 3) {
        const Poly p = chiral_polynomial(h, tau, spec.a_hat, z);
        auto roots = solve_polynomial(p);
        Complex g;
        if (warm)
            g = herglotz_select(roots, z, warm, 2.0);
        else
            g = herglotz_select(roots, z, track_chiral_branch(h, tau, spec.a_hat, z, span), 2.0);
        const double res = std::abs(detail::poly_eval(p, g)) / detail::poly_scale_at(p, g);
        return {z, g, res, res < 1e-9};
    }
    auto F = [&](Complex g, Complex zz) { return chfin_implicit(h, tau, spec.a_hat, g, zz); };
    auto dF = [&](Complex g, Complex zz) { return chfin_implicit_dg(h, tau, spec.a_hat, g, zz); };
    if (warm) return newton_solve(F, dF, z, *warm, 1e-11);
    ContinuationPlan plan = make_descent_plan(z);
    auto evals = continuation_solve(F, dF, plan, 2.0 / plan.start_z);
    return evals.back();
}

Complex chiral_block_green(const ChiralFlowSpec& spec, Complex z) {
    const double a = spec.a_hat;
    const GreenEvaluation ev = evolve_green_chiral(spec, z);
    return ev.g / (2.0 + a) + (a / (2.0 + a)) / z;
}

GreenEvaluation wishart_green(const ChiralFlowSpec& spec, Complex zW,
                              std::optional<Complex> warm) {
    spec.validate();
    require(!(zW.imag() == 0.0 && zW.real() >= 0.0), ErrorCode::PoleProximity,
            "wishart_green needs zW off the positive real axis");
    const Complex z = std::sqrt(zW);  // principal branch
    Complex g;
    double res_chiral = 0;
    if (std::abs(z) < 1e-3) {
        GreenEvaluation w = wishart_green_direct(spec, zW, warm);
        g = w.g;
        res_chiral = w.residual;
    } else {
        GreenEvaluation c = evolve_green_chiral(spec, z, warm ? std::optional<Complex>(2.0 * z * *warm)
                                                              : std::nullopt);
        g = c.g / (2.0 * z);
        res_chiral = c.residual;
    }
    // Dozier-Silverstein residual as the acceptance metric for this observable
    const HalfLine h = half_line_of(spec.initial);
    const double res = std::abs(ggw_implicit(h, spec.tau_hat, spec.a_hat, g, zW));
    return {zW, g, std::max(res, res_chiral), res < 1e-9};
}

DensityCurve chiral_density(const ChiralFlowSpec& spec, std::span<const double> grid,
                            std::span<const double> eps_ladder) {
    spec.validate();
    std::optional<Complex> warm;
    auto green_at = [&](Complex z) -> Complex {
        try {
            GreenEvaluation ev = evolve_green_chiral(spec, z, warm);
            warm = ev.g;
            return ev.g;
        } catch (const Error&) {
            GreenEvaluation ev = evolve_green_chiral(spec, z, std::nullopt);
            warm = ev.g;
            return ev.g;
        }
    };
    return stieltjes_invert(green_at, grid, eps_ladder, EnsembleTag::chiral, spec.tau_hat);
}

DensityCurve chiral_density(const ChiralFlowSpec& spec, std::span<const double> grid) {
    const auto ladder = default_eps_ladder();
    return chiral_density(spec, grid, ladder);
}

DensityCurve wishart_density(const ChiralFlowSpec& spec, std::span<const double> grid,
                             std::span<const double> eps_ladder) {
    spec.validate();
    std::optional<Complex> warm;
    auto green_at = [&](Complex z) -> Complex {
        try {
            GreenEvaluation ev = wishart_green(spec, z, warm);
            warm = ev.g;
            return ev.g;
        } catch (const Error&) {
            GreenEvaluation ev = wishart_green(spec, z, std::nullopt);
            warm = ev.g;
            return ev.g;
        }
    };
    return stieltjes_invert(green_at, grid, eps_ladder, EnsembleTag::wishart, spec.tau_hat);
}

DensityCurve wishart_density(const ChiralFlowSpec& spec, std::span<const double> grid) {
    const auto ladder = default_eps_ladder();
    return wishart_density(spec, grid, ladder);
}

double chiral_semicircle(double x, double tau_hat) {
    const double r2 = 8.0 * tau_hat - x * x;
    if (r2 <= 0 || tau_hat <= 0) return 0.0;
    return std::sqrt(r2) / (2.0 * kPi * tau_hat);
}

double marchenko_pastur(double y, double tau_hat) {
    if (y <= 0 || y >= 8.0 * tau_hat || tau_hat <= 0) return 0.0;
    return std::sqrt(8.0 * tau_hat - y) / (4.0 * kPi * tau_hat * std::sqrt(y));
}

double quartic_law(double x, double a_hat) {
    const double u = std::abs(x);
    if (u == 0) return 0.0;
    const double s = -std::pow(u, 4) + (2.0 * a_hat + 4.0) * u * u - a_hat * a_hat;
    if (s <= 0) return 0.0;
    return std::sqrt(s) / (kPi * u);
}

double raney_density(double x) {
    if (x <= 0 || x > 27.0 / 4.0) return 0.0;
    const double t = std::sqrt(27.0 - 4.0 * x);
    const double c = 3.0 * std::sqrt(3.0);
    const double num = std::cbrt((c + t) * (c + t)) - std::cbrt((c - t) * (c - t));
    return num / (std::pow(2.0, 5.0 / 3.0) * std::sqrt(3.0) * kPi * std::cbrt(x));
}

std::int64_t raney_number(int p, int r, int k) {
    require(p > 1 && r > 0 && r <= p, ErrorCode::InvalidRaneyParams,
            "raney_number needs 0 < r <= p and p > 1");
    require(k >= 0 && k <= 20, ErrorCode::InvalidRaneyParams, "k must be in [0, 20]");
    if (k == 0) return 1;
    const long long n = (long long)p * k + r;
    // r/(pk+r) * C(pk+r, k) computed exactly in 128-bit
    __int128 binom = 1;
    for (long long i = 1; i <= k; ++i) {
        binom = binom * (n - k + i) / i;  // exact at each step for binomials
    }
    const __int128 res = binom * r / n;
    require(res * n == binom * r, ErrorCode::InvalidRaneyParams, "raney_number not integral");
    return (std::int64_t)res;
}

}  // namespace specflow
