#include "specflow/rootflow.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "specflow/errors.hpp"

namespace specflow {

void ContinuationPlan::validate() const {
    Complex prev = start_z;
    for (const Complex& z : path) {
        const double im = std::min(std::abs(prev.imag()), std::abs(z.imag()));
        const double bound = 0.5 * std::min(1.0, im);
        require(std::abs(z - prev) <= std::max(bound, 1e-12), ErrorCode::InvalidArgument,
                "continuation path step exceeds the Newton-basin bound");
        prev = z;
    }
}

ContinuationPlan make_descent_plan(Complex target, double far_radius) {
    ContinuationPlan plan;
    const double side = target.imag() >= 0 ? 1.0 : -1.0;
    const double im_t = std::max(std::abs(target.imag()), 1e-9);
    double im = std::max(far_radius, 2.0 * im_t);
    plan.start_z = Complex(target.real(), side * im);
    while (im > 1.0 && im > im_t) {
        im = std::max({im - 0.499, 1.0, im_t});
        plan.path.push_back(Complex(target.real(), side * im));
    }
    while (im > im_t) {
        im = std::max(0.72 * im, im_t);
        plan.path.push_back(Complex(target.real(), side * im));
    }
    if (plan.path.empty() || plan.path.back() != target) plan.path.push_back(target);
    return plan;
}

std::array<Complex, 2> solve_quadratic(Complex c2, Complex c1, Complex c0) {
    require(c2 != Complex(0, 0), ErrorCode::DegenerateLeadingCoefficient, "c2 = 0");
    const Complex disc = std::sqrt(c1 * c1 - 4.0 * c2 * c0);
    // sign-matched branch avoids cancellation in -c1 -+ disc
    const Complex q = (std::real(std::conj(c1) * disc) >= 0) ? -0.5 * (c1 + disc)
                                                             : -0.5 * (c1 - disc);
    if (q == Complex(0, 0)) return {Complex(0, 0), Complex(0, 0)};
    return {q / c2, c0 / q};
}

namespace {

Complex poly_eval(std::span<const Complex> c, Complex w) {
    Complex acc = 0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * w + c[k];
    return acc;
}

Complex poly_eval_deriv(std::span<const Complex> c, Complex w) {
    Complex acc = 0;
    for (std::size_t k = c.size(); k-- > 1;) acc = acc * w + double(k) * c[k];
    return acc;
}

void newton_polish(std::span<const Complex> c, Complex& w, int sweeps = 3) {
    for (int s = 0; s < sweeps; ++s) {
        const Complex p = poly_eval(c, w);
        const Complex dp = poly_eval_deriv(c, w);
        if (std::abs(dp) < 1e-300) return;
        const Complex step = p / dp;
        if (!finite(step)) return;
        w -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(w))) return;
    }
}

}  // namespace

std::array<Complex, 3> solve_cubic(Complex c3, Complex c2, Complex c1, Complex c0) {
    require(c3 != Complex(0, 0), ErrorCode::DegenerateLeadingCoefficient, "c3 = 0");
    const Complex a = c2 / c3, b = c1 / c3, c = c0 / c3;
    // depressed cubic t^3 + p t + q with w = t - a/3
    const Complex p = b - a * a / 3.0;
    const Complex q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    std::array<Complex, 3> roots;
    if (std::abs(p) < 1e-300 && std::abs(q) < 1e-300) {
        roots = {Complex(0, 0), Complex(0, 0), Complex(0, 0)};
    } else {
        const Complex d = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
        // pick the Cardano branch with the larger magnitude to avoid cancellation
        Complex u3 = -q / 2.0 + d;
        if (std::abs(-q / 2.0 - d) > std::abs(u3)) u3 = -q / 2.0 - d;
        const Complex u = std::pow(u3, 1.0 / 3.0);
        const Complex omega(-0.5, std::sqrt(3.0) / 2.0);
        for (int k = 0; k < 3; ++k) {
            Complex uk = u;
            for (int j = 0; j < k; ++j) uk *= omega;
            roots[k] = (std::abs(uk) < 1e-300) ? Complex(0, 0) : uk - p / (3.0 * uk);
        }
    }
    const std::array<Complex, 4> orig = {c0, c1, c2, c3};
    for (auto& r : roots) {
        r -= a / 3.0;  // undo the depression shift
        newton_polish(orig, r);
    }
    return roots;
}

std::vector<Complex> solve_polynomial(std::vector<Complex> coeffs) {
    while (!coeffs.empty() && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
    require(coeffs.size() >= 2, ErrorCode::DegenerateLeadingCoefficient,
            "polynomial has no nonconstant part");
    const std::size_t deg = coeffs.size() - 1;
    if (deg == 1) return {-coeffs[0] / coeffs[1]};
    if (deg == 2) {
        auto r = solve_quadratic(coeffs[2], coeffs[1], coeffs[0]);
        return {r[0], r[1]};
    }
    if (deg == 3) {
        auto r = solve_cubic(coeffs[3], coeffs[2], coeffs[1], coeffs[0]);
        return {r[0], r[1], r[2]};
    }
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(long(deg), long(deg));
    for (std::size_t i = 1; i < deg; ++i) comp(long(i), long(i - 1)) = 1.0;
    for (std::size_t i = 0; i < deg; ++i) comp(long(i), long(deg - 1)) = -coeffs[i] / coeffs[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<Complex> roots(deg);
    for (std::size_t i = 0; i < deg; ++i) {
        roots[i] = es.eigenvalues()(long(i));
        newton_polish(coeffs, roots[i], 5);
    }
    return roots;
}

Complex herglotz_select(std::span<const Complex> roots, Complex z, std::optional<Complex> prev,
                        double mass) {
    require(!roots.empty(), ErrorCode::BranchAmbiguity, "no roots to select from");
    if (prev) {
        const Complex p = *prev;
        return *std::min_element(roots.begin(), roots.end(), [&](Complex a, Complex b) {
            return std::abs(a - p) < std::abs(b - p);
        });
    }
    if (roots.size() == 1) return roots[0];
    std::vector<Complex> herglotz;
    for (const Complex& r : roots)
        if (r.imag() * z.imag() < 0) herglotz.push_back(r);
    require(!herglotz.empty(), ErrorCode::BranchAmbiguity,
            "no root in the Herglotz half-plane and no previous value");
    const Complex asym = mass / z;
    return *std::min_element(herglotz.begin(), herglotz.end(), [&](Complex a, Complex b) {
        return std::abs(a - asym) < std::abs(b - asym);
    });
}

GreenEvaluation newton_solve(const ImplicitFn& F, const ImplicitFn& dFdg, Complex z, Complex g0,
                             double tol, int max_damping_halvings, std::ostream* diagnostics) {
    Complex g = g0;
    Complex fz = F(g, z);
    int iters = 0;
    for (; iters < 200; ++iters) {
        const double res = std::abs(fz);
        if (res < tol) break;
        const Complex jac = dFdg(g, z);
        require(std::abs(jac) > 1e-14, ErrorCode::SingularJacobian,
                "Jacobian magnitude below 1e-14 in Newton solve");
        const Complex step = fz / jac;
        double lambda = 1.0;
        bool improved = false;
        for (int h = 0; h <= max_damping_halvings; ++h) {
            const Complex g_try = g - lambda * step;
            const Complex f_try = F(g_try, z);
            if (finite(f_try) && std::abs(f_try) < res) {
                g = g_try;
                fz = f_try;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        require(improved, ErrorCode::ContinuationStall,
                "Newton stagnation at z = (" + std::to_string(z.real()) + ", " +
                    std::to_string(z.imag()) + ")");
    }
    GreenEvaluation ev{z, g, std::abs(fz), std::abs(fz) < tol};
    require(ev.branch_ok, ErrorCode::ContinuationStall,
            "Newton did not reach tolerance at z = (" + std::to_string(z.real()) + ", " +
                std::to_string(z.imag()) + ")");
    if (diagnostics) {
        *diagnostics << "{\"z_re\":" << z.real() << ",\"z_im\":" << z.imag()
                     << ",\"g_re\":" << g.real() << ",\"g_im\":" << g.imag()
                     << ",\"residual\":" << ev.residual << ",\"newton_iters\":" << iters << "}\n";
    }
    return ev;
}

std::vector<GreenEvaluation> continuation_solve(const ImplicitFn& F, const ImplicitFn& dFdg,
                                                const ContinuationPlan& plan, Complex g_start,
                                                std::ostream* diagnostics) {
    require(std::abs(F(g_start, plan.start_z)) < 1e-6, ErrorCode::InvalidArgument,
            "far-field seed does not satisfy |F| < 1e-6");
    std::vector<GreenEvaluation> out;
    out.reserve(plan.path.size());
    Complex g = g_start;
    Complex last_good = plan.start_z;
    for (const Complex& z : plan.path) {
        try {
            GreenEvaluation ev =
                newton_solve(F, dFdg, z, g, plan.newton_tol, plan.max_damping_halvings, diagnostics);
            g = ev.g;
            last_good = z;
            out.push_back(ev);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ContinuationStall)
                raise(ErrorCode::ContinuationStall,
                      "stalled before z = (" + std::to_string(z.real()) + ", " +
                          std::to_string(z.imag()) + "); last good z = (" +
                          std::to_string(last_good.real()) + ", " +
                          std::to_string(last_good.imag()) + ")");
            throw;
        }
    }
    return out;
}

}  // namespace specflow
