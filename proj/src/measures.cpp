#include "specflow/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specflow/errors.hpp"

namespace specflow {

std::string to_string(Domain d) {
    switch (d) {
        case Domain::real_line: return "real";
        case Domain::positive_halfline: return "halfline";
        case Domain::circle: return "circle";
    }
    return "?";
}

std::string to_string(Symmetry s) { return s == Symmetry::even ? "even" : "none"; }

std::string to_string(EnsembleTag t) {
    switch (t) {
        case EnsembleTag::generic: return "generic";
        case EnsembleTag::gaussian: return "gaussian";
        case EnsembleTag::chiral: return "chiral";
        case EnsembleTag::wishart: return "wishart";
        case EnsembleTag::circular: return "circular";
        case EnsembleTag::jacobi: return "jacobi";
    }
    return "?";
}

double SpectralMeasure::atom_mass() const {
    double s = 0;
    for (const auto& a : atoms) s += a.weight;
    return s;
}

double SpectralMeasure::ac_mass() const {
    if (!has_ac()) return 0;
    return trapezoid(ac_grid, ac_values);
}

double SpectralMeasure::support_min() const {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) lo = std::min(lo, a.location);
    if (has_ac())
        for (std::size_t i = 0; i + 1 < ac_grid.size(); ++i)
            if (ac_values[i] > 0 || ac_values[i + 1] > 0) {
                lo = std::min(lo, ac_grid[i]);
                break;
            }
    return lo;
}

double SpectralMeasure::support_max() const {
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) hi = std::max(hi, a.location);
    if (has_ac())
        for (std::size_t i = ac_grid.size(); i-- > 1;)
            if (ac_values[i] > 0 || ac_values[i - 1] > 0) {
                hi = std::max(hi, ac_grid[i]);
                break;
            }
    return hi;
}

double SpectralMeasure::distance_to_support(Complex z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& a : atoms) d = std::min(d, std::abs(z - Complex(a.location, 0)));
    if (has_ac()) {
        for (std::size_t i = 0; i + 1 < ac_grid.size(); ++i) {
            if (ac_values[i] <= 0 && ac_values[i + 1] <= 0) continue;
            const double lo = ac_grid[i], hi = ac_grid[i + 1];
            const double x = std::clamp(z.real(), lo, hi);
            d = std::min(d, std::abs(z - Complex(x, 0)));
        }
    }
    return d;
}

void SpectralMeasure::validate() const {
    require(!empty(), ErrorCode::InvalidMeasure, "measure has neither atoms nor an ac part");
    require(total_mass > 0, ErrorCode::InvalidMeasure, "total_mass must be positive");
    for (const auto& a : atoms)
        require(a.weight > 0, ErrorCode::InvalidMeasure, "atom weights must be positive");
    if (!ac_grid.empty()) {
        require(ac_grid.size() == ac_values.size(), ErrorCode::InvalidMeasure,
                "ac grid/value size mismatch");
        for (std::size_t i = 0; i + 1 < ac_grid.size(); ++i)
            require(ac_grid[i] < ac_grid[i + 1], ErrorCode::InvalidMeasure,
                    "ac_grid must be strictly increasing");
        for (double v : ac_values)
            require(v >= 0, ErrorCode::InvalidMeasure, "ac_values must be nonnegative");
    }
    const double m = computed_mass();
    require(std::abs(m - total_mass) <= 1e-10 * std::max(1.0, total_mass),
            ErrorCode::InvalidMeasure, "atom + ac mass does not match total_mass");
    if (domain == Domain::circle) {
        for (const auto& a : atoms)
            require(a.location > -kPi && a.location <= kPi, ErrorCode::InvalidMeasure,
                    "circle atom outside (-pi, pi]");
        if (has_ac())
            require(ac_grid.front() >= -kPi - 1e-12 && ac_grid.back() <= kPi + 1e-12,
                    ErrorCode::InvalidMeasure, "circle ac support outside (-pi, pi]");
    }
    if (symmetry == Symmetry::even) {
        for (const auto& a : atoms) {
            if (a.location == 0) continue;
            bool mirrored = false;
            for (const auto& b : atoms)
                if (std::abs(b.location + a.location) < 1e-12 &&
                    std::abs(b.weight - a.weight) < 1e-12)
                    mirrored = true;
            require(mirrored, ErrorCode::InvalidMeasure, "even measure lacks mirrored atom");
        }
        if (has_ac()) {
            for (std::size_t i = 0; i < ac_grid.size(); ++i) {
                const double x = ac_grid[i];
                // find mirrored grid point if present
                auto it = std::lower_bound(ac_grid.begin(), ac_grid.end(), -x - 1e-12);
                if (it != ac_grid.end() && std::abs(*it + x) < 1e-12) {
                    const std::size_t j = std::size_t(it - ac_grid.begin());
                    require(std::abs(ac_values[i] - ac_values[j]) < 1e-12,
                            ErrorCode::InvalidMeasure, "even measure ac part not mirror-symmetric");
                }
            }
        }
    }
}

SpectralMeasure SpectralMeasure::delta(double x, Domain dom) {
    SpectralMeasure m;
    m.atoms = {{x, 1.0}};
    m.domain = dom;
    m.total_mass = 1.0;
    m.symmetry = (x == 0.0) ? Symmetry::even : Symmetry::none;
    return m;
}

SpectralMeasure SpectralMeasure::symmetric_pair(double a) {
    SpectralMeasure m;
    if (a == 0.0)
        m.atoms = {{0.0, 1.0}};
    else
        m.atoms = {{-a, 0.5}, {a, 0.5}};
    m.symmetry = Symmetry::even;
    m.total_mass = 1.0;
    return m;
}

SpectralMeasure SpectralMeasure::chiral_pair(double b) {
    SpectralMeasure m;
    if (b == 0.0)
        m.atoms = {{0.0, 2.0}};
    else
        m.atoms = {{-b, 1.0}, {b, 1.0}};
    m.symmetry = Symmetry::even;
    m.total_mass = 2.0;
    return m;
}

SpectralMeasure SpectralMeasure::uniform(double a, double b, std::size_t n, double mass, Domain dom) {
    require(b > a, ErrorCode::InvalidArgument, "uniform measure needs b > a");
    SpectralMeasure m;
    m.ac_grid = linspace(a, b, n);
    m.ac_values.assign(n, mass / (b - a));
    m.domain = dom;
    m.total_mass = mass;
    if (std::abs(a + b) < 1e-15) m.symmetry = Symmetry::even;
    return m;
}

SpectralMeasure SpectralMeasure::from_density(std::vector<double> grid, std::vector<double> values,
                                              Domain dom, Symmetry sym) {
    SpectralMeasure m;
    m.ac_grid = std::move(grid);
    m.ac_values = std::move(values);
    for (double& v : m.ac_values) v = std::max(v, 0.0);
    m.domain = dom;
    m.symmetry = sym;
    m.total_mass = m.ac_mass();
    return m;
}

SpectralMeasure SpectralMeasure::uniform_circle() {
    SpectralMeasure m = uniform(-kPi, kPi, 2001, 1.0, Domain::circle);
    m.symmetry = Symmetry::even;
    return m;
}

double DensityCurve::mass() const { return trapezoid(grid, values); }

double DensityCurve::value_at(double x) const {
    if (grid.empty() || x < grid.front() || x > grid.back()) return 0.0;
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    if (it == grid.begin()) return values.front();
    if (it == grid.end()) return values.back();
    const std::size_t j = std::size_t(it - grid.begin());
    const double t = (x - grid[j - 1]) / (grid[j] - grid[j - 1]);
    return (1 - t) * values[j - 1] + t * values[j];
}

namespace {

double max_step(std::span<const double> grid) {
    double h = 0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) h = std::max(h, grid[i + 1] - grid[i]);
    return h;
}

// local density value and slope at x0 from a parabola through the three nearest nodes
void local_fit(std::span<const double> g, std::span<const double> v, double x0, double& rho0,
               double& rho1) {
    const std::size_t n = g.size();
    auto it = std::lower_bound(g.begin(), g.end(), x0);
    std::size_t j = std::size_t(it - g.begin());
    if (j > 0 && (j == n || x0 - g[j - 1] < g[j] - x0)) --j;
    std::size_t c = std::clamp<std::size_t>(j, 1, n - 2);
    const double x1 = g[c - 1], x2 = g[c], x3 = g[c + 1];
    const double y1 = v[c - 1], y2 = v[c], y3 = v[c + 1];
    // divided differences
    const double d12 = (y2 - y1) / (x2 - x1);
    const double d23 = (y3 - y2) / (x3 - x2);
    const double d123 = (d23 - d12) / (x3 - x1);
    rho0 = y1 + d12 * (x0 - x1) + d123 * (x0 - x1) * (x0 - x2);
    rho1 = d12 + d123 * ((x0 - x1) + (x0 - x2));
}

}  // namespace

// int rho(y)/(w - y) dy by trapezoid; pole-subtracted to linear order when w is close
// to the segment [A, B].
Complex ac_cauchy_transform(std::span<const double> g, std::span<const double> v, Complex z,
                            bool derivative) {
    const std::size_t n = g.size();
    if (n < 2) return 0;
    const double A = g.front(), B = g.back();
    const double h = max_step(g);
    const bool near = std::abs(z.imag()) < 5.0 * h && z.real() > A - 5.0 * h && z.real() < B + 5.0 * h;

    if (!near) {
        Complex s = 0;
        if (!derivative) {
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const Complex f0 = v[i] / (z - g[i]);
                const Complex f1 = v[i + 1] / (z - g[i + 1]);
                s += 0.5 * (f0 + f1) * (g[i + 1] - g[i]);
            }
        } else {
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const Complex d0 = z - g[i], d1 = z - g[i + 1];
                s += 0.5 * (v[i] / (d0 * d0) + v[i + 1] / (d1 * d1)) * (g[i + 1] - g[i]);
            }
            s = -s;
        }
        return s;
    }

    const double x0 = std::clamp(z.real(), A, B);
    double rho0, rho1;
    local_fit(g, v, x0, rho0, rho1);
    const Complex L0 = std::log((z - A) / (z - B));
    if (!derivative) {
        Complex s = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            auto f = [&](std::size_t k) -> Complex {
                const double p = rho0 + rho1 * (g[k] - x0);
                return (v[k] - p) / (z - g[k]);
            };
            s += 0.5 * (f(i) + f(i + 1)) * (g[i + 1] - g[i]);
        }
        const Complex L1 = (z - x0) * L0 - (B - A);
        return s + rho0 * L0 + rho1 * L1;
    }
    Complex s = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto f = [&](std::size_t k) -> Complex {
            const double p = rho0 + rho1 * (g[k] - x0);
            const Complex d = z - g[k];
            return (v[k] - p) / (d * d);
        };
        s += 0.5 * (f(i) + f(i + 1)) * (g[i + 1] - g[i]);
    }
    const Complex M0 = 1.0 / (z - B) - 1.0 / (z - A);
    const Complex M1 = (z - x0) * M0 - L0;
    return -(s + rho0 * M0 + rho1 * M1);
}

namespace {

// circle-kernel ac transform via the image expansion
// (1/2)cot(u/2) = 1/u + 1/(u-2pi) + 1/(u+2pi) + remainder
Complex circle_green_ac(std::span<const double> g, std::span<const double> v, Complex z,
                        bool derivative) {
    Complex s = 0;
    for (int img = -1; img <= 1; ++img)
        s += ac_cauchy_transform(g, v, z - 2.0 * kPi * double(img), derivative);
    // remainder is analytic and mild on |u| < 4pi; plain trapezoid
    Complex r = 0;
    const std::size_t n = g.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto f = [&](std::size_t k) -> Complex {
            const Complex u = z - g[k];
            return v[k] * (derivative ? cot_kernel_remainder_deriv(u) : cot_kernel_remainder(u));
        };
        r += 0.5 * (f(i) + f(i + 1)) * (g[i + 1] - g[i]);
    }
    return s + r;
}

}  // namespace

Complex green_of_measure(const SpectralMeasure& m, Complex z) {
    require(!m.empty(), ErrorCode::EmptyMeasure, "green_of_measure on empty measure");
    if (m.domain == Domain::circle) {
        require(z.imag() != 0.0, ErrorCode::PoleProximity,
                "circle-domain Green transform needs Im z != 0");
        Complex s = 0;
        for (const auto& a : m.atoms) s += a.weight * half_cot(z - a.location);
        if (m.has_ac()) s += circle_green_ac(m.ac_grid, m.ac_values, z, false);
        return s;
    }
    require(m.distance_to_support(z) > 1e-13, ErrorCode::PoleProximity,
            "z inside the support tube");
    Complex s = 0;
    for (const auto& a : m.atoms) s += a.weight / (z - a.location);
    if (m.has_ac()) s += ac_cauchy_transform(m.ac_grid, m.ac_values, z, false);
    return s;
}

Complex green_of_measure_deriv(const SpectralMeasure& m, Complex z) {
    require(!m.empty(), ErrorCode::EmptyMeasure, "green_of_measure_deriv on empty measure");
    if (m.domain == Domain::circle) {
        require(z.imag() != 0.0, ErrorCode::PoleProximity,
                "circle-domain Green transform needs Im z != 0");
        Complex s = 0;
        for (const auto& a : m.atoms) s += a.weight * half_cot_deriv(z - a.location);
        if (m.has_ac()) s += circle_green_ac(m.ac_grid, m.ac_values, z, true);
        return s;
    }
    require(m.distance_to_support(z) > 1e-13, ErrorCode::PoleProximity,
            "z inside the support tube");
    Complex s = 0;
    for (const auto& a : m.atoms) {
        const Complex d = z - a.location;
        s -= a.weight / (d * d);
    }
    if (m.has_ac()) s += ac_cauchy_transform(m.ac_grid, m.ac_values, z, true);
    return s;
}

double hilbert_transform(const SpectralMeasure& m, double x) {
    require(!m.empty(), ErrorCode::EmptyMeasure, "hilbert_transform on empty measure");
    double s = 0;
    const bool circle = m.domain == Domain::circle;
    for (const auto& a : m.atoms) {
        require(std::abs(x - a.location) > 1e-12, ErrorCode::PoleProximity,
                "hilbert_transform at an atom");
        if (circle)
            s += a.weight * half_cot(Complex(x - a.location, 0)).real();
        else
            s += a.weight / (x - a.location);
    }
    if (!m.has_ac()) return s;

    const auto& g = m.ac_grid;
    const auto& v = m.ac_values;
    const double A = g.front(), B = g.back();

    if (!circle && (x <= A || x >= B)) {
        // no principal value needed strictly outside the ac interval
        if (x == A || x == B) {
            double rho0, rho1;
            local_fit(g, v, x, rho0, rho1);
            require(std::abs(rho0) < 1e-12, ErrorCode::PoleProximity,
                    "hilbert_transform at an ac edge with nonzero density");
        }
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            auto f = [&](std::size_t k) { return v[k] / (x - g[k]); };
            if (std::abs(x - g[i]) < 1e-300 || std::abs(x - g[i + 1]) < 1e-300) continue;
            s += 0.5 * (f(i) + f(i + 1)) * (g[i + 1] - g[i]);
        }
        return s;
    }

    double rho0, rho1;
    local_fit(g, v, x, rho0, rho1);
    const double tiny = 1e-9 * std::max(1.0, B - A);
    double acc = 0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        auto f = [&](std::size_t k) -> double {
            const double d = x - g[k];
            if (std::abs(d) < tiny) return -rho1;  // limit of (rho(y)-rho(x))/(x-y)
            if (circle) return (v[k] - rho0) * half_cot(Complex(d, 0)).real();
            return (v[k] - rho0) / d;
        };
        acc += 0.5 * (f(i) + f(i + 1)) * (g[i + 1] - g[i]);
    }
    if (circle) {
        // over a full period the two log-sin boundary terms cancel identically
        if (std::abs((B - A) - 2 * kPi) > 1e-12 && std::abs(rho0) > 0) {
            const double b1 = std::log(std::abs(std::sin(0.5 * (x - A))));
            const double b2 = std::log(std::abs(std::sin(0.5 * (x - B))));
            acc += rho0 * (b1 - b2);
        }
    } else {
        if (std::abs(rho0) > 0) acc += rho0 * std::log(std::abs((x - A) / (B - x)));
    }
    return s + acc;
}

DensityCurve stieltjes_invert(const std::function<Complex(Complex)>& green_at,
                              std::span<const double> x_grid, std::span<const double> eps_ladder,
                              EnsembleTag tag, double tau_hat) {
    require(eps_ladder.size() >= 2, ErrorCode::InvalidArgument, "eps ladder needs >= 2 entries");
    for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
        require(eps_ladder[i] > 0, ErrorCode::InvalidArgument, "eps ladder entries must be > 0");
        if (i) require(eps_ladder[i] < eps_ladder[i - 1], ErrorCode::InvalidArgument,
                       "eps ladder must decrease");
    }
    DensityCurve curve;
    curve.grid.assign(x_grid.begin(), x_grid.end());
    curve.values.resize(x_grid.size());
    curve.tau_hat = tau_hat;
    curve.ensemble_tag = tag;

    std::vector<double> ys(eps_ladder.size());
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
            const Complex gz = green_at(Complex(x_grid[j], eps_ladder[i]));
            ys[i] = -gz.imag() / kPi;
            lo = std::min(lo, ys[i]);
            hi = std::max(hi, ys[i]);
        }
        auto [value, corr] = extrapolate_to_zero(eps_ladder, ys);
        // near spectral edges the eps-expansion degrades; allow corrections up to a
        // fraction of the raw ladder spread or of the value itself before failing
        require(corr <= std::max({1e-4, 0.5 * (hi - lo), 0.1 * std::abs(value)}),
                ErrorCode::NonConvergedInversion,
                "eps-ladder extrapolation disagreement at x = " + std::to_string(x_grid[j]));
        if (value < 0) {
            require(value >= -std::max(1e-8, corr), ErrorCode::NegativeDensity,
                    "negative density " + std::to_string(value) + " at x = " +
                        std::to_string(x_grid[j]));
            value = 0;
        }
        curve.values[j] = value;
    }
    return curve;
}

double moments(const DensityCurve& curve, int k) {
    require(k >= 0 && k <= 20, ErrorCode::InvalidArgument, "moment order must be in [0, 20]");
    require(curve.grid.size() >= 3, ErrorCode::QuadratureAccuracy, "curve grid too small");
    const std::size_t n = curve.grid.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = curve.values[i] * std::pow(curve.grid[i], k);
    const double full = simpson(curve.grid, f);
    std::vector<double> gc, fc;
    for (std::size_t i = 0; i < n; i += 2) {
        gc.push_back(curve.grid[i]);
        fc.push_back(f[i]);
    }
    if (gc.back() != curve.grid.back()) {
        gc.push_back(curve.grid.back());
        fc.push_back(f.back());
    }
    const double coarse = simpson(gc, fc);
    const double est = std::abs(full - coarse) / 15.0;
    require(est <= 1e-6, ErrorCode::QuadratureAccuracy,
            "estimated quadrature error " + std::to_string(est));
    return full;
}

std::vector<Interval> support_detect(const DensityCurve& curve, double threshold) {
    const auto& g = curve.grid;
    const auto& v = curve.values;
    require(threshold > 0, ErrorCode::InvalidArgument, "threshold must be positive");
    std::vector<std::pair<std::size_t, std::size_t>> runs;  // inclusive index ranges
    std::size_t i = 0;
    const std::size_t n = g.size();
    while (i < n) {
        while (i < n && v[i] <= threshold) ++i;
        if (i == n) break;
        const std::size_t start = i;
        while (i < n && v[i] > threshold) ++i;
        runs.emplace_back(start, i - 1);
    }
    require(!runs.empty(), ErrorCode::EmptySupport, "all values below threshold");
    // merge runs separated by less than two grid steps
    std::vector<std::pair<std::size_t, std::size_t>> merged;
    for (const auto& r : runs) {
        if (!merged.empty()) {
            // gap narrower than two grid steps (at most one sub-threshold point)
            if (r.first - merged.back().second <= 2) {
                merged.back().second = r.second;
                continue;
            }
        }
        merged.push_back(r);
    }
    std::vector<Interval> out;
    for (const auto& r : merged) out.push_back({g[r.first], g[r.second]});
    return out;
}

}  // namespace specflow
