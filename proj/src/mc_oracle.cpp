#include "specflow/mc_oracle.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

#include "specflow/errors.hpp"
#include "specflow/rng.hpp"

namespace specflow {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

// diagonal multiplicities floor-rounded from N * weight; residual beyond 1/N is an error
std::vector<int> atom_counts(const std::vector<Atom>& atoms, int N, double unit_mass) {
    std::vector<int> counts(atoms.size());
    int total = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double target = double(N) * atoms[i].weight / unit_mass;
        counts[i] = int(std::llround(target));
        require(std::abs(target - counts[i]) <= 1.0 / double(N) + 1e-9,
                ErrorCode::AtomRoundingError,
                "atom weight " + std::to_string(atoms[i].weight) + " not resolvable at size " +
                    std::to_string(N));
        total += counts[i];
    }
    require(total == N, ErrorCode::AtomRoundingError, "atom multiplicities do not sum to size");
    return counts;
}

MatrixXd wigner_real(int N, Philox& rng) {
    MatrixXd H(N, N);
    for (int i = 0; i < N; ++i) {
        H(i, i) = std::sqrt(2.0) * rng.normal();
        for (int j = i + 1; j < N; ++j) {
            const double v = rng.normal();
            H(i, j) = v;
            H(j, i) = v;
        }
    }
    return H;
}

MatrixXcd wigner_complex(int N, Philox& rng) {
    MatrixXcd H(N, N);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < N; ++i) {
        H(i, i) = Complex(rng.normal(), 0.0);
        for (int j = i + 1; j < N; ++j) {
            const Complex v(rng.normal() * inv_sqrt2, rng.normal() * inv_sqrt2);
            H(i, j) = v;
            H(j, i) = std::conj(v);
        }
    }
    return H;
}

void finalize(EmpiricalSpectrum& s) {
    for (auto& t : s.by_trial) {
        std::sort(t.begin(), t.end());
        s.values.insert(s.values.end(), t.begin(), t.end());
    }
    std::sort(s.values.begin(), s.values.end());
}

}  // namespace

EmpiricalSpectrum sample_gaussian_flow(int N, const GaussianFlowSpec& spec, int beta, int trials,
                                       std::uint64_t seed) {
    spec.validate();
    require(N >= 1, ErrorCode::InvalidArgument, "N must be positive");
    require(beta == 1 || beta == 2, ErrorCode::InvalidArgument, "beta must be 1 or 2");
    require(trials >= 1, ErrorCode::InvalidArgument, "trials must be positive");
    require(!spec.initial.has_ac(), ErrorCode::InvalidArgument,
            "Monte Carlo sampling needs an atomic initial measure");
    const auto counts = atom_counts(spec.initial.atoms, N, spec.initial.total_mass);

    Eigen::VectorXd diag(N);
    int k = 0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        for (int c = 0; c < counts[i]; ++c) diag(k++) = spec.initial.atoms[i].location;

    EmpiricalSpectrum s;
    s.ensemble = EnsembleTag::gaussian;
    s.n_dim = N;
    s.beta = beta;
    s.tau_hat = spec.tau_hat;
    s.seed = seed;
    s.trials = trials;
    const double scale = std::sqrt(spec.tau_hat / double(N));
    for (int t = 0; t < trials; ++t) {
        Philox rng(seed, std::uint64_t(t));
        std::vector<double> vals;
        vals.reserve(std::size_t(N));
        if (beta == 1) {
            MatrixXd Y = scale * wigner_real(N, rng);
            Y.diagonal() += diag;
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(Y, Eigen::EigenvaluesOnly);
            for (int i = 0; i < N; ++i) vals.push_back(es.eigenvalues()(i));
        } else {
            MatrixXcd Y = scale * wigner_complex(N, rng);
            Y.diagonal() += diag.cast<Complex>();
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(Y, Eigen::EigenvaluesOnly);
            for (int i = 0; i < N; ++i) vals.push_back(es.eigenvalues()(i));
        }
        s.by_trial.push_back(std::move(vals));
    }
    finalize(s);
    return s;
}

EmpiricalSpectrum sample_chiral_flow(int m, int n, const ChiralFlowSpec& spec, int beta,
                                     int trials, std::uint64_t seed) {
    spec.validate();
    require(n >= m && m >= 1, ErrorCode::DimensionOrder, "need n >= m >= 1");
    require(beta == 1 || beta == 2, ErrorCode::InvalidArgument, "beta must be 1 or 2");
    require(trials >= 1, ErrorCode::InvalidArgument, "trials must be positive");
    require(!spec.initial.has_ac(), ErrorCode::InvalidArgument,
            "Monte Carlo sampling needs an atomic initial measure");
    require(std::abs(double(n) / double(m) - 1.0 - spec.a_hat) <= 0.02 + 1e-12,
            ErrorCode::InvalidArgument, "n/m - 1 inconsistent with spec.a_hat");

    // half-line atoms (weights sum to 1) give the singular values of Z0
    std::vector<Atom> half;
    for (const auto& a : spec.initial.atoms) {
        if (a.location > 0) half.push_back(a);
        else if (a.location == 0) half.push_back({0.0, 0.5 * a.weight});
    }
    const auto counts = atom_counts(half, m, 1.0);

    EmpiricalSpectrum s;
    s.ensemble = EnsembleTag::chiral;
    s.n_dim = n;
    s.m_dim = m;
    s.beta = beta;
    s.tau_hat = spec.tau_hat;
    s.seed = seed;
    s.trials = trials;
    const double scale = std::sqrt(2.0 * spec.tau_hat / double(m));
    for (int t = 0; t < trials; ++t) {
        Philox rng(seed, std::uint64_t(t));
        std::vector<double> vals;
        vals.reserve(std::size_t(m));
        if (beta == 1) {
            MatrixXd W(m, n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < m; ++i) W(i, j) = scale * rng.normal();
            int k = 0;
            for (std::size_t a = 0; a < counts.size(); ++a)
                for (int c = 0; c < counts[a]; ++c, ++k)
                    W(k, k) += (k % 2 == 0 ? 1.0 : -1.0) * half[a].location;
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(W * W.transpose(), Eigen::EigenvaluesOnly);
            for (int i = 0; i < m; ++i) vals.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
        } else {
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            MatrixXcd W(m, n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < m; ++i)
                    W(i, j) = scale * Complex(rng.normal() * inv_sqrt2, rng.normal() * inv_sqrt2);
            int k = 0;
            for (std::size_t a = 0; a < counts.size(); ++a)
                for (int c = 0; c < counts[a]; ++c, ++k)
                    W(k, k) += (k % 2 == 0 ? 1.0 : -1.0) * half[a].location;
            Eigen::SelfAdjointEigenSolver<MatrixXcd> es(W * W.adjoint(), Eigen::EigenvaluesOnly);
            for (int i = 0; i < m; ++i) vals.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i))));
        }
        s.by_trial.push_back(std::move(vals));
    }
    finalize(s);
    return s;
}

EmpiricalSpectrum sample_circular_flow(int N, int steps, double tau_hat, int trials,
                                       std::uint64_t seed) {
    require(N >= 1 && trials >= 1, ErrorCode::InvalidArgument, "N and trials must be positive");
    require(tau_hat >= 0, ErrorCode::InvalidArgument, "tau_hat must be nonnegative");
    require(steps >= 1 && double(steps) >= 50.0 * tau_hat, ErrorCode::DiscretizationTooCoarse,
            "need steps >= 50 * tau_hat");
    EmpiricalSpectrum s;
    s.ensemble = EnsembleTag::circular;
    s.n_dim = N;
    s.tau_hat = tau_hat;
    s.seed = seed;
    s.trials = trials;
    if (tau_hat == 0.0) {
        s.values.assign(std::size_t(N) * std::size_t(trials), 0.0);
        s.by_trial.assign(std::size_t(trials), std::vector<double>(std::size_t(N), 0.0));
        return s;
    }
    const double dtau = tau_hat / (double(N) * double(steps));
    const double amp = std::sqrt(dtau);
    for (int t = 0; t < trials; ++t) {
        Philox rng(seed, std::uint64_t(t));
        MatrixXcd U = MatrixXcd::Identity(N, N);
        for (int k = 0; k < steps; ++k) {
            MatrixXcd H = wigner_complex(N, rng);
            MatrixXcd A = Complex(0, 1) * amp * H;
            U = A.exp() * U;
        }
        Eigen::ComplexEigenSolver<MatrixXcd> es(U, false);
        std::vector<double> vals;
        vals.reserve(std::size_t(N));
        for (int i = 0; i < N; ++i) vals.push_back(std::arg(es.eigenvalues()(i)));
        s.by_trial.push_back(std::move(vals));
    }
    finalize(s);
    return s;
}

Histogram empirical_histogram(const EmpiricalSpectrum& s, int bins) {
    require(bins >= 10, ErrorCode::InvalidArgument, "need at least 10 bins");
    require(!s.values.empty(), ErrorCode::InvalidArgument, "empty spectrum");
    double lo = s.values.front(), hi = s.values.back();
    if (hi - lo < 1e-12) {
        lo -= 0.5e-6;
        hi += 0.5e-6;
    }
    Histogram h;
    h.bin_edges = linspace(lo, hi, std::size_t(bins) + 1);
    h.masses.assign(bins, 0.0);
    const double w = 1.0 / double(s.values.size());
    for (double v : s.values) {
        int b = int((v - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        h.masses[std::size_t(b)] += w;
    }
    return h;
}

namespace {

// piecewise-linear CDF as (x, F) breakpoints
struct Cdf {
    std::vector<double> x;
    std::vector<double> f;

    double at(double t) const {
        if (t <= x.front()) return 0.0;
        if (t >= x.back()) return 1.0;
        auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t j = std::size_t(it - x.begin());
        const double u = (t - x[j - 1]) / (x[j] - x[j - 1]);
        return (1 - u) * f[j - 1] + u * f[j];
    }
};

Cdf cdf_of_histogram(const Histogram& h) {
    Cdf c;
    c.x = h.bin_edges;
    c.f.resize(h.bin_edges.size());
    c.f[0] = 0;
    for (std::size_t i = 0; i < h.masses.size(); ++i) c.f[i + 1] = c.f[i] + h.masses[i];
    const double total = c.f.back();
    require(std::abs(total - 1.0) < 1e-9, ErrorCode::InvalidArgument,
            "histogram masses must sum to 1");
    for (double& v : c.f) v /= total;
    return c;
}

Cdf cdf_of_curve(const DensityCurve& curve) {
    Cdf c;
    c.x = curve.grid;
    c.f.resize(c.x.size());
    c.f[0] = 0;
    for (std::size_t i = 0; i + 1 < c.x.size(); ++i)
        c.f[i + 1] = c.f[i] + 0.5 * (curve.values[i] + curve.values[i + 1]) * (c.x[i + 1] - c.x[i]);
    const double total = c.f.back();
    require(std::abs(total - 1.0) < 5e-3, ErrorCode::DomainMismatch,
            "curve is not normalized to unit mass on the comparison domain");
    for (double& v : c.f) v /= total;
    return c;
}

Cdf cdf_of_samples(const std::vector<double>& sorted) {
    Cdf c;
    const std::size_t n = sorted.size();
    c.x.reserve(2 * n);
    c.f.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        // vertical jump represented by coincident breakpoints
        c.x.push_back(sorted[i]);
        c.f.push_back(double(i) / double(n));
        c.x.push_back(sorted[i]);
        c.f.push_back(double(i + 1) / double(n));
    }
    return c;
}

void require_overlap(const Cdf& a, const Cdf& b) {
    require(a.x.front() <= b.x.back() && b.x.front() <= a.x.back(), ErrorCode::DomainMismatch,
            "samples lie entirely outside the comparison curve's domain");
}

double w1_between(const Cdf& a, const Cdf& b) {
    std::vector<double> xs;
    xs.reserve(a.x.size() + b.x.size());
    xs.insert(xs.end(), a.x.begin(), a.x.end());
    xs.insert(xs.end(), b.x.begin(), b.x.end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    double acc = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double x0 = xs[i], x1 = xs[i + 1];
        const double d0 = a.at(x0) - b.at(x0);
        const double d1 = a.at(x1) - b.at(x1);
        const double h = x1 - x0;
        if (d0 * d1 >= 0) {
            acc += 0.5 * (std::abs(d0) + std::abs(d1)) * h;
        } else {
            const double xc = d0 / (d0 - d1);  // fractional crossing point
            acc += 0.5 * (std::abs(d0) * xc + std::abs(d1) * (1 - xc)) * h;
        }
    }
    return acc;
}

}  // namespace

double wasserstein1(const Histogram& h, const DensityCurve& curve) {
    const Cdf a = cdf_of_histogram(h);
    const Cdf b = cdf_of_curve(curve);
    require_overlap(a, b);
    return w1_between(a, b);
}

double wasserstein1(const Histogram& a, const Histogram& b) {
    return w1_between(cdf_of_histogram(a), cdf_of_histogram(b));
}

double wasserstein1(const EmpiricalSpectrum& s, const DensityCurve& curve) {
    require(!s.values.empty(), ErrorCode::InvalidArgument, "empty spectrum");
    const Cdf a = cdf_of_samples(s.values);
    const Cdf b = cdf_of_curve(curve);
    require_overlap(a, b);
    return w1_between(a, b);
}

}  // namespace specflow
