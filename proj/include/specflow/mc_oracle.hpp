#pragma once

#include <cstdint>
#include <vector>

#include "specflow/chiral_flow.hpp"
#include "specflow/gaussian_flow.hpp"
#include "specflow/measures.hpp"

namespace specflow {

struct EmpiricalSpectrum {
    std::vector<double> values;  // pooled over trials, sorted ascending
    EnsembleTag ensemble = EnsembleTag::generic;
    int n_dim = 0;
    int m_dim = 0;  // chiral only
    int beta = 2;
    double tau_hat = 0.0;
    std::uint64_t seed = 0;
    int trials = 0;
    std::vector<std::vector<double>> by_trial;  // per-trial values, each sorted
};

struct Histogram {
    std::vector<double> bin_edges;  // strictly increasing
    std::vector<double> masses;     // nonnegative, sums to 1
};

// Eigenvalues of X0 + sqrt(tau/N) H pooled over trials, H a standard Wigner matrix
// (beta = 1 real symmetric: off-diagonal variance 1, diagonal variance 2;
//  beta = 2 complex Hermitian: E|h_ij|^2 = 1, diagonal variance 1). The scaling makes
// the delta-initial N->infty density a semicircle of radius 2 sqrt(tau).
EmpiricalSpectrum sample_gaussian_flow(int N, const GaussianFlowSpec& spec, int beta, int trials,
                                       std::uint64_t seed);

// Singular values of Z0 + sqrt(2 tau / m) Z with Z a standard m x n Gaussian block;
// delta-initial a_hat = 0 singular values fill the support [0, 2 sqrt(2 tau)].
EmpiricalSpectrum sample_chiral_flow(int m, int n, const ChiralFlowSpec& spec, int beta,
                                     int trials, std::uint64_t seed);

// Eigenphases of U built from identity by `steps` increments exp(i sqrt(dtau) H_k) U
// with dtau = tau / (N steps); small-tau phase density matches the semicircle of
// radius 2 sqrt(tau).
EmpiricalSpectrum sample_circular_flow(int N, int steps, double tau_hat, int trials,
                                       std::uint64_t seed);

Histogram empirical_histogram(const EmpiricalSpectrum& s, int bins);

// L1 distance between CDFs on the merged grid (bin mass spread uniformly within bins;
// curve CDF from trapezoid cumulative, renormalized to unit mass).
double wasserstein1(const Histogram& h, const DensityCurve& curve);
double wasserstein1(const Histogram& a, const Histogram& b);
// exact empirical CDF against the curve (no binning)
double wasserstein1(const EmpiricalSpectrum& s, const DensityCurve& curve);

}  // namespace specflow
