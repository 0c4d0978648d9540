#pragma once

#include <vector>

#include "specflow/numerics.hpp"

namespace specflow::detail {

// dense polynomials in one complex variable, ascending coefficient order
using Poly = std::vector<Complex>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, Complex(0, 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

inline void poly_axpy(Poly& acc, const Poly& p, Complex scale) {
    if (acc.size() < p.size()) acc.resize(p.size(), Complex(0, 0));
    for (std::size_t i = 0; i < p.size(); ++i) acc[i] += scale * p[i];
}

inline Complex poly_eval(const Poly& p, Complex w) {
    Complex acc = 0;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * w + p[k];
    return acc;
}

inline double poly_scale_at(const Poly& p, Complex w) {
    double s = 0, pw = 1;
    const double aw = std::abs(w);
    for (std::size_t k = 0; k < p.size(); ++k) {
        s = std::max(s, std::abs(p[k]) * pw);
        pw *= aw;
    }
    return std::max(s, 1e-300);
}

}  // namespace specflow::detail
