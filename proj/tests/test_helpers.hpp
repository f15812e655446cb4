#pragma once

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "br/spectral.hpp"

namespace brtest {

// Random real polynomial in T_n: iid complex Gaussian coefficients on one
// half of the ball, mirrored conjugate, real Gaussian at k = 0.
inline br::SpectralPolynomial random_polynomial(int d, int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    br::SpectralPolynomial T(d, n);
    const std::size_t total = T.box_size();
    std::vector<int> m(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t mirror = total - 1 - i;
        if (i > mirror) continue;  // first half (plus the center) only
        T.unflatten(i, m);
        if (!T.in_ball(m)) continue;
        if (i == mirror) {
            T.raw()[i] = br::cd(g(rng), 0.0);
        } else {
            const br::cd v(g(rng), g(rng));
            T.raw()[i] = v;
            T.raw()[mirror] = std::conj(v);
        }
    }
    return T;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace brtest
