#pragma once

#include "maslov/lagrangian.hpp"

#include <random>

namespace testing {

inline maslov::Matrix gaussian(std::mt19937_64& rng, int r, int c) {
    std::normal_distribution<double> g(0.0, 1.0);
    maslov::Matrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = g(rng);
    return m;
}

inline maslov::Matrix random_symmetric(std::mt19937_64& rng, int n) {
    maslov::Matrix a = gaussian(rng, n, n);
    return 0.5 * (a + a.transpose());
}

// (A; S A): Lagrangian for symmetric S.
inline maslov::LagrangianFrame random_frame(std::mt19937_64& rng, int n) {
    maslov::Matrix a = gaussian(rng, n, n) + 2.0 * maslov::Matrix::Identity(n, n);
    return {a, random_symmetric(rng, n) * a};
}

inline maslov::LagrangianFrame column(double x, double y) {
    return {maslov::Matrix::Constant(1, 1, x), maslov::Matrix::Constant(1, 1, y)};
}

} // namespace testing
