#pragma once

#include "qnls/radial.hpp"

#include <cmath>
#include <random>

namespace qnls::testing {

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

/// Smooth even random field: a few signed Gaussian humps with polynomial
/// prefactors, nonzero by construction.
inline RadialField random_smooth_field(const GridPtr& grid, std::mt19937& rng,
                                       double width_lo = 0.5,
                                       double width_hi = 2.5) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> curv(0.0, 0.6);
    std::uniform_real_distribution<double> width(width_lo, width_hi);

    double c[3], b[3], s[3];
    for (int j = 0; j < 3; ++j) {
        c[j] = coeff(rng);
        b[j] = curv(rng);
        s[j] = width(rng);
    }
    if (std::abs(c[0]) < 0.2)
        c[0] = c[0] < 0 ? -0.5 : 0.5;

    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double r = grid->node(i);
        double x = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double z = r / s[j];
            x += c[j] * (1.0 + b[j] * z * z) * std::exp(-0.5 * z * z);
        }
        v[i] = x;
    }
    return RadialField(grid, std::move(v));
}

/// Positive variant for seeds and rearrangement tests.
inline RadialField random_positive_field(const GridPtr& grid, std::mt19937& rng) {
    RadialField f = random_smooth_field(grid, rng);
    std::vector<double> v = f.values();
    for (double& x : v)
        x = std::abs(x) + 1e-3 * std::exp(-x * x);
    return RadialField(grid, std::move(v));
}

} // namespace qnls::testing
