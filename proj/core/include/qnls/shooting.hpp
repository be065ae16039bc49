#pragma once

#include "qnls/functionals.hpp"

namespace qnls {

/// Output grid selection for solver-produced profiles. r_max <= 0 requests an
/// automatic radius (a margin past the computed support).
struct GridConfig {
    double r_max = 0.0;
    std::size_t nodes = 4001;
};

/// Compactly supported ground state of -Lap w + 1 = w^{p/2-1}: the profile,
/// its derivative samples, the free-boundary radius and the L^1 norm.
struct QpProfile {
    RadialField profile;
    RadialField profile_derivative;
    double support_radius = 0.0;
    double initial_height = 0.0; // beta = Q_p(0)
    double l1_norm = 0.0;
    double p = 0.0;
    int dimension = 0;
    double boundary_value = 0.0; // |w(R)|
    double boundary_slope = 0.0; // |w'(R)|
};

/// Free-boundary shooting: bisect on w(0) = beta between the undershoot
/// regime (w' returns to 0 with w > 0) and the overshoot regime (w reaches 0
/// with w' < 0) until both w and w' vanish at a common radius. Optional
/// beta_lo/beta_hi select the starting bracket; zero means automatic scan.
QpProfile shoot_qp(double p, int dimension, const GridConfig& cfg = {},
                   double beta_lo = 0.0, double beta_hi = 0.0);

/// Memoized profile cache keyed on (p, N); access is synchronized.
const QpProfile& cached_qp_profile(double p, int dimension);

/// a_* = L^1 norm of Q_{4+4/N}; memoized per dimension.
double a_star(int dimension);

/// Sharp Gagliardo-Nirenberg prefactor pinned numerically from the equality
/// case u = Q_p^{1/2}; memoized per (p, N).
const SharpGnConstant& sharp_gn_constant(double p, int dimension);

} // namespace qnls
