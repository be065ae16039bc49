#pragma once

#include "qnls/functionals.hpp"

#include <array>

namespace qnls {

/// Raised when the fiber derivative has no root: either degenerate masses or
/// a mass-critical field outside the open set O, along which the fiber
/// maximum blows up.
class FiberProjectionError : public std::domain_error {
public:
    explicit FiberProjectionError(const std::string& what)
        : std::domain_error(what) {}
};

/// Root of the fiber derivative and the fiber-maximal energy there.
struct FiberSolveResult {
    double s_star = 0.0;
    double energy_at_star = 0.0;
    int iterations = 0;
    std::array<double, 2> bracket{0.0, 0.0};
};

/// Mass-preserving dilation (s*u)(r) = e^{Ns/2} u(e^s r). For |s| <= 1 the
/// result lives on the same grid (monotone cubic resampling, zero past the
/// source R_max); for larger |s| the grid itself is rescaled by e^{-s}, which
/// makes the transform exact.
RadialField scale_field(const RadialField& u, double s);

/// I_mu(s*u) from the closed-form exponent transforms; no resampling.
double fiber_energy(const FiberMasses& m, double s, const ModelParams& prm);

/// Q_mu(s*u) = d/ds I_mu(s*u), again in closed form.
double fiber_Q(const FiberMasses& m, double s, const ModelParams& prm);

/// Sum of the term magnitudes of fiber_Q at s, for relative residuals.
double fiber_Q_scale(const FiberMasses& m, double s, const ModelParams& prm);

/// The unique root s_mu(u) of fiber_Q: bracketing by doubling steps capped at
/// |s| = 50, then safeguarded Newton on the factored strictly decreasing form.
FiberSolveResult solve_s_mu(const FiberMasses& m, const ModelParams& prm);

/// K_mu(u) = I_mu(s_mu(u)*u), the maximum of the energy along the fiber.
double fiber_max_energy(const FiberMasses& m, const ModelParams& prm);
double fiber_max_energy(const RadialField& u, const ModelParams& prm);

} // namespace qnls
