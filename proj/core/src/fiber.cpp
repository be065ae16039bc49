#include "qnls/fiber.hpp"

#include <cmath>

namespace qnls {

namespace {

constexpr double kBracketCap = 50.0;

struct FiberExponents {
    double c_theta, c_grad, c_quad, c_p; // term coefficients of fiber_Q
    double e_theta, e_grad, e_quad, e_p; // dilation exponents

    FiberExponents(const FiberMasses& m, const ModelParams& prm) {
        const double g_th = gamma_exponent(prm.theta, prm.dimension);
        const double g_p = gamma_exponent(prm.p, prm.dimension);
        c_theta = (1.0 + g_th) * prm.mu * m.a_theta;
        c_grad = m.a_grad;
        c_quad = (2.0 + prm.dimension) * m.a_quad;
        c_p = gamma_exponent(prm.p, prm.dimension) * m.a_p;
        e_theta = prm.theta * (1.0 + g_th);
        e_grad = 2.0;
        e_quad = 2.0 + prm.dimension;
        e_p = prm.p * g_p;
    }

    // Q_mu(s*u); safe for s <= 0 where every exponential decays.
    double q_raw(double s) const {
        return c_theta * std::exp(e_theta * s) + c_grad * std::exp(e_grad * s) +
               c_quad * std::exp(e_quad * s) - c_p * std::exp(e_p * s);
    }

    // e^{-e_p s} Q_mu(s*u): strictly decreasing, safe for s >= 0 where every
    // shifted exponent is <= 0.
    double q_factored(double s) const {
        return c_theta * std::exp((e_theta - e_p) * s) +
               c_grad * std::exp((e_grad - e_p) * s) +
               c_quad * std::exp((e_quad - e_p) * s) - c_p;
    }

    double q_factored_deriv(double s) const {
        return c_theta * (e_theta - e_p) * std::exp((e_theta - e_p) * s) +
               c_grad * (e_grad - e_p) * std::exp((e_grad - e_p) * s) +
               c_quad * (e_quad - e_p) * std::exp((e_quad - e_p) * s);
    }

    // Overflow-safe sign of Q_mu(s*u).
    double value(double s) const { return s <= 0.0 ? q_raw(s) : q_factored(s); }

    double scale(double s) const {
        if (s <= 0.0)
            return std::abs(c_theta) * std::exp(e_theta * s) +
                   std::abs(c_grad) * std::exp(e_grad * s) +
                   std::abs(c_quad) * std::exp(e_quad * s) +
                   std::abs(c_p) * std::exp(e_p * s);
        return std::abs(c_theta) * std::exp((e_theta - e_p) * s) +
               std::abs(c_grad) * std::exp((e_grad - e_p) * s) +
               std::abs(c_quad) * std::exp((e_quad - e_p) * s) + std::abs(c_p);
    }
};

} // namespace

RadialField scale_field(const RadialField& u, double s) {
    if (s == 0.0)
        return u;
    const int dim = u.grid().dimension();
    const double amp = std::exp(0.5 * dim * s);
    if (std::abs(s) <= 1.0) {
        MonotoneCubic interp(u);
        const double stretch = std::exp(s);
        std::vector<double> v(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            v[i] = amp * interp(stretch * u.grid().node(i));
        return RadialField(u.grid_ptr(), std::move(v));
    }
    // Rescaling the grid by e^{-s} maps nodes onto nodes: no interpolation.
    GridPtr target =
        make_grid(dim, u.grid().r_max() * std::exp(-s), u.grid().size());
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        v[i] = amp * u[i];
    return RadialField(std::move(target), std::move(v));
}

double fiber_energy(const FiberMasses& m, double s, const ModelParams& prm) {
    const double g_th = gamma_exponent(prm.theta, prm.dimension);
    const double g_p = gamma_exponent(prm.p, prm.dimension);
    return prm.mu / prm.theta * std::exp(prm.theta * (1.0 + g_th) * s) * m.a_theta +
           0.5 * std::exp(2.0 * s) * m.a_grad +
           std::exp((2.0 + prm.dimension) * s) * m.a_quad -
           std::exp(prm.p * g_p * s) / prm.p * m.a_p;
}

double fiber_Q(const FiberMasses& m, double s, const ModelParams& prm) {
    return FiberExponents(m, prm).q_raw(s);
}

double fiber_Q_scale(const FiberMasses& m, double s, const ModelParams& prm) {
    FiberExponents f(m, prm);
    return std::abs(f.c_theta) * std::exp(f.e_theta * s) +
           std::abs(f.c_grad) * std::exp(f.e_grad * s) +
           std::abs(f.c_quad) * std::exp(f.e_quad * s) +
           std::abs(f.c_p) * std::exp(f.e_p * s);
}

FiberSolveResult solve_s_mu(const FiberMasses& m, const ModelParams& prm) {
    const FiberExponents f(m, prm);
    const bool critical = is_mass_critical(prm);

    if (f.c_p <= 0.0)
        throw FiberProjectionError("solve_s_mu: vanishing |u|^p mass, no root");
    if (critical) {
        if (!critical_set_membership(m, prm.dimension))
            throw FiberProjectionError(
                "solve_s_mu: mass-critical field outside the open set O "
                "(a_quad >= N/(4(N+1)) a_p); the fiber energy has no maximum");
        if (!(prm.mu * m.a_theta > 0.0 || m.a_grad > 0.0))
            throw FiberProjectionError(
                "solve_s_mu: mass-critical root needs mu > 0 or a nonzero "
                "gradient term");
    }

    FiberSolveResult out;

    // Bracket by expanding doubling steps from s = 0.
    double lo, hi;
    const double q0 = f.value(0.0);
    if (q0 == 0.0) {
        out.s_star = 0.0;
        out.energy_at_star = fiber_energy(m, 0.0, prm);
        out.bracket = {0.0, 0.0};
        return out;
    }
    if (q0 > 0.0) {
        lo = 0.0;
        double step = 1.0;
        hi = step;
        while (f.value(hi) > 0.0) {
            if (hi >= kBracketCap)
                throw FiberProjectionError(
                    "solve_s_mu: no sign change of the fiber derivative within "
                    "|s| <= 50 (precondition violated)");
            lo = hi;
            step *= 2.0;
            hi = std::min(hi + step, kBracketCap);
        }
    } else {
        hi = 0.0;
        double step = 1.0;
        lo = -step;
        while (f.value(lo) < 0.0) {
            if (lo <= -kBracketCap)
                throw FiberProjectionError(
                    "solve_s_mu: no sign change of the fiber derivative within "
                    "|s| <= 50 (precondition violated)");
            hi = lo;
            step *= 2.0;
            lo = std::max(lo - step, -kBracketCap);
        }
    }

    // Safeguarded Newton on the factored decreasing form, bisection fallback.
    double s = 0.5 * (lo + hi);
    double fs = f.value(s);
    for (int it = 0; it < 60; ++it) {
        ++out.iterations;
        if (fs > 0.0) lo = s; else hi = s;
        if (std::abs(fs) <= 1e-13 * f.scale(s) || hi - lo <= 1e-14 * (1.0 + std::abs(s)))
            break;
        double s_next = s;
        bool newton_ok = false;
        if (s >= 0.0) {
            const double d = f.q_factored_deriv(s);
            if (d < 0.0) {
                s_next = s - f.q_factored(s) / d;
                newton_ok = (s_next > lo && s_next < hi);
            }
        }
        if (!newton_ok)
            s_next = 0.5 * (lo + hi);
        s = s_next;
        fs = f.value(s);
    }

    out.s_star = s;
    out.energy_at_star = fiber_energy(m, s, prm);
    out.bracket = {lo, hi};
    return out;
}

double fiber_max_energy(const FiberMasses& m, const ModelParams& prm) {
    return solve_s_mu(m, prm).energy_at_star;
}

double fiber_max_energy(const RadialField& u, const ModelParams& prm) {
    return fiber_max_energy(compute_masses(u, prm), prm);
}

} // namespace qnls
