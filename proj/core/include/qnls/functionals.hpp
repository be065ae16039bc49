#pragma once

#include "qnls/model.hpp"
#include "qnls/radial.hpp"

namespace qnls {

/// The five integrals that determine every fiber formula exactly:
/// a_theta = int |grad u|^theta, a_grad = int |grad u|^2,
/// a_quad = int u^2 |grad u|^2, a_p = int |u|^p, mass = int u^2.
struct FiberMasses {
    double a_theta = 0.0;
    double a_grad = 0.0;
    double a_quad = 0.0;
    double a_p = 0.0;
    double mass = 0.0;
};

FiberMasses compute_masses(const RadialField& u, const ModelParams& prm);

/// I(u) = a_grad/2 + a_quad - a_p/p.
double energy_I(const FiberMasses& m, const ModelParams& prm);

/// I_mu(u) = (mu/theta) a_theta + I(u).
double energy_I_mu(const FiberMasses& m, const ModelParams& prm);

/// Q_mu(u) = (1+gamma_theta) mu a_theta + a_grad + (2+N) a_quad - gamma_p a_p,
/// the fiber derivative of I_mu at s = 0.
double pohozaev_Q_mu(const FiberMasses& m, const ModelParams& prm);

/// Sum of the magnitudes of the four Q_mu terms; the natural scale for
/// relative Pohozaev residuals.
double pohozaev_scale(const FiberMasses& m, const ModelParams& prm);

double pohozaev_relative(const FiberMasses& m, const ModelParams& prm);

/// lambda = (a_p - mu a_theta - a_grad - 4 a_quad) / mass, the multiplier
/// obtained by testing the Euler-Lagrange equation with u itself.
double lagrange_lambda(const FiberMasses& m, const ModelParams& prm);

/// Residual of the multiplier identity
///   lambda gamma_p mass = (1+gamma_theta-gamma_p) mu a_theta
///        + (2N-(N-2)p)/(2p) a_grad + (4N-(N-2)p)/p a_quad,
/// with lambda from lagrange_lambda. Vanishes identically when Q_mu = 0.
double multiplier_balance(const FiberMasses& m, const ModelParams& prm);

double multiplier_balance_relative(const FiberMasses& m, const ModelParams& prm);

/// Membership in the mass-critical open set: a_quad < N/(4(N+1)) a_p.
bool critical_set_membership(const FiberMasses& m, int dimension);

/// Sharp prefactor of the Gagliardo-Nirenberg-type inequality
///   int |u|^p <= prefactor (int u^2)^alpha (4 int u^2|grad u|^2)^beta,
/// computed from the equality case u = Q_p^{1/2}. closed_form_prefactor keeps
/// the literature constant for comparison; the numeric value is the one used.
struct SharpGnConstant {
    double p = 0.0;
    int dimension = 0;
    double prefactor = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double closed_form_prefactor = 0.0;
};

/// Ratio int|u|^p / (prefactor (int u^2)^alpha (4 int u^2|grad u|^2)^beta);
/// <= 1 up to quadrature error for every u, with equality at u = Q_p^{1/2}.
double gn_ratio(const RadialField& u, const ModelParams& prm,
                const SharpGnConstant& sharp);

/// Pointwise variational derivative of I_mu in radial coordinates:
///   g = -mu div(|grad u|^{theta-2} grad u) - Lap u - 2 div(u^2 grad u)
///       + 2 u |grad u|^2 - |u|^{p-2} u,
/// with Lap u = u'' + (N-1) u'/r and N u''(0) at the origin.
RadialField functional_gradient(const RadialField& u, const ModelParams& prm);

/// L^2 norm of (1+2u^2) Lap u + 2u (u')^2 - lambda u + |u|^{p-2} u,
/// normalized by the L^2 norm of its largest term. Zero at solutions.
double el_residual(const RadialField& u, double lambda, const ModelParams& prm);

} // namespace qnls
