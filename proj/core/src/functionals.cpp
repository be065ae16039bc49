#include "qnls/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qnls {

namespace {

// |grad u|^{theta-2} regularization; theta > 2 here, the floor only protects
// derivative formulas at grad u = 0.
constexpr double kGradReg = 1e-14;

inline double signed_power(double u, double p) {
    // |u|^{p-2} u
    if (u == 0.0) return 0.0;
    const double a = std::pow(std::abs(u), p - 1.0);
    return u > 0.0 ? a : -a;
}

// Second derivative on a uniform grid: central inside, even extension at the
// origin, one-sided second order at r = R_max.
std::vector<double> second_derivative(const RadialField& u) {
    const std::size_t n = u.size();
    const double h = u.grid().spacing();
    const auto& v = u.values();
    std::vector<double> dd(n);
    dd[0] = 2.0 * (v[1] - v[0]) / (h * h);
    for (std::size_t i = 1; i + 1 < n; ++i)
        dd[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
    dd[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / (h * h);
    return dd;
}

// div(F e_r) = F' + (N-1) F/r for an odd flux profile F (F(0) = 0); the
// removable singularity at the origin gives N F'(0).
std::vector<double> radial_divergence(const RadialGrid& grid,
                                      const std::vector<double>& flux) {
    const std::size_t n = flux.size();
    const double h = grid.spacing();
    const int dim = grid.dimension();
    std::vector<double> div(n);
    div[0] = dim * flux[1] / h; // odd extension: F'(0) = F(h)/h + O(h^2)
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double dflux = (flux[i + 1] - flux[i - 1]) / (2.0 * h);
        div[i] = dflux + (dim - 1) * flux[i] / grid.node(i);
    }
    const double dlast =
        (3.0 * flux[n - 1] - 4.0 * flux[n - 2] + flux[n - 3]) / (2.0 * h);
    div[n - 1] = dlast + (dim - 1) * flux[n - 1] / grid.node(n - 1);
    return div;
}

} // namespace

FiberMasses compute_masses(const RadialField& u, const ModelParams& prm) {
    const RadialField du = radial_derivative(u);
    const auto& w = u.grid().weights();
    const auto& uv = u.values();
    const auto& dv = du.values();
    FiberMasses m;
    for (std::size_t i = 0; i < uv.size(); ++i) {
        const double g2 = dv[i] * dv[i];
        const double u2 = uv[i] * uv[i];
        m.a_theta += w[i] * std::pow(g2, 0.5 * prm.theta);
        m.a_grad += w[i] * g2;
        m.a_quad += w[i] * u2 * g2;
        m.a_p += w[i] * std::pow(std::abs(uv[i]), prm.p);
        m.mass += w[i] * u2;
    }
    return m;
}

double energy_I(const FiberMasses& m, const ModelParams& prm) {
    return 0.5 * m.a_grad + m.a_quad - m.a_p / prm.p;
}

double energy_I_mu(const FiberMasses& m, const ModelParams& prm) {
    return prm.mu / prm.theta * m.a_theta + energy_I(m, prm);
}

double pohozaev_Q_mu(const FiberMasses& m, const ModelParams& prm) {
    const double g_th = gamma_exponent(prm.theta, prm.dimension);
    const double g_p = gamma_exponent(prm.p, prm.dimension);
    return (1.0 + g_th) * prm.mu * m.a_theta + m.a_grad +
           (2.0 + prm.dimension) * m.a_quad - g_p * m.a_p;
}

double pohozaev_scale(const FiberMasses& m, const ModelParams& prm) {
    const double g_th = gamma_exponent(prm.theta, prm.dimension);
    const double g_p = gamma_exponent(prm.p, prm.dimension);
    return std::abs((1.0 + g_th) * prm.mu * m.a_theta) + std::abs(m.a_grad) +
           std::abs((2.0 + prm.dimension) * m.a_quad) + std::abs(g_p * m.a_p);
}

double pohozaev_relative(const FiberMasses& m, const ModelParams& prm) {
    const double scale = pohozaev_scale(m, prm);
    if (scale == 0.0) return 0.0;
    return std::abs(pohozaev_Q_mu(m, prm)) / scale;
}

double lagrange_lambda(const FiberMasses& m, const ModelParams& prm) {
    if (!(m.mass > 0.0))
        throw std::invalid_argument("lagrange_lambda: zero-mass input");
    return (m.a_p - prm.mu * m.a_theta - m.a_grad - 4.0 * m.a_quad) / m.mass;
}

double multiplier_balance(const FiberMasses& m, const ModelParams& prm) {
    if (!(m.mass > 0.0))
        throw std::invalid_argument("multiplier_balance: zero-mass input");
    const int n = prm.dimension;
    const double g_th = gamma_exponent(prm.theta, n);
    const double g_p = gamma_exponent(prm.p, n);
    const double lambda = lagrange_lambda(m, prm);
    const double lhs = lambda * g_p * m.mass;
    const double rhs = (1.0 + g_th - g_p) * prm.mu * m.a_theta +
                       (2.0 * n - (n - 2.0) * prm.p) / (2.0 * prm.p) * m.a_grad +
                       (4.0 * n - (n - 2.0) * prm.p) / prm.p * m.a_quad;
    return lhs - rhs;
}

double multiplier_balance_relative(const FiberMasses& m, const ModelParams& prm) {
    const int n = prm.dimension;
    const double g_th = gamma_exponent(prm.theta, n);
    const double g_p = gamma_exponent(prm.p, n);
    const double lambda = lagrange_lambda(m, prm);
    const double scale = std::abs(lambda * g_p * m.mass) +
                         std::abs((1.0 + g_th - g_p) * prm.mu * m.a_theta) +
                         std::abs((2.0 * n - (n - 2.0) * prm.p) / (2.0 * prm.p)) * m.a_grad +
                         std::abs((4.0 * n - (n - 2.0) * prm.p) / prm.p) * m.a_quad;
    if (scale == 0.0) return 0.0;
    return std::abs(multiplier_balance(m, prm)) / scale;
}

bool critical_set_membership(const FiberMasses& m, int dimension) {
    return m.a_quad < dimension / (4.0 * (dimension + 1.0)) * m.a_p;
}

double gn_ratio(const RadialField& u, const ModelParams& prm,
                const SharpGnConstant& sharp) {
    FiberMasses m = compute_masses(u, prm);
    if (!(m.mass > 0.0))
        throw std::invalid_argument("gn_ratio: zero field");
    const double rhs = sharp.prefactor * std::pow(m.mass, sharp.alpha) *
                       std::pow(4.0 * m.a_quad, sharp.beta);
    return m.a_p / rhs;
}

RadialField functional_gradient(const RadialField& u, const ModelParams& prm) {
    const RadialGrid& grid = u.grid();
    const std::size_t n = u.size();
    const int dim = grid.dimension();
    const auto& uv = u.values();
    const RadialField du = radial_derivative(u);
    const auto& dv = du.values();
    const auto ddv = second_derivative(u);

    // Laplacian with the even-symmetry limit N u''(0) at the origin.
    std::vector<double> lap(n);
    lap[0] = dim * ddv[0];
    for (std::size_t i = 1; i < n; ++i)
        lap[i] = ddv[i] + (dim - 1) * dv[i] / grid.node(i);

    std::vector<double> g(n);

    std::vector<double> div_theta;
    if (prm.mu > 0.0) {
        std::vector<double> flux(n);
        const double e = 0.5 * (prm.theta - 2.0);
        for (std::size_t i = 0; i < n; ++i)
            flux[i] = std::pow(dv[i] * dv[i] + kGradReg, e) * dv[i];
        div_theta = radial_divergence(grid, flux);
    }

    std::vector<double> flux_q(n);
    for (std::size_t i = 0; i < n; ++i)
        flux_q[i] = uv[i] * uv[i] * dv[i];
    const auto div_q = radial_divergence(grid, flux_q);

    for (std::size_t i = 0; i < n; ++i) {
        double gi = -lap[i] - 2.0 * div_q[i] + 2.0 * uv[i] * dv[i] * dv[i] -
                    signed_power(uv[i], prm.p);
        if (prm.mu > 0.0)
            gi -= prm.mu * div_theta[i];
        g[i] = gi;
    }
    return RadialField(u.grid_ptr(), std::move(g));
}

double el_residual(const RadialField& u, double lambda, const ModelParams& prm) {
    const RadialGrid& grid = u.grid();
    const std::size_t n = u.size();
    const int dim = grid.dimension();
    const auto& uv = u.values();
    const RadialField du = radial_derivative(u);
    const auto& dv = du.values();
    const auto ddv = second_derivative(u);
    const auto& w = grid.weights();

    double nr = 0.0, n1 = 0.0, n2 = 0.0, n3 = 0.0, n4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lap = (i == 0) ? dim * ddv[0]
                                    : ddv[i] + (dim - 1) * dv[i] / grid.node(i);
        const double t1 = (1.0 + 2.0 * uv[i] * uv[i]) * lap;
        const double t2 = 2.0 * uv[i] * dv[i] * dv[i];
        const double t3 = -lambda * uv[i];
        const double t4 = signed_power(uv[i], prm.p);
        const double res = t1 + t2 + t3 + t4;
        nr += w[i] * res * res;
        n1 += w[i] * t1 * t1;
        n2 += w[i] * t2 * t2;
        n3 += w[i] * t3 * t3;
        n4 += w[i] * t4 * t4;
    }
    const double scale = std::sqrt(std::max({n1, n2, n3, n4}));
    if (scale == 0.0) return 0.0;
    return std::sqrt(nr) / scale;
}

} // namespace qnls
