#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qnls/functionals.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace qnls;
using qnls::testing::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams params(int n, double p, double theta, double mu, double a = 1.0) {
    ModelParams prm;
    prm.dimension = n;
    prm.p = p;
    prm.mass = a;
    prm.theta = theta;
    prm.mu = mu;
    return prm;
}

FiberMasses random_masses(std::mt19937& rng) {
    std::uniform_real_distribution<double> pos(0.1, 4.0);
    FiberMasses m;
    m.a_theta = pos(rng);
    m.a_grad = pos(rng);
    m.a_quad = pos(rng);
    m.a_p = pos(rng);
    m.mass = pos(rng);
    return m;
}

} // namespace

TEST_CASE("gamma exponent") {
    CHECK(gamma_exponent(2.0, 1) == 0.0);
    CHECK(gamma_exponent(2.0, 3) == 0.0);
    CHECK(rel_err(gamma_exponent(6.0, 2), 2.0 / 3.0) < 1e-15);
    for (int n : {1, 2, 3, 4}) {
        const double q = mass_critical_exponent(n);
        CHECK(rel_err(q * gamma_exponent(q, n), n + 2.0) < 1e-14);
    }
}

TEST_CASE("masses of reference Gaussians") {
    auto g = make_grid(1, 12.0, 8001);
    RadialField u = RadialField::from_function(
        g, [](double r) { return std::exp(-0.5 * r * r); });
    const ModelParams prm = params(1, 4.0, 2.5, 0.0);
    const FiberMasses m = compute_masses(u, prm);
    CHECK(std::abs(m.a_grad - std::sqrt(kPi) / 2.0) < 1e-6);
    CHECK(std::abs(m.a_p - std::sqrt(kPi / 2.0)) < 1e-6);
    CHECK(std::abs(m.mass - std::sqrt(kPi)) < 1e-6);

    const FiberMasses z = compute_masses(RadialField::zeros(g), prm);
    CHECK(z.a_theta == 0.0);
    CHECK(z.a_grad == 0.0);
    CHECK(z.a_quad == 0.0);
    CHECK(z.a_p == 0.0);
    CHECK(z.mass == 0.0);
}

TEST_CASE("energy formulas") {
    FiberMasses m;
    m.a_theta = 1.0;
    m.a_grad = 2.0;
    m.a_quad = 3.0;
    m.a_p = 4.0;
    m.mass = 1.0;
    CHECK(energy_I(m, params(2, 4.0, 2.5, 0.0)) == doctest::Approx(3.0));
    CHECK(energy_I(FiberMasses{}, params(2, 4.0, 2.5, 0.0)) == 0.0);

    FiberMasses only_theta;
    only_theta.a_theta = 2.5;
    CHECK(energy_I_mu(only_theta, params(2, 7.0, 2.5, 1.0)) == doctest::Approx(1.0));
    CHECK(energy_I_mu(m, params(2, 7.0, 2.5, 0.0)) ==
          doctest::Approx(energy_I(m, params(2, 7.0, 2.5, 0.0))));

    // monotone in mu for every field
    std::mt19937 rng(3);
    for (int t = 0; t < 20; ++t) {
        const FiberMasses mm = random_masses(rng);
        const double e1 = energy_I_mu(mm, params(2, 7.0, 2.5, 0.2));
        const double e2 = energy_I_mu(mm, params(2, 7.0, 2.5, 0.7));
        CHECK(e2 >= e1);
    }
}

TEST_CASE("Pohozaev functional basics") {
    CHECK(pohozaev_Q_mu(FiberMasses{}, params(2, 7.0, 2.5, 0.5)) == 0.0);
    std::mt19937 rng(11);
    // identity: I_mu - Q_mu/(p gamma_p) has the closed three-term form
    for (int t = 0; t < 50; ++t) {
        const FiberMasses m = random_masses(rng);
        for (const auto& prm :
             {params(2, 7.0, 2.5, 0.4), params(3, 6.0, 2.7, 1.0), params(1, 9.0, 2.0, 0.0)}) {
            const double g_p = gamma_exponent(prm.p, prm.dimension);
            const double g_t = gamma_exponent(prm.theta, prm.dimension);
            const double pgp = prm.p * g_p;
            const double lhs =
                energy_I_mu(m, prm) - pohozaev_Q_mu(m, prm) / pgp;
            const double rhs =
                (pgp - prm.theta - prm.theta * g_t) / (prm.theta * pgp) * prm.mu * m.a_theta +
                (pgp - 2.0) / (2.0 * pgp) * m.a_grad +
                (pgp - 2.0 - prm.dimension) / pgp * m.a_quad;
            CHECK(rel_err(lhs, rhs) < 1e-13);
        }
    }
}

TEST_CASE("Lagrange multiplier formula") {
    FiberMasses m;
    m.a_grad = 1.0;
    m.a_quad = 0.5;
    m.a_p = 0.0;
    m.mass = 2.0;
    CHECK(lagrange_lambda(m, params(2, 7.0, 2.5, 0.0)) < 0.0);

    FiberMasses zero;
    CHECK_THROWS_AS((void)lagrange_lambda(zero, params(2, 7.0, 2.5, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("multiplier balance vanishes exactly on the manifold") {
    std::mt19937 rng(17);
    for (int t = 0; t < 100; ++t) {
        FiberMasses m = random_masses(rng);
        for (auto prm :
             {params(2, 7.0, 2.5, 0.4), params(3, 6.0, 2.7, 0.9), params(2, 6.0, 2.2, 0.0)}) {
            // adjust a_p so that Q_mu = 0 holds algebraically
            const double g_p = gamma_exponent(prm.p, prm.dimension);
            const double g_t = gamma_exponent(prm.theta, prm.dimension);
            m.a_p = ((1.0 + g_t) * prm.mu * m.a_theta + m.a_grad +
                     (2.0 + prm.dimension) * m.a_quad) / g_p;
            CHECK(multiplier_balance_relative(m, prm) < 1e-12);

            // off the manifold the residual equals -Q_mu (algebraic route)
            m.a_p *= 1.37;
            const double bal = multiplier_balance(m, prm);
            const double q = pohozaev_Q_mu(m, prm);
            CHECK(rel_err(bal, -q) < 1e-12);
            CHECK(std::abs(bal) > 1e-6);
        }
    }
}

TEST_CASE("critical set membership") {
    CHECK(!critical_set_membership(FiberMasses{}, 2)); // strict inequality at zero
    FiberMasses m;
    m.a_quad = 1.0;
    m.a_p = 1.0;
    CHECK(critical_set_membership(m, 1) == (1.0 < 1.0 / 8.0 * 1.0 ? true : false));
    m.a_quad = 0.1;
    m.a_p = 10.0;
    CHECK(critical_set_membership(m, 1));
}

TEST_CASE("functional gradient matches finite differences of the energy") {
    auto g = make_grid(2, 14.0, 14001);
    std::mt19937 rng(23);
    const ModelParams prm = params(2, 7.0, 2.5, 0.3);
    double worst = 0.0;
    for (int t = 0; t < 6; ++t) {
        RadialField u = qnls::testing::random_smooth_field(g, rng);
        RadialField phi = qnls::testing::random_smooth_field(g, rng);
        const RadialField grad = functional_gradient(u, prm);
        const double pairing = inner_product(grad, phi);

        const double t0 = 1e-6;
        auto energy_at = [&](double tt) {
            std::vector<double> v(u.size());
            for (std::size_t i = 0; i < u.size(); ++i)
                v[i] = u[i] + tt * phi[i];
            return energy_I_mu(compute_masses(RadialField(g, v), prm), prm);
        };
        const double fd = (energy_at(t0) - energy_at(-t0)) / (2.0 * t0);
        const double scale = std::max(std::abs(fd),
                                      1e-3 * std::sqrt(inner_product(grad, grad) *
                                                       inner_product(phi, phi)));
        worst = std::max(worst, std::abs(pairing - fd) / scale);
    }
    MESSAGE("worst relative duality error: ", worst);
    CHECK(worst < 1e-5);

    const ModelParams prm0 = params(2, 7.0, 2.5, 0.0);
    RadialField gz = functional_gradient(RadialField::zeros(g), prm0);
    for (double v : gz.values())
        CHECK(v == 0.0);
}

TEST_CASE("el_residual of the zero field") {
    auto g = make_grid(2, 10.0, 1001);
    CHECK(el_residual(RadialField::zeros(g), 1.3, params(2, 7.0, 2.5, 0.0)) == 0.0);
}
