#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qnls/fiber.hpp"
#include "qnls/shooting.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace qnls;
using qnls::testing::rel_err;

TEST_CASE("free-boundary shooting pins the analytic height for N=1, p=8") {
    const QpProfile qp = shoot_qp(8.0, 1);
    const double beta_exact = std::pow(4.0, 1.0 / 3.0); // (p/2)^{2/(p-2)}
    CHECK(std::abs(qp.initial_height - beta_exact) < 1e-4);
    CHECK(qp.boundary_value <= 1e-8 * qp.initial_height);
    CHECK(qp.boundary_slope <= 1e-8 * qp.initial_height);
    MESSAGE("beta = ", qp.initial_height, "  R = ", qp.support_radius,
            "  |Q_8|_1 = ", qp.l1_norm);

    // first integral of the planar Hamiltonian system, pointwise on support
    double worst = 0.0;
    for (std::size_t i = 0; i < qp.profile.size(); ++i) {
        if (qp.profile.grid().node(i) > qp.support_radius)
            break;
        const double w = qp.profile[i];
        const double v = qp.profile_derivative[i];
        worst = std::max(worst,
                         std::abs(0.5 * v * v - w + 2.0 / 8.0 * std::pow(w, 4.0)));
    }
    MESSAGE("first integral sup = ", worst);
    CHECK(worst < 1e-8);
}

TEST_CASE("uniqueness: independent brackets agree") {
    const QpProfile a = shoot_qp(8.0, 1, {}, 1.05, 3.0);
    const QpProfile b = shoot_qp(8.0, 1, {}, 1.5, 1.7);
    CHECK(std::abs(a.initial_height - b.initial_height) < 1e-8);
}

TEST_CASE("free-boundary conditions hold for several (p, N)") {
    for (auto [p, n] : {std::pair{6.0, 2}, {5.5, 3}, {7.0, 1}}) {
        const QpProfile qp = shoot_qp(p, n);
        CHECK(qp.boundary_value <= 1e-8 * qp.initial_height);
        CHECK(qp.boundary_slope <= 1e-8 * qp.initial_height);
        CHECK(qp.l1_norm > 0.0);
        MESSAGE("p=", p, " N=", n, " beta=", qp.initial_height,
                " R=", qp.support_radius, " l1=", qp.l1_norm);
    }
}

TEST_CASE("a_star values and mesh stability") {
    for (int n : {1, 2, 3})
        CHECK(a_star(n) > 0.0);
    // regression fixtures, mesh-refined to three stable digits
    CHECK(std::abs(a_star(1) - 2.9619) < 2e-3);
    CHECK(std::abs(a_star(2) - 13.888) < 1e-2);
    CHECK(std::abs(a_star(3) - 82.180) < 6e-2);

    GridConfig coarse;
    coarse.nodes = 4001;
    GridConfig fine;
    fine.nodes = 16001;
    const double l1_coarse = shoot_qp(8.0, 1, coarse).l1_norm;
    const double l1_fine = shoot_qp(8.0, 1, fine).l1_norm;
    CHECK(rel_err(l1_coarse, l1_fine) < 1e-3);
}

TEST_CASE("sharp GN equality at u = Q_{p*}^{1/2}") {
    for (int n : {1, 2, 3}) {
        const double p_star = mass_critical_exponent(n);
        const QpProfile& qp = cached_qp_profile(p_star, n);
        std::vector<double> v(qp.profile.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = std::sqrt(qp.profile[i]);
        RadialField u0(qp.profile.grid_ptr(), std::move(v));

        ModelParams prm;
        prm.dimension = n;
        prm.p = p_star;
        prm.mass = qp.l1_norm;
        prm.theta = default_theta(n);
        prm.mu = 0.0;
        const FiberMasses m = compute_masses(u0, prm);
        const double ratio = m.a_p / (4.0 * (n + 1.0) / n * m.a_quad);
        MESSAGE("N=", n, " GN equality ratio = ", ratio);
        CHECK(std::abs(ratio - 1.0) < 1e-2);

        // Q(u0) collapses to the gradient mass at the critical exponent
        const double q = pohozaev_Q_mu(m, prm);
        CHECK(rel_err(q, m.a_grad) < 2e-2);

        // equality case of the ratio functional itself
        const SharpGnConstant& sharp = sharp_gn_constant(p_star, n);
        CHECK(rel_err(gn_ratio(u0, prm, sharp), 1.0) < 1e-12);
    }
}

TEST_CASE("critical set membership of the threshold family") {
    const int n = 1;
    const double p_star = mass_critical_exponent(n);
    const QpProfile& qp = cached_qp_profile(p_star, n);
    ModelParams prm;
    prm.dimension = n;
    prm.p = p_star;
    prm.theta = 2.0;
    prm.mu = 0.0;

    auto w_with_mass = [&](double mass_value) {
        const double f = std::sqrt(mass_value / qp.l1_norm);
        std::vector<double> v(qp.profile.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = f * std::sqrt(qp.profile[i]);
        return RadialField(qp.profile.grid_ptr(), std::move(v));
    };

    CHECK(!critical_set_membership(FiberMasses{}, n));
    // at a = a* the defining inequality degenerates to equality; the
    // discretized coefficient must vanish to quadrature accuracy
    const FiberMasses m_star = compute_masses(w_with_mass(qp.l1_norm), prm);
    CHECK(std::abs(m_star.a_quad - n / (4.0 * (n + 1.0)) * m_star.a_p) <
          1e-4 * m_star.a_p);
    // below the threshold: strictly outside O
    const FiberMasses m_below = compute_masses(w_with_mass(0.9 * qp.l1_norm), prm);
    CHECK(!critical_set_membership(m_below, n));
    // above the threshold: w_a enters O
    const FiberMasses m_above = compute_masses(w_with_mass(1.1 * qp.l1_norm), prm);
    CHECK(critical_set_membership(m_above, n));
}

TEST_CASE("GN ratio is invariant along the fiber at p = p*") {
    const int n = 1;
    const double p_star = mass_critical_exponent(n);
    const SharpGnConstant& sharp = sharp_gn_constant(p_star, n);
    ModelParams prm;
    prm.dimension = n;
    prm.p = p_star;
    prm.theta = 2.0;
    prm.mu = 0.0;

    auto g = make_grid(1, 30.0, 8001);
    std::mt19937 rng(41);
    RadialField u = qnls::testing::random_smooth_field(g, rng, 1.0, 2.0);
    const double rho0 = gn_ratio(u, prm, sharp);
    for (double s : {-0.5, 0.4}) {
        const double rho_s = gn_ratio(scale_field(u, s), prm, sharp);
        CHECK(rel_err(rho_s, rho0) < 1e-4);
    }
}

TEST_CASE("shoot_qp rejects out-of-range exponents") {
    CHECK_THROWS(shoot_qp(1.5, 2));
    CHECK_THROWS(shoot_qp(13.0, 3)); // beyond 2*2^* = 12
}
