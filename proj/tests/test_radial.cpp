#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qnls/radial.hpp"
#include "test_helpers.hpp"

#include <cmath>
#include <numbers>

using namespace qnls;
using qnls::testing::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("quadrature reproduces ball volumes and Gaussian integrals") {
    // f = 1 on the unit ball
    auto g3 = make_grid(3, 1.0, 2001);
    CHECK(rel_err(integrate_radial(RadialField::from_function(g3, [](double) { return 1.0; })),
                  4.0 * kPi / 3.0) < 1e-6);
    auto g2 = make_grid(2, 1.0, 2001);
    CHECK(rel_err(integrate_radial(RadialField::from_function(g2, [](double) { return 1.0; })),
                  kPi) < 1e-6);

    // Full-line Gaussian through the omega_1 = 2 doubling
    auto g1 = make_grid(1, 10.0, 4001);
    CHECK(std::abs(integrate_radial(RadialField::from_function(
                       g1, [](double r) { return std::exp(-r * r); })) -
                   std::sqrt(kPi)) < 1e-8);
}

TEST_CASE("quadrature error drops by at least 3.5x under mesh halving") {
    // N = 2 exhibits the generic second-order trapezoid behavior.
    auto value = [](std::size_t n) {
        auto g = make_grid(2, 9.0, n);
        return integrate_radial(
            RadialField::from_function(g, [](double r) { return std::exp(-r * r); }));
    };
    const double exact = kPi * (1.0 - std::exp(-81.0));
    const double e1 = std::abs(value(501) - exact);
    const double e2 = std::abs(value(1001) - exact);
    CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("radial_derivative is second order with even-extension origin") {
    auto g = make_grid(3, 5.0, 2001);
    const double h = g->spacing();

    // polynomial exactness
    RadialField u2 = RadialField::from_function(g, [](double r) { return r * r; });
    RadialField d2 = radial_derivative(u2);
    for (std::size_t i = 0; i < g->size(); ++i)
        CHECK(std::abs(d2[i] - 2.0 * g->node(i)) < 1e-10);

    RadialField uc = RadialField::from_function(g, [](double) { return 3.7; });
    for (double v : radial_derivative(uc).values())
        CHECK(std::abs(v) < 1e-11);

    RadialField us = RadialField::from_function(g, [](double r) { return std::sin(r); });
    RadialField ds = radial_derivative(us);
    double worst = 0.0;
    for (std::size_t i = 1; i < g->size(); ++i)
        worst = std::max(worst, std::abs(ds[i] - std::cos(g->node(i))));
    CHECK(worst < h * h); // |u'''|/6 ~ 1/6 < 1
    CHECK(ds[0] == 0.0);
}

TEST_CASE("discrete integration by parts on the line") {
    // bumps supported inside (0, R): no boundary terms at either end
    auto g = make_grid(1, 12.0, 4001);
    RadialField u = RadialField::from_function(
        g, [](double r) { return std::exp(-4.0 * (r - 5.0) * (r - 5.0)) * (1.0 + r); });
    RadialField v = RadialField::from_function(
        g, [](double r) { return std::exp(-3.0 * (r - 6.0) * (r - 6.0)) * (2.0 - r); });
    RadialField du = radial_derivative(u);
    RadialField dv = radial_derivative(v);
    std::vector<double> prod(g->size());
    for (std::size_t i = 0; i < g->size(); ++i)
        prod[i] = du[i] * v[i] + u[i] * dv[i];
    const double integral = integrate_radial(RadialField(g, prod));
    CHECK(std::abs(integral) < 1e-5);
}

TEST_CASE("resample: identity, round trip, zero extension") {
    auto g = make_grid(2, 8.0, 1001);
    RadialField u = RadialField::from_function(
        g, [](double r) { return std::exp(-r * r / 2.0) * (1.0 + 0.3 * r * r); });

    RadialField same = resample(u, g);
    for (std::size_t i = 0; i < g->size(); ++i)
        CHECK(same[i] == u[i]);

    auto fine = make_grid(2, 8.0, 4001);
    RadialField down = resample(resample(u, fine), g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i)
        worst = std::max(worst, std::abs(down[i] - u[i]));
    CHECK(worst < 1e-6);

    auto wide = make_grid(2, 16.0, 1001);
    RadialField ext = resample(u, wide);
    for (std::size_t i = 0; i < wide->size(); ++i)
        if (wide->node(i) > 8.0)
            CHECK(ext[i] == 0.0);
}

TEST_CASE("rearrangement: fixed point, monotonicity, equimeasurability") {
    auto g = make_grid(3, 10.0, 4001);

    SUBCASE("nonnegative nonincreasing input is reproduced within a cell") {
        RadialField u = RadialField::from_function(
            g, [](double r) { return std::exp(-r * r / 2.0); });
        RadialField r = rearrange_decreasing(u);
        double worst = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i)
            worst = std::max(worst, std::abs(r[i] - u[i]));
        CHECK(worst < 2.0 * g->spacing()); // one-cell reshuffle, |u'| <= 0.61
    }

    SUBCASE("interior bump becomes nonincreasing with preserved norms") {
        RadialField u = RadialField::from_function(g, [](double r) {
            return std::exp(-2.0 * (r - 3.0) * (r - 3.0));
        });
        RadialField r = rearrange_decreasing(u);
        for (std::size_t i = 0; i + 1 < g->size(); ++i)
            CHECK(r[i] >= r[i + 1] - 1e-14);
        for (double q : {1.0, 2.0, 7.0})
            CHECK(rel_err(lq_norm(r, q), lq_norm(u, q)) < 2e-3);
    }

    SUBCASE("random signed fields: |u| rearranged, norms preserved") {
        std::mt19937 rng(7);
        for (int trial = 0; trial < 5; ++trial) {
            RadialField u = qnls::testing::random_smooth_field(g, rng);
            RadialField r = rearrange_decreasing(u);
            for (std::size_t i = 0; i + 1 < g->size(); ++i)
                CHECK(r[i] >= r[i + 1] - 1e-14);
            for (double q : {1.0, 2.0, 5.5})
                CHECK(rel_err(lq_norm(r, q), lq_norm(u, q)) < 2e-3);
        }
    }
}

TEST_CASE("lq_norm closed forms") {
    auto g3 = make_grid(3, 1.0, 2001);
    RadialField one = RadialField::from_function(g3, [](double) { return 1.0; });
    CHECK(rel_err(lq_norm(one, 1.0), 4.0 * kPi / 3.0) < 1e-6);

    CHECK(lq_norm(RadialField::zeros(g3), 2.0) == 0.0);

    auto g1 = make_grid(1, 10.0, 4001);
    RadialField gauss = RadialField::from_function(
        g1, [](double r) { return std::exp(-r * r); });
    CHECK(std::abs(lq_norm(gauss, 2.0) - std::pow(kPi / 2.0, 0.25)) < 1e-6);
}

TEST_CASE("grid and field construction guards") {
    CHECK_THROWS(make_grid(0, 1.0, 11));
    CHECK_THROWS(make_grid(2, -1.0, 11));
    auto g = make_grid(2, 1.0, 11);
    CHECK_THROWS(RadialField(g, std::vector<double>(3, 0.0)));
    std::vector<double> bad(11, 0.0);
    bad[5] = std::nan("");
    CHECK_THROWS(RadialField(g, bad));
    // integrating 1 reproduces the ball volume
    CHECK(rel_err(integrate_radial(RadialField::from_function(g, [](double) { return 1.0; })),
                  g->ball_volume()) < 1e-12);
}

TEST_CASE("node counting with dead band") {
    auto g = make_grid(1, 10.0, 1001);
    RadialField osc = RadialField::from_function(
        g, [](double r) { return std::exp(-r) * std::cos(2.0 * r); });
    CHECK(count_nodes(osc) == 6); // cos(2r) zeros below r = 10
    RadialField pos = RadialField::from_function(
        g, [](double r) { return std::exp(-r); });
    CHECK(count_nodes(pos) == 0);
}
