#include "qnls/shooting.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qnls {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>; // [w, w']

struct QpOde {
    double q;   // p/2 - 1
    int dim;

    void operator()(const State& y, State& dy, double r) const {
        const double wq = y[0] > 0.0 ? std::pow(y[0], q) : 0.0;
        dy[0] = y[1];
        dy[1] = 1.0 - wq - (dim - 1) * y[1] / r;
    }
};

enum class Outcome { Undershoot, Overshoot };

struct Shot {
    Outcome outcome;
    double r_event;
    State y_event;
};

constexpr double kStartRadius = 1e-6;
constexpr double kRadiusCap = 200.0;

State series_start(double beta, double q, int dim, double r) {
    // w(r) = beta + (1 - beta^q) r^2/(2N) + O(r^4) near the regular origin.
    const double c2 = (1.0 - std::pow(beta, q)) / (2.0 * dim);
    return {beta + c2 * r * r, 2.0 * c2 * r};
}

using DenseStepper =
    odeint::dense_output_runge_kutta<odeint::controlled_runge_kutta<
        odeint::runge_kutta_dopri5<State>>>;

DenseStepper make_stepper() {
    return odeint::make_dense_output(1e-13, 1e-13,
                                     odeint::runge_kutta_dopri5<State>());
}

// Integrate from the series start until the profile bottoms out (w' crosses
// zero from below). The sign of w at that first minimum separates the
// regimes: w > 0 is an undershoot, w <= 0 means the trajectory already dipped
// through zero (an overshoot, even when the dip is narrower than a step; past
// zero the cut-off source term turns the profile back up, so the minimum is
// always reached). An explicit w <= 0 sample short-circuits to the zero
// crossing. The node visitor, when given, is fed the dense interpolant after
// every accepted step.
template <typename NodeVisitor>
Shot launch(double beta, double q, int dim, NodeVisitor&& visit) {
    QpOde ode{q, dim};
    auto stepper = make_stepper();
    double r = kStartRadius;
    stepper.initialize(series_start(beta, q, dim, r), r, 1e-4);

    const double guard = 10.0 * kStartRadius;
    auto refine = [&stepper](double ra, double rb, auto&& crossed) {
        for (int it = 0; it < 80; ++it) {
            const double rm = 0.5 * (ra + rb);
            State ym;
            stepper.calc_state(rm, ym);
            if (crossed(ym)) rb = rm; else ra = rm;
            if (rb - ra <= 1e-13 * (1.0 + rb)) break;
        }
        State ye;
        stepper.calc_state(rb, ye);
        return std::make_pair(rb, ye);
    };

    while (true) {
        const auto interval = stepper.do_step(ode);
        const double r0 = interval.first;
        const double r1 = interval.second;
        visit(stepper, r0, r1);

        const int samples = 8;
        State ya;
        stepper.calc_state(r0, ya);
        double ra = r0;
        for (int k = 1; k <= samples; ++k) {
            const double rb = r0 + (r1 - r0) * k / samples;
            State yb;
            stepper.calc_state(rb, yb);
            if (rb > guard) {
                if (ya[0] > 0.0 && yb[0] <= 0.0) {
                    auto [re, ye] =
                        refine(ra, rb, [](const State& y) { return y[0] <= 0.0; });
                    return {Outcome::Overshoot, re, ye};
                }
                if (ya[1] < 0.0 && yb[1] >= 0.0) {
                    auto [re, ye] =
                        refine(ra, rb, [](const State& y) { return y[1] >= 0.0; });
                    if (ye[0] > 0.0)
                        return {Outcome::Undershoot, re, ye};
                    // bottomed out below zero: the dip crossed between samples
                    auto [rc, yc] =
                        refine(ra, re, [](const State& y) { return y[0] <= 0.0; });
                    return {Outcome::Overshoot, rc, yc};
                }
            }
            ra = rb;
            ya = yb;
        }
        r = r1;
        if (r > kRadiusCap)
            throw std::runtime_error(
                "shoot_qp: trajectory neither crossed zero nor turned around "
                "before r = 200 (integrator failure or p out of range)");
    }
}

Shot launch(double beta, double q, int dim) {
    return launch(beta, q, dim, [](const DenseStepper&, double, double) {});
}

std::mutex g_cache_mutex;
std::map<std::pair<double, int>, QpProfile> g_qp_cache;
std::map<std::pair<double, int>, SharpGnConstant> g_gn_cache;

} // namespace

QpProfile shoot_qp(double p, int dimension, const GridConfig& cfg,
                   double beta_lo, double beta_hi) {
    if (dimension < 1)
        throw std::invalid_argument("shoot_qp: dimension must be >= 1");
    if (!(p > 2.0) || !(p < quasilinear_critical_exponent(dimension)))
        throw std::invalid_argument("shoot_qp: need 2 < p < 2*2^*");

    const double q = 0.5 * p - 1.0;

    // Establish an undershoot/overshoot bracket on beta.
    double lo = beta_lo, hi = beta_hi;
    if (!(lo > 1.0) || !(hi > lo)) {
        lo = 0.0;
        hi = 0.0;
        double prev = 1.02;
        if (launch(prev, q, dimension).outcome == Outcome::Overshoot)
            throw std::runtime_error("shoot_qp: no undershoot regime near beta = 1");
        for (double beta = prev * 1.35; beta <= 1000.0; beta *= 1.35) {
            if (launch(beta, q, dimension).outcome == Outcome::Overshoot) {
                lo = prev;
                hi = beta;
                break;
            }
            prev = beta;
        }
        if (hi == 0.0)
            throw std::runtime_error(
                "shoot_qp: bracket not found in beta <= 1000 (p out of the "
                "valid range or integrator failure)");
    } else {
        if (launch(lo, q, dimension).outcome != Outcome::Undershoot ||
            launch(hi, q, dimension).outcome != Outcome::Overshoot)
            throw std::runtime_error("shoot_qp: supplied beta bracket does not "
                                     "straddle the free-boundary height");
    }

    while (hi - lo > 4e-16 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (launch(mid, q, dimension).outcome == Outcome::Overshoot)
            hi = mid;
        else
            lo = mid;
    }
    // The undershoot endpoint bottoms out with w' = 0 and w of the order of
    // the bracket width; the overshoot side only reaches |w'| ~ sqrt(width).
    const double beta = lo;

    const Shot final_shot = launch(beta, q, dimension);
    const double r_support = final_shot.r_event;

    const double bval = std::abs(final_shot.y_event[0]);
    const double bslope = std::abs(final_shot.y_event[1]);
    if (bval > 1e-8 * beta || bslope > 1e-8 * beta)
        throw std::runtime_error(
            "shoot_qp: free-boundary conditions not met to tolerance");

    const double r_max = cfg.r_max > 0.0 ? cfg.r_max : 1.25 * r_support;
    GridPtr grid = make_grid(dimension, r_max, cfg.nodes);

    // Re-run once, sampling the dense interpolant at the grid nodes.
    std::vector<double> w(grid->size(), 0.0), dw(grid->size(), 0.0);
    std::size_t j = 0;
    while (j < grid->size() && grid->node(j) < kStartRadius) {
        const State y = series_start(beta, q, dimension, grid->node(j));
        w[j] = y[0];
        dw[j] = y[1];
        ++j;
    }
    launch(beta, q, dimension,
           [&](const DenseStepper& st, double r0, double r1) {
               (void)r0;
               while (j < grid->size() && grid->node(j) <= r1) {
                   State y;
                   st.calc_state(grid->node(j), y);
                   w[j] = y[0];
                   dw[j] = y[1];
                   ++j;
               }
           });
    for (std::size_t i = 0; i < grid->size(); ++i) {
        if (grid->node(i) > r_support || w[i] < 0.0) {
            w[i] = 0.0;
            dw[i] = 0.0;
        }
    }

    QpProfile out{RadialField(grid, std::move(w)),
                  RadialField(grid, std::move(dw)),
                  r_support,
                  beta,
                  0.0,
                  p,
                  dimension,
                  bval,
                  bslope};
    out.l1_norm = integrate_radial(out.profile);
    return out;
}

const QpProfile& cached_qp_profile(double p, int dimension) {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    const auto key = std::make_pair(p, dimension);
    auto it = g_qp_cache.find(key);
    if (it == g_qp_cache.end()) {
        GridConfig cfg;
        cfg.nodes = 8001;
        it = g_qp_cache.emplace(key, shoot_qp(p, dimension, cfg)).first;
    }
    return it->second;
}

double a_star(int dimension) {
    return cached_qp_profile(mass_critical_exponent(dimension), dimension).l1_norm;
}

const SharpGnConstant& sharp_gn_constant(double p, int dimension) {
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = g_gn_cache.find(std::make_pair(p, dimension));
        if (it != g_gn_cache.end())
            return it->second;
    }
    const QpProfile& qp = cached_qp_profile(p, dimension);

    std::vector<double> root(qp.profile.size());
    for (std::size_t i = 0; i < root.size(); ++i)
        root[i] = std::sqrt(qp.profile[i]);
    RadialField u0(qp.profile.grid_ptr(), std::move(root));

    ModelParams prm;
    prm.dimension = dimension;
    prm.p = p;
    prm.mass = 1.0;
    prm.theta = default_theta(dimension);
    prm.mu = 0.0;
    const FiberMasses m = compute_masses(u0, prm);

    const double n = dimension;
    SharpGnConstant sharp;
    sharp.p = p;
    sharp.dimension = dimension;
    sharp.alpha = (4.0 * n - p * (n - 2.0)) / (2.0 * (n + 2.0));
    sharp.beta = n * (p - 2.0) / (2.0 * (n + 2.0));
    sharp.prefactor = m.a_p / (std::pow(m.mass, sharp.alpha) *
                               std::pow(4.0 * m.a_quad, sharp.beta));
    // Literature closed form, kept alongside for the recorded discrepancy.
    const double c_pn =
        p * (n + 2.0) /
        (std::pow(4.0 * n - (n - 2.0) * p, (4.0 - n * (p - 2.0)) / (2.0 * (n + 2.0))) *
         std::pow(2.0 * n * (p - 2.0), n * (p - 2.0) / (2.0 * (n + 2.0))));
    sharp.closed_form_prefactor = c_pn / std::pow(qp.l1_norm, (p - 2.0) / (n + 2.0));

    std::lock_guard<std::mutex> lock(g_cache_mutex);
    return g_gn_cache.emplace(std::make_pair(p, dimension), sharp).first->second;
}

} // namespace qnls
