#include "qnls/excited.hpp"

#include "qnls/functionals.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qnls {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>; // [u, u']

struct ElOde {
    double lambda, p;
    int dim;

    void operator()(const State& y, State& dy, double r) const {
        const double u = y[0], v = y[1];
        const double up = u == 0.0 ? 0.0
                                   : (u > 0.0 ? std::pow(u, p - 1.0)
                                              : -std::pow(-u, p - 1.0));
        dy[0] = v;
        dy[1] = (lambda * u - up - 2.0 * u * v * v) / (1.0 + 2.0 * u * u) -
                (dim - 1) * v / r;
    }
};

constexpr double kStartRadius = 1e-6;

State series_start(double alpha, double lambda, double p, int dim, double r) {
    const double up = std::pow(std::abs(alpha), p - 1.0) * (alpha >= 0 ? 1.0 : -1.0);
    const double c2 = (lambda * alpha - up) / (2.0 * dim * (1.0 + 2.0 * alpha * alpha));
    return {alpha + c2 * r * r, 2.0 * c2 * r};
}

using DenseStepper =
    odeint::dense_output_runge_kutta<odeint::controlled_runge_kutta<
        odeint::runge_kutta_dopri5<State>>>;

struct Flight {
    int nodes = 0;
    bool diverged = false;
    double r_end = 0.0;
};

// Integrate outward, counting strict sign changes, until the trajectory blows
// up (|u| above the divergence threshold) or r_cap is reached. The optional
// visitor sees the dense interpolant after every accepted step.
template <typename Visitor>
Flight fly(double alpha, double lambda, double p, int dim, double r_cap,
           Visitor&& visit) {
    ElOde ode{lambda, p, dim};
    auto stepper = odeint::make_dense_output(1e-12, 1e-12,
                                             odeint::runge_kutta_dopri5<State>());
    double r = kStartRadius;
    stepper.initialize(series_start(alpha, lambda, p, dim, r), r, 1e-4);

    const double band = 1e-10 * std::abs(alpha);
    const double blow = 5.0 * std::abs(alpha);
    Flight out;
    int last_sign = alpha > 0.0 ? 1 : -1;
    while (true) {
        const auto interval = stepper.do_step(ode);
        visit(stepper, interval.first, interval.second);
        // Sample inside the step so a fast lobe cannot hide a crossing.
        const int samples = 4;
        for (int k = 1; k <= samples; ++k) {
            const double rs =
                interval.first + (interval.second - interval.first) * k / samples;
            State y;
            stepper.calc_state(rs, y);
            if (std::abs(y[0]) > band) {
                const int s = y[0] > 0.0 ? 1 : -1;
                if (s != last_sign) {
                    ++out.nodes;
                    last_sign = s;
                }
            }
            if (std::abs(y[0]) > blow) {
                out.diverged = true;
                out.r_end = rs;
                return out;
            }
        }
        r = interval.second;
        if (r >= r_cap) {
            out.r_end = r;
            return out;
        }
    }
}

Flight fly(double alpha, double lambda, double p, int dim, double r_cap) {
    return fly(alpha, lambda, p, dim, r_cap,
               [](const DenseStepper&, double, double) {});
}

// Inner shooting parameter: the boundary between node classes k and k+1.
double alpha_for_nodes(double lambda, double p, int dim, int k, double r_cap) {
    const double alpha_min = std::pow(lambda, 1.0 / (p - 2.0));
    double lo = 0.0, hi = 0.0;
    double prev = alpha_min * 1.02;
    int prev_class = fly(prev, lambda, p, dim, r_cap).nodes;
    for (double alpha = prev * 1.25; alpha <= alpha_min * 1e5; alpha *= 1.25) {
        const int cls = fly(alpha, lambda, p, dim, r_cap).nodes;
        if (prev_class <= k && cls >= k + 1) {
            lo = prev;
            hi = alpha;
            break;
        }
        prev = alpha;
        prev_class = cls;
        if (cls > k + 1)
            break; // jumped past the band without straddling it from below
    }
    if (hi == 0.0)
        throw std::runtime_error(
            "excited_state: node-count bracket not found on the u(0) scan");
    while (hi - lo > 4e-16 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (fly(mid, lambda, p, dim, r_cap).nodes >= k + 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

struct ShootProfile {
    RadialField u;
    double alpha;
};

// Build the k-node profile at fixed lambda, grafting the analytic
// e^{-sqrt(lambda) r} tail past the closest approach to zero. The grid tracks
// the decay scale so concentrated large-lambda profiles stay resolved.
ShootProfile profile_at(double lambda, double p, int dim, int k,
                        double r_max_request, std::size_t nodes) {
    const double kappa0 = std::sqrt(std::max(lambda, 1e-12));
    const double r_cap =
        std::min(r_max_request, std::max(25.0 * (k + 1) / kappa0, 1e-4 * r_max_request));
    GridPtr grid = make_grid(dim, r_cap, nodes);
    const double alpha = alpha_for_nodes(lambda, p, dim, k, r_cap);

    std::vector<double> uv(grid->size(), 0.0), vv(grid->size(), 0.0);
    std::size_t j = 0;
    while (j < grid->size() && grid->node(j) < kStartRadius) {
        const State y = series_start(alpha, lambda, p, dim, grid->node(j));
        uv[j] = y[0];
        vv[j] = y[1];
        ++j;
    }
    const Flight fl =
        fly(alpha, lambda, p, dim, r_cap,
            [&](const DenseStepper& st, double, double r1) {
                while (j < grid->size() && grid->node(j) <= r1) {
                    State y;
                    st.calc_state(grid->node(j), y);
                    uv[j] = y[0];
                    vv[j] = y[1];
                    ++j;
                }
            });

    // Closest approach of (u, u'/kappa) to the origin marks where the decayed
    // solution is overtaken by the amplified error mode.
    const double kappa = std::sqrt(std::max(lambda, 1e-12));
    std::size_t j_min = 0;
    double best = std::numeric_limits<double>::infinity();
    const std::size_t j_hi = std::min(j, grid->size());
    for (std::size_t i = 0; i < j_hi; ++i) {
        if (grid->node(i) < 0.2 * fl.r_end)
            continue; // stay past the oscillatory region
        const double a = std::max(std::abs(uv[i]), std::abs(vv[i]) / kappa);
        if (a < best) {
            best = a;
            j_min = i;
        }
    }
    if (j_min > 0) {
        const double u0 = uv[j_min];
        const double r0 = grid->node(j_min);
        for (std::size_t i = j_min + 1; i < grid->size(); ++i)
            uv[i] = u0 * std::exp(-kappa * (grid->node(i) - r0));
    }
    return {RadialField(grid, std::move(uv)), alpha};
}

} // namespace

SolveReport excited_state(const ModelParams& prm, int node_target,
                          const GridConfig& cfg) {
    validate_excited(prm, node_target);
    const double r_max = cfg.r_max > 0.0 ? cfg.r_max : 40.0;
    const ModelParams prm0 = prm.with_mu(0.0);

    long launches = 0;
    auto mass_at = [&](double lambda) {
        ++launches;
        const ShootProfile sp = profile_at(lambda, prm.p, prm.dimension,
                                           node_target, r_max, cfg.nodes);
        FiberMasses m = compute_masses(sp.u, prm0);
        return std::make_pair(m.mass - prm.mass, sp);
    };

    // Outer iteration on lambda: secant while it behaves, otherwise bisection
    // on a sign-change bracket located over a lambda log-grid.
    double la = 1.0, lb = 10.0;
    double fa = mass_at(la).first;
    auto [fb, spb] = mass_at(lb);
    double blo = 0.0, bhi = 0.0, flo = 0.0;
    auto note_bracket = [&](double l1, double f1, double l2, double f2) {
        if (f1 * f2 < 0.0) {
            blo = std::min(l1, l2);
            bhi = std::max(l1, l2);
            flo = l1 < l2 ? f1 : f2;
        }
    };
    note_bracket(la, fa, lb, fb);

    double lambda = lb, fval = fb;
    ShootProfile current = spb;
    bool done = std::abs(fval) <= 1e-8 * prm.mass;
    for (int it = 0; it < 60 && !done; ++it) {
        double next;
        const double denom = fb - fa;
        if (denom != 0.0) {
            next = lb - fb * (lb - la) / denom;
        } else {
            next = 0.5 * (la + lb);
        }
        const bool inside = std::isfinite(next) && next > 1e-6 && next < 1e7;
        const bool in_bracket = bhi == 0.0 || (next > blo && next < bhi);
        if (!inside || !in_bracket) {
            if (bhi == 0.0) {
                // Scan a log grid for a sign change before giving up.
                double prev_l = 1e-2;
                double prev_f = mass_at(prev_l).first;
                for (int g = 1; g <= 32 && bhi == 0.0; ++g) {
                    const double l = std::pow(10.0, -2.0 + 8.0 * g / 32.0);
                    const double f = mass_at(l).first;
                    note_bracket(prev_l, prev_f, l, f);
                    prev_l = l;
                    prev_f = f;
                }
                if (bhi == 0.0)
                    throw std::runtime_error(
                        "excited_state: prescribed mass not matchable for "
                        "lambda in (0, 1e6]");
            }
            next = 0.5 * (blo + bhi);
        }
        if (bhi > 0.0)
            next = std::clamp(next, blo + 1e-3 * (bhi - blo), bhi - 1e-3 * (bhi - blo));
        auto [fn, spn] = mass_at(next);
        la = lb;
        fa = fb;
        lb = next;
        fb = fn;
        lambda = next;
        fval = fn;
        current = spn;
        if (bhi > 0.0) {
            if (flo * fn <= 0.0) bhi = next; else { blo = next; flo = fn; }
        } else {
            note_bracket(la, fa, lb, fb);
        }
        done = std::abs(fval) <= 1e-8 * prm.mass ||
               (bhi > 0.0 && bhi - blo <= 1e-12 * bhi);
    }

    const FiberMasses m = compute_masses(current.u, prm0);
    SolveReport rep(current.u);
    rep.energy = energy_I(m, prm0);
    rep.pohozaev_residual = pohozaev_relative(m, prm0);
    rep.lambda = lambda;
    rep.mass = m.mass;
    rep.iterations_total = launches;
    rep.node_count = count_nodes(current.u, 1e-8);
    const double el = el_residual(current.u, lambda, prm0);
    rep.converged = rep.node_count == node_target &&
                    std::abs(m.mass - prm.mass) <= 1e-6 * prm.mass &&
                    rep.pohozaev_residual <= 1e-4 && el <= 1e-3 && lambda > 0.0;
    return rep;
}

} // namespace qnls
