#include "qnls/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace qnls {

namespace {

std::vector<double> renormalized(std::vector<double> v, const RadialGrid& grid,
                                 double target_mass) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        m += grid.weight(i) * v[i] * v[i];
    if (!(m > 0.0)) {
        if (std::getenv("QNLS_DEBUG"))
            std::fprintf(stderr, "[renorm] mass=%g n=%zu rmax=%g v0=%g\n", m,
                         v.size(), grid.r_max(), v.empty() ? 0.0 : v[0]);
        throw std::runtime_error("ground state solver: zero-mass iterate");
    }
    const double c = std::sqrt(target_mass / m);
    for (double& x : v)
        x *= c;
    return v;
}

// (c - Lap) d = g on the radial grid, even symmetry at the origin and a
// homogeneous Dirichlet condition at R_max. Thomas solve.
std::vector<double> h1_precondition(const RadialGrid& grid,
                                    const std::vector<double>& g, double c) {
    const std::size_t n = g.size();
    const double h = grid.spacing();
    const int dim = grid.dimension();
    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs = g;

    diag[0] = c + 2.0 * dim / (h * h);
    upper[0] = -2.0 * dim / (h * h);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = grid.node(i);
        lower[i] = -(1.0 / (h * h) - (dim - 1) / (2.0 * h * r));
        diag[i] = c + 2.0 / (h * h);
        upper[i] = -(1.0 / (h * h) + (dim - 1) / (2.0 * h * r));
    }
    diag[n - 1] = 1.0;
    lower[n - 1] = 0.0;
    rhs[n - 1] = 0.0;

    std::vector<double> cp(n), dp(n);
    cp[0] = upper[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = diag[i] - lower[i] * cp[i - 1];
        cp[i] = (i + 1 < n) ? upper[i] / m : 0.0;
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / m;
    }
    std::vector<double> d(n);
    d[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        d[i] = dp[i] - cp[i] * d[i + 1];
    return d;
}

// e^{Ns/2} u(e^s r). Small shifts are sampled back onto the current grid;
// larger ones go through the exact grid-rescaling transform and the iterate
// adopts the rescaled grid, so resolution follows the profile scale.
RadialField fiber_shift(const RadialField& u, double s) {
    if (s == 0.0)
        return u;
    if (std::abs(s) <= 1.0) {
        const GridPtr& grid = u.grid_ptr();
        MonotoneCubic interp(u);
        const double amp = std::exp(0.5 * grid->dimension() * s);
        const double stretch = std::exp(s);
        std::vector<double> v(grid->size());
        for (std::size_t i = 0; i < grid->size(); ++i)
            v[i] = amp * interp(stretch * grid->node(i));
        return RadialField(grid, std::move(v));
    }
    return scale_field(u, s);
}

struct Iterate {
    GridPtr grid;
    RadialField u;
    FiberMasses masses;
    double energy = 0.0;
};

Iterate project(RadialField u, const ModelParams& prm) {
    FiberMasses m = compute_masses(u, prm);
    const FiberSolveResult fs = solve_s_mu(m, prm);
    RadialField v = fiber_shift(u, fs.s_star);
    GridPtr grid = v.grid_ptr();
    v = RadialField(grid, renormalized(v.values(), *grid, prm.mass));
    FiberMasses mv = compute_masses(v, prm);
    return {std::move(grid), std::move(v), mv, energy_I_mu(mv, prm)};
}

// The working grid follows the iterate: predict the post-projection length
// scale from the closed-form dilation of the masses and rebuild the grid when
// the scale has drifted. Under-resolved iterates have inconsistent discrete
// gradients, and descent dies on them.
Iterate adapt_grid(Iterate it, const ModelParams& prm, double r_max_request) {
    double shift = 0.0;
    try {
        shift = solve_s_mu(it.masses, prm).s_star;
    } catch (const FiberProjectionError&) {
        shift = 0.0;
    }
    // Length scale of the projected iterate: the H^1 scale, sharpened by the
    // multiplier scale 1/sqrt(lambda) when the iterate is close to a solution.
    double len = std::sqrt(it.masses.mass / std::max(it.masses.a_grad, 1e-300));
    if (it.masses.mass > 0.0) {
        const double lam = lagrange_lambda(it.masses, prm);
        if (lam > 0.0)
            len = std::min(len, 0.5 / std::sqrt(lam));
    }
    len *= std::exp(-shift);
    const double r_target =
        std::clamp(80.0 * len, 1e-4 * r_max_request, r_max_request);
    const double ratio = r_target / it.grid->r_max();
    if (ratio > 0.7 && ratio < 1.4)
        return it;
    GridPtr fresh = make_grid(it.grid->dimension(), r_target, it.grid->size());
    RadialField v = resample(it.u, fresh);
    v = RadialField(fresh, renormalized(v.values(), *fresh, prm.mass));
    return project(std::move(v), prm);
}

struct SegmentResult {
    long iterations = 0;
    bool stalled = false;
};

SegmentResult descend_segment(Iterate& st, const ModelParams& prm,
                              const ContinuationSchedule& sched, int budget) {
    const bool critical = is_mass_critical(prm);

    double eta = sched.step_size;
    int stall_count = 0;
    SegmentResult out;

    for (int it = 0; it < budget; ++it) {
        ++out.iterations;
        const GridPtr grid = st.grid;
        const RadialField g = functional_gradient(st.u, prm);
        const double uu = inner_product(st.u, st.u);
        const double gu = inner_product(g, st.u);

        std::vector<double> gt(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            gt[i] = g[i] - (gu / uu) * st.u[i];
        RadialField gtan(grid, gt);

        RadialField dir = gtan;
        if (sched.precondition) {
            // Helmholtz metric (lambda - Lap): matches the curvature scale of
            // concentrated iterates.
            double c = 1.0;
            if (st.masses.mass > 0.0) {
                const double lam = lagrange_lambda(st.masses, prm);
                if (lam > 1.0)
                    c = lam;
            }
            std::vector<double> d = h1_precondition(*grid, gt, c);
            RadialField df(grid, std::move(d));
            const double du = inner_product(df, st.u);
            std::vector<double> dt(df.size());
            for (std::size_t i = 0; i < df.size(); ++i)
                dt[i] = df[i] - (du / uu) * st.u[i];
            dir = RadialField(grid, std::move(dt));
        }
        double slope = inner_product(gtan, dir);
        if (!(slope > 0.0)) {
            dir = gtan;
            slope = inner_product(gtan, gtan);
            if (!(slope > 0.0)) {
                out.stalled = true;
                break;
            }
        }

        // Armijo search on the composite map: step, renormalize, fiber-project
        // (closed-form energies only; the field is rebuilt once on success).
        bool accepted = false;
        double s_star = 0.0;
        std::vector<double> trial;
        for (int ls = 0; ls < 40; ++ls) {
            trial.assign(st.u.values().begin(), st.u.values().end());
            for (std::size_t i = 0; i < trial.size(); ++i)
                trial[i] -= eta * dir[i];
            trial = renormalized(std::move(trial), *grid, prm.mass);
            RadialField tf(grid, trial);
            FiberMasses mt = compute_masses(tf, prm);
            if (critical && !critical_set_membership(mt, prm.dimension)) {
                eta *= 0.5;
                continue;
            }
            double e_try;
            try {
                const FiberSolveResult fs = solve_s_mu(mt, prm);
                s_star = fs.s_star;
                e_try = fs.energy_at_star;
            } catch (const FiberProjectionError&) {
                eta *= 0.5;
                continue;
            }
            if (e_try <= st.energy - 1e-4 * eta * slope) {
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) {
            out.stalled = true;
            break;
        }

        RadialField stepped(grid, std::move(trial));
        RadialField next = fiber_shift(stepped, s_star);
        next = RadialField(next.grid_ptr(),
                           renormalized(next.values(), next.grid(), prm.mass));
        FiberMasses mn = compute_masses(next, prm);
        const double e_new = energy_I_mu(mn, prm);

        const double decrease = st.energy - e_new;
        st.grid = next.grid_ptr();
        st.u = std::move(next);
        st.masses = mn;
        st.energy = e_new;
        eta = std::min(eta * 1.5, 1e3);

        if (sched.rearrange_every > 0 && (it + 1) % sched.rearrange_every == 0) {
            RadialField r = rearrange_decreasing(st.u);
            std::vector<double> rv =
                renormalized(r.values(), *st.grid, prm.mass);
            RadialField rf(st.grid, std::move(rv));
            FiberMasses mr = compute_masses(rf, prm);
            if (!critical || critical_set_membership(mr, prm.dimension)) {
                try {
                    Iterate rs = project(rf, prm);
                    if (rs.energy <= st.energy + 1e-12 * std::abs(st.energy))
                        st = std::move(rs);
                } catch (const FiberProjectionError&) {
                }
            }
        }

        if (decrease <= sched.energy_stall_tol * std::max(1.0, std::abs(st.energy))) {
            if (++stall_count >= 6) {
                out.stalled = true;
                break;
            }
        } else {
            stall_count = 0;
        }
    }
    return out;
}

RadialField gaussian_seed(const GridPtr& grid, double mass, double width) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double r = grid->node(i);
        v[i] = std::exp(-r * r / (2.0 * width * width));
    }
    return RadialField(grid, renormalized(std::move(v), *grid, mass));
}

RadialField ring_seed(const GridPtr& grid, double mass, double width) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double r = grid->node(i);
        const double z = r / width;
        v[i] = (1.0 + z * z) * std::exp(-0.5 * z * z);
    }
    return RadialField(grid, renormalized(std::move(v), *grid, mass));
}

RadialField lorentzian_seed(const GridPtr& grid, double mass, double width) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double z = grid->node(i) / width;
        v[i] = 1.0 / std::pow(1.0 + z * z, 3.0);
    }
    return RadialField(grid, renormalized(std::move(v), *grid, mass));
}

std::vector<RadialField> build_seeds(const ModelParams& prm, const GridPtr& grid,
                                     int restarts,
                                     const std::optional<RadialField>& seed) {
    std::vector<RadialField> seeds;
    if (seed) {
        RadialField s = seed->grid_ptr() == grid ? *seed : resample(*seed, grid);
        seeds.emplace_back(grid, renormalized(s.values(), *grid, prm.mass));
        return seeds;
    }
    if (is_mass_critical(prm)) {
        // w_a = (a/a*)^{1/2} Q_{p*}^{1/2} lies inside O for a > a*.
        const QpProfile& qp = cached_qp_profile(prm.p, prm.dimension);
        const double factor = std::sqrt(prm.mass / qp.l1_norm);
        std::vector<double> v(qp.profile.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = factor * std::sqrt(qp.profile[i]);
        RadialField wa = resample(RadialField(qp.profile.grid_ptr(), std::move(v)), grid);
        seeds.emplace_back(grid, renormalized(wa.values(), *grid, prm.mass));
        // Mollified variants stay admissible only sometimes; filter below.
        for (double width : {6.0, 3.0}) {
            if (static_cast<int>(seeds.size()) >= std::max(restarts, 1))
                break;
            std::vector<double> mv(grid->size());
            for (std::size_t i = 0; i < grid->size(); ++i) {
                const double r = grid->node(i);
                mv[i] = seeds.front()[i] * std::exp(-r * r / (2.0 * width * width));
            }
            RadialField cand(grid, renormalized(std::move(mv), *grid, prm.mass));
            if (critical_set_membership(compute_masses(cand, prm), prm.dimension))
                seeds.push_back(std::move(cand));
        }
        return seeds;
    }
    // Distinct shapes (not widths: fixed-mass dilates share one fiber orbit).
    seeds.push_back(gaussian_seed(grid, prm.mass, 1.0));
    if (static_cast<int>(seeds.size()) < restarts)
        seeds.push_back(lorentzian_seed(grid, prm.mass, 1.0));
    if (static_cast<int>(seeds.size()) < restarts)
        seeds.push_back(ring_seed(grid, prm.mass, 1.0));
    if (static_cast<int>(seeds.size()) < restarts)
        seeds.push_back(gaussian_seed(grid, prm.mass, 3.0));
    if (static_cast<int>(seeds.size()) < restarts)
        seeds.push_back(lorentzian_seed(grid, prm.mass, 0.5));
    return seeds;
}

} // namespace

SolveReport normalized_ground_state(const ModelParams& prm,
                                    const ContinuationSchedule& schedule,
                                    GridPtr grid,
                                    const std::optional<RadialField>& seed) {
    validate_params(prm);
    if (is_mass_critical(prm))
        validate_mass_window(prm, a_star(prm.dimension));
    const double r_max_request = grid->r_max();

    std::vector<double> stages;
    if (prm.dimension >= 2)
        for (double mu : schedule.mu_values)
            stages.push_back(mu);
    stages.push_back(0.0); // unperturbed polish; N = 1 runs use only this

    const std::vector<RadialField> seeds =
        build_seeds(prm, grid, schedule.restarts, seed);

    SolveReport best(RadialField::zeros(grid));
    best.energy = std::numeric_limits<double>::infinity();
    best.mu_schedule_used = stages;
    long total_iters = 0;
    bool have_result = false;

    for (const RadialField& s0 : seeds) {
        bool seed_failed = false;
        Iterate it{grid, s0, FiberMasses{}, 0.0};
        try {
            it = project(s0, prm.with_mu(stages.front()));
            it = adapt_grid(std::move(it), prm.with_mu(stages.front()), r_max_request);
        } catch (const std::exception& e) {
            if (std::getenv("QNLS_DEBUG"))
                std::fprintf(stderr, "[qnls] seed init failed: %s\n", e.what());
            continue;
        }

        for (double mu : stages) {
            ModelParams stage_prm = prm.with_mu(prm.dimension >= 2 ? mu : 0.0);
            int remaining = schedule.max_iterations_per_stage;
            try {
                it = project(it.u, stage_prm);
                while (remaining > 0) {
                    it = adapt_grid(std::move(it), stage_prm, r_max_request);
                    const SegmentResult seg = descend_segment(
                        it, stage_prm, schedule, std::min(remaining, 120));
                    total_iters += seg.iterations;
                    remaining -= static_cast<int>(seg.iterations);
                    if (seg.stalled)
                        break;
                }
            } catch (const std::exception& e) {
                if (std::getenv("QNLS_DEBUG"))
                    std::fprintf(stderr, "[qnls] stage mu=%g failed: %s\n", mu,
                                 e.what());
                seed_failed = true;
                break;
            }
        }
        if (seed_failed)
            continue;

        // Evaluate the report at the unperturbed functional.
        const ModelParams prm0 = prm.with_mu(0.0);
        RadialField uf = it.u;
        for (int polish = 0; polish < 2; ++polish) {
            FiberMasses m = compute_masses(uf, prm0);
            try {
                const FiberSolveResult fs = solve_s_mu(m, prm0);
                uf = fiber_shift(uf, fs.s_star);
                uf = RadialField(uf.grid_ptr(),
                                 renormalized(uf.values(), uf.grid(), prm.mass));
            } catch (const FiberProjectionError&) {
                break;
            }
        }
        const FiberMasses m = compute_masses(uf, prm0);
        SolveReport rep(uf);
        rep.energy = energy_I(m, prm0);
        rep.pohozaev_residual = pohozaev_relative(m, prm0);
        rep.lambda = lagrange_lambda(m, prm0);
        rep.mass = m.mass;
        rep.mu_schedule_used = stages;
        rep.node_count = count_nodes(uf);
        const double el = el_residual(uf, rep.lambda, prm0);
        rep.converged =
            rep.pohozaev_residual <= 1e-6 && el <= 1e-3 && rep.lambda > 0.0;
        have_result = true;

        const bool better = (rep.converged && !best.converged) ||
                            (rep.converged == best.converged && rep.energy < best.energy);
        if (better)
            best = rep;
    }
    best.iterations_total = total_iters;
    if (!have_result)
        throw std::runtime_error(
            "normalized_ground_state: every seed left the admissible set "
            "(critical-branch seed outside O?)");
    return best;
}

} // namespace qnls
