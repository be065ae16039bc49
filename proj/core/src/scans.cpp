#include "qnls/scans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qnls {

std::vector<CriticalScanRow> critical_fiber_scan(int dimension,
                                                 const std::vector<double>& mass_grid) {
    const double p_star = mass_critical_exponent(dimension);
    const QpProfile& qp = cached_qp_profile(p_star, dimension);
    const double astar = qp.l1_norm;

    ModelParams prm;
    prm.dimension = dimension;
    prm.p = p_star;
    prm.theta = default_theta(dimension);
    prm.mu = 0.0;

    std::vector<CriticalScanRow> rows;
    rows.reserve(mass_grid.size());
    for (double a : mass_grid) {
        // w_a = (a/a*)^{1/2} Q_{p*}^{1/2} on the cached profile grid.
        const double factor = std::sqrt(a / astar);
        std::vector<double> v(qp.profile.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = factor * std::sqrt(qp.profile[i]);
        RadialField wa(qp.profile.grid_ptr(), std::move(v));
        prm.mass = a;
        const FiberMasses m = compute_masses(wa, prm);

        CriticalScanRow row;
        row.a = a;
        row.growth_coefficient = m.a_quad - m.a_p / p_star;
        const double scale = m.a_quad + m.a_p / p_star;

        double inf_e = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 400; ++k) {
            const double s = -10.0 + 20.0 * k / 400.0;
            inf_e = std::min(inf_e, fiber_energy(m, s, prm));
        }
        row.inf_fiber_energy = inf_e;

        if (std::abs(row.growth_coefficient) <= 1e-3 * scale)
            row.classification = "degenerate-coefficient-zero";
        else if (row.growth_coefficient > 0.0)
            row.classification = "bounded-below";
        else
            row.classification = "unbounded-below";
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ConcentrationRow> concentration_study(int dimension,
                                                  const std::vector<double>& offsets,
                                                  const ConcentrationOptions& opt) {
    const double p_star = mass_critical_exponent(dimension);
    const QpProfile& qp = cached_qp_profile(p_star, dimension);
    const double astar = qp.l1_norm;
    const GridPtr qgrid = qp.profile.grid_ptr();

    std::vector<double> deltas = offsets;
    std::sort(deltas.begin(), deltas.end(), std::greater<double>());

    ModelParams prm;
    prm.dimension = dimension;
    prm.p = p_star;
    prm.theta = default_theta(dimension);
    prm.mu = dimension >= 2 ? 0.1 : 0.0;

    GridConfig gc = opt.grid;
    if (gc.r_max <= 0.0)
        gc.r_max = dimension == 1 ? 20.0 : 40.0;
    GridPtr grid = make_grid(dimension, gc.r_max, gc.nodes);

    std::vector<ConcentrationRow> rows;
    std::optional<RadialField> warm;
    for (double delta : deltas) {
        prm.mass = astar * (1.0 + delta);
        const SolveReport rep =
            normalized_ground_state(prm, opt.schedule, grid, warm);
        warm = rep.profile;

        const FiberMasses m = compute_masses(rep.profile, prm.with_mu(0.0));
        ConcentrationRow row;
        row.delta = delta;
        row.a_n = prm.mass;
        row.converged = rep.converged;
        row.eps_n = std::pow(m.a_quad, -1.0 / (2.0 + dimension));

        // w_n(r) = (c eps_n)^N u_n^2(c eps_n r), c = (N a*/denom)^{1/(2+N)}.
        const double c =
            std::pow(dimension * astar / opt.rescale_denominator,
                     1.0 / (2.0 + dimension));
        const double scale = c * row.eps_n;
        std::vector<double> usq(rep.profile.size());
        for (std::size_t i = 0; i < usq.size(); ++i)
            usq[i] = rep.profile[i] * rep.profile[i];
        MonotoneCubic interp(rep.profile.grid().nodes(), usq);
        const double ampl = std::pow(scale, dimension);

        std::vector<double> wv(qgrid->size());
        for (std::size_t i = 0; i < qgrid->size(); ++i)
            wv[i] = ampl * interp(scale * qgrid->node(i));
        RadialField wn(qgrid, std::move(wv));

        row.w_l1 = integrate_radial(wn);
        double d1 = 0.0, d2 = 0.0;
        for (std::size_t i = 0; i < qgrid->size(); ++i) {
            const double diff = wn[i] - qp.profile[i];
            d1 += qgrid->weight(i) * std::abs(diff);
            d2 += qgrid->weight(i) * diff * diff;
        }
        row.dist_l1 = d1;
        row.dist_l2 = std::sqrt(d2);
        rows.push_back(row);
    }
    return rows;
}

} // namespace qnls
