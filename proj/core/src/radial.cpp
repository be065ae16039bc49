#include "qnls/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qnls {

double unit_sphere_area(int dimension) {
    if (dimension < 1)
        throw std::invalid_argument("unit_sphere_area: dimension must be >= 1");
    // 2 pi^{N/2} / Gamma(N/2), with the N=1 convention omega_1 = 2.
    const double n = static_cast<double>(dimension);
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

RadialGrid::RadialGrid(int dimension, double r_max, std::size_t node_count)
    : dim_(dimension) {
    if (dimension < 1)
        throw std::invalid_argument("RadialGrid: dimension must be >= 1");
    if (!(r_max > 0.0))
        throw std::invalid_argument("RadialGrid: R_max must be positive");
    if (node_count < 3)
        throw std::invalid_argument("RadialGrid: need at least 3 nodes");

    const std::size_t n = node_count;
    h_ = r_max / static_cast<double>(n - 1);
    r_.resize(n);
    w_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        r_[i] = static_cast<double>(i) * h_;
    r_.back() = r_max;

    // Composite trapezoid against the surface measure omega_N r^{N-1}.
    // The r=0 node weight vanishes automatically for N >= 2.
    const double omega = unit_sphere_area(dimension);
    for (std::size_t i = 0; i < n; ++i) {
        const double tw = (i == 0 || i + 1 == n) ? 0.5 * h_ : h_;
        w_[i] = tw * omega * std::pow(r_[i], dimension - 1);
    }
}

double RadialGrid::ball_volume() const {
    return unit_sphere_area(dim_) * std::pow(r_max(), dim_) / dim_;
}

GridPtr make_grid(int dimension, double r_max, std::size_t node_count) {
    return std::make_shared<const RadialGrid>(dimension, r_max, node_count);
}

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_)
        throw std::invalid_argument("RadialField: null grid");
    if (values_.size() != grid_->size())
        throw std::invalid_argument("RadialField: value count does not match grid");
    for (double v : values_)
        if (!std::isfinite(v))
            throw std::invalid_argument("RadialField: non-finite value");
}

RadialField RadialField::zeros(GridPtr grid) {
    std::vector<double> v(grid->size(), 0.0);
    return RadialField(std::move(grid), std::move(v));
}

RadialField RadialField::from_function(GridPtr grid,
                                       const std::function<double(double)>& f) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i)
        v[i] = f(grid->node(i));
    return RadialField(std::move(grid), std::move(v));
}

double integrate_radial(const RadialField& f) {
    const auto& w = f.grid().weights();
    const auto& v = f.values();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += w[i] * v[i];
    return s;
}

double inner_product(const RadialField& f, const RadialField& g) {
    if (f.grid_ptr() != g.grid_ptr() && f.size() != g.size())
        throw std::invalid_argument("inner_product: grid mismatch");
    const auto& w = f.grid().weights();
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        s += w[i] * f[i] * g[i];
    return s;
}

RadialField radial_derivative(const RadialField& u) {
    const std::size_t n = u.size();
    if (n < 3)
        throw std::invalid_argument("radial_derivative: need at least 3 nodes");
    const double h = u.grid().spacing();
    const auto& v = u.values();
    std::vector<double> d(n);
    d[0] = 0.0; // even extension of the radial profile
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return RadialField(u.grid_ptr(), std::move(d));
}

MonotoneCubic::MonotoneCubic(const std::vector<double>& x,
                             const std::vector<double>& y)
    : x_(x), y_(y) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw std::invalid_argument("MonotoneCubic: bad input sizes");
    m_.resize(n);
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);

    m_[0] = delta[0];
    m_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            m_[i] = 0.0;
        } else {
            // Fritsch-Butland weighted harmonic mean keeps the interpolant
            // monotone on monotone data.
            const double h0 = x_[i] - x_[i - 1];
            const double h1 = x_[i + 1] - x_[i];
            const double w0 = 2.0 * h1 + h0;
            const double w1 = h1 + 2.0 * h0;
            m_[i] = (w0 + w1) / (w0 / delta[i - 1] + w1 / delta[i]);
        }
    }
    // Clamp endpoint slopes (standard pchip rule).
    auto clamp_end = [](double m, double d0, double d1) {
        if (d0 == 0.0) return 0.0;
        double m2 = m;
        if (m2 * d0 < 0.0) m2 = 0.0;
        else if (d0 * d1 < 0.0 && std::abs(m2) > 3.0 * std::abs(d0))
            m2 = 3.0 * d0;
        return m2;
    };
    if (n >= 3) {
        m_[0] = clamp_end(((2.0 * (x_[1] - x_[0]) + (x_[2] - x_[1])) * delta[0] -
                           (x_[1] - x_[0]) * delta[1]) /
                              ((x_[2] - x_[1]) + (x_[1] - x_[0])),
                          delta[0], delta[1]);
        m_[n - 1] = clamp_end(
            ((2.0 * (x_[n - 1] - x_[n - 2]) + (x_[n - 2] - x_[n - 3])) * delta[n - 2] -
             (x_[n - 1] - x_[n - 2]) * delta[n - 3]) /
                ((x_[n - 2] - x_[n - 3]) + (x_[n - 1] - x_[n - 2])),
            delta[n - 2], delta[n - 3]);
    }
}

MonotoneCubic::MonotoneCubic(const RadialField& u)
    : MonotoneCubic(u.grid().nodes(), u.values()) {}

double MonotoneCubic::operator()(double x) const {
    if (x < x_.front() || x > x_.back())
        return 0.0;
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = (it == x_.begin()) ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    if (i + 1 >= x_.size()) i = x_.size() - 2;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

RadialField resample(const RadialField& u, GridPtr target) {
    if (target == u.grid_ptr())
        return u;
    MonotoneCubic interp(u);
    std::vector<double> v(target->size());
    for (std::size_t i = 0; i < target->size(); ++i)
        v[i] = interp(target->node(i));
    return RadialField(std::move(target), std::move(v));
}

RadialField rearrange_decreasing(const RadialField& u) {
    const auto& grid = u.grid();
    const std::size_t n = u.size();
    const int dim = grid.dimension();
    const double omega = unit_sphere_area(dim);

    // Cell partition of the ball by the midpoints between nodes.
    auto ball_vol = [&](double r) { return omega * std::pow(r, dim) / dim; };
    std::vector<double> cell_lo(n), cell_hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = (i == 0) ? 0.0 : 0.5 * (grid.node(i - 1) + grid.node(i));
        const double hi =
            (i + 1 == n) ? grid.r_max() : 0.5 * (grid.node(i) + grid.node(i + 1));
        cell_lo[i] = ball_vol(lo);
        cell_hi[i] = ball_vol(hi);
    }

    // Sort cells by descending |u|; pouring them into the volume axis in that
    // order defines the layer-cake profile of the rearrangement.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const auto& v = u.values();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(v[a]) > std::abs(v[b]);
    });

    std::vector<double> level_value(n), level_end(n);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = order[k];
        acc += cell_hi[i] - cell_lo[i];
        level_value[k] = std::abs(v[i]);
        level_end[k] = acc;
    }

    // Each output cell takes the volume-weighted average of the levels that
    // cover its span, which conserves the cell-measure integral exactly.
    std::vector<double> out(n, 0.0);
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = cell_lo[j];
        const double hi = cell_hi[j];
        const double vol = hi - lo;
        if (vol <= 0.0) { // the origin cell in N>=2 has positive volume; guard anyway
            out[j] = (k < n) ? level_value[k] : 0.0;
            continue;
        }
        while (k < n && level_end[k] <= lo) ++k;
        double covered = lo;
        double sum = 0.0;
        std::size_t kk = k;
        while (kk < n && covered < hi) {
            const double seg = std::min(level_end[kk], hi) - covered;
            if (seg > 0.0) {
                sum += seg * level_value[kk];
                covered += seg;
            }
            if (level_end[kk] <= hi) ++kk; else break;
        }
        out[j] = sum / vol;
    }
    return RadialField(u.grid_ptr(), std::move(out));
}

double lq_norm(const RadialField& u, double q) {
    if (q < 1.0)
        throw std::invalid_argument("lq_norm: q must be >= 1");
    const auto& w = u.grid().weights();
    const auto& v = u.values();
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += w[i] * std::pow(std::abs(v[i]), q);
    return std::pow(s, 1.0 / q);
}

int count_nodes(const RadialField& u, double dead_band_rel) {
    double vmax = 0.0;
    for (double v : u.values())
        vmax = std::max(vmax, std::abs(v));
    const double band = dead_band_rel * vmax;
    int nodes = 0;
    int last_sign = 0;
    for (double v : u.values()) {
        if (std::abs(v) <= band)
            continue;
        const int s = v > 0.0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign)
            ++nodes;
        last_sign = s;
    }
    return nodes;
}

} // namespace qnls
