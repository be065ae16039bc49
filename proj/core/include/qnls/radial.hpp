#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace qnls {

/// Surface area of the unit sphere in R^N. N=1 returns 2, so integrals of
/// even profiles over the half-line double to integrals over the whole line.
double unit_sphere_area(int dimension);

/// Uniform discretization of [0, R_max] carrying the volume measure
/// omega_N r^{N-1} dr as composite-trapezoid quadrature weights.
class RadialGrid {
public:
    RadialGrid(int dimension, double r_max, std::size_t node_count);

    int dimension() const { return dim_; }
    double r_max() const { return r_.back(); }
    double spacing() const { return h_; }
    std::size_t size() const { return r_.size(); }
    double node(std::size_t i) const { return r_[i]; }
    double weight(std::size_t i) const { return w_[i]; }
    const std::vector<double>& nodes() const { return r_; }
    const std::vector<double>& weights() const { return w_; }

    /// omega_N R^N / N, what integrating 1 must reproduce.
    double ball_volume() const;

private:
    int dim_;
    double h_;
    std::vector<double> r_;
    std::vector<double> w_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(int dimension, double r_max, std::size_t node_count);

/// Sampled radial function u(r). Immutable after construction; grids are
/// shared, so copies are cheap to pass around.
class RadialField {
public:
    RadialField(GridPtr grid, std::vector<double> values);

    static RadialField zeros(GridPtr grid);
    static RadialField from_function(GridPtr grid,
                                     const std::function<double(double)>& f);

    const RadialGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Sum of w_i f_i: the integral of f over R^N for radial f.
double integrate_radial(const RadialField& f);

/// L^2(R^N) pairing of two fields on the same grid.
double inner_product(const RadialField& f, const RadialField& g);

/// Second-order derivative: central in the interior, one-sided at r = R_max,
/// zero at r = 0 (even extension of a radial profile).
RadialField radial_derivative(const RadialField& u);

/// Monotone (Fritsch-Carlson) cubic Hermite interpolant. Evaluates to zero
/// outside the source interval, matching compactly supported profiles.
class MonotoneCubic {
public:
    MonotoneCubic(const std::vector<double>& x, const std::vector<double>& y);
    explicit MonotoneCubic(const RadialField& u);

    double operator()(double x) const;

private:
    std::vector<double> x_, y_, m_;
};

RadialField resample(const RadialField& u, GridPtr target);

/// Equimeasurable radially nonincreasing rearrangement of |u| on the same
/// grid: cell values of |u| sorted by descending magnitude are poured into
/// the radial volume axis from the origin outward.
RadialField rearrange_decreasing(const RadialField& u);

double lq_norm(const RadialField& u, double q);

/// Strict sign changes of the value array, ignoring entries inside a dead
/// band of dead_band_rel * max|u| around zero.
int count_nodes(const RadialField& u, double dead_band_rel = 1e-10);

} // namespace qnls
