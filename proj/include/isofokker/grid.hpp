#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace isofokker {

/// Uniform grid on the truncated domain [c1, c2].
///
/// The node count is always odd so that composite Simpson quadrature
/// covers the whole interval.
class Grid1D {
public:
    Grid1D(double c1, double c2, std::size_t n_points);

    double c1() const { return c1_; }
    double c2() const { return c2_; }
    std::size_t size() const { return n_; }
    double spacing() const { return h_; }
    double x(std::size_t i) const { return c1_ + static_cast<double>(i) * h_; }
    std::vector<double> nodes() const;

    /// Index of the node closest to `x` (clamped to the grid).
    std::size_t nearest(double x) const;

    bool operator==(const Grid1D& other) const = default;

private:
    double c1_;
    double c2_;
    std::size_t n_;
    double h_;
};

Grid1D make_grid(double c1, double c2, std::size_t n_points);

/// Real samples of a function on a Grid1D.
class GridFunction {
public:
    GridFunction(const Grid1D& grid, std::vector<double> values);
    /// Samples `f` at every node.
    GridFunction(const Grid1D& grid, const std::function<double(double)>& f);

    static GridFunction zeros(const Grid1D& grid);

    const Grid1D& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    double max_abs() const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(double s);

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(GridFunction a, double s) { return a *= s; }
    friend GridFunction operator*(double s, GridFunction a) { return a *= s; }

    /// Pointwise product and quotient.
    friend GridFunction operator*(const GridFunction& a, const GridFunction& b);
    friend GridFunction operator/(const GridFunction& a, const GridFunction& b);

    template <typename Fn>
    GridFunction map(Fn&& fn) const {
        std::vector<double> out(values_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(values_[i]);
        return GridFunction(grid_, std::move(out));
    }

private:
    Grid1D grid_;
    std::vector<double> values_;
};

/// Node-wise reliability flags; `true` means the node is trusted.
using Mask = std::vector<bool>;

Mask full_mask(const Grid1D& grid);
std::size_t masked_count(const Mask& mask);
Mask mask_and(const Mask& a, const Mask& b);

/// Composite Simpson approximation of the integral over [c1, c2].
double integrate(const GridFunction& f);

/// L2 inner product by Simpson quadrature.
double inner(const GridFunction& f, const GridFunction& g);

/// g(x_i) = integral of f over [c1, x_i]; g(c1) = 0 and g(c2) equals integrate(f).
GridFunction cumulative_integral(const GridFunction& f);

/// Fourth-order finite differences (centred inside, one-sided at both ends).
GridFunction derivative(const GridFunction& f);

/// (ln|f|)' = f'/f together with its reliability mask.
struct LogDerivative {
    GridFunction values;
    Mask reliable;
};

constexpr double kDefaultRelativeFloor = 1e-12;

/// Nodes where |f| < floor are masked and their value is left at zero.
/// Throws std::invalid_argument if floor <= 0, NumericalError if every node is masked.
LogDerivative log_derivative(const GridFunction& f, double floor);
/// Uses floor = kDefaultRelativeFloor * max|f|.
LogDerivative log_derivative(const GridFunction& f);

/// Replaces masked values: outer masked bands are continued by a least-squares
/// line through the nearest reliable nodes, inner bands are linearly interpolated.
GridFunction fill_masked(const GridFunction& f, const Mask& reliable);

/// max |f - g| over nodes that are reliable and inside [lo, hi].
double sup_distance(const GridFunction& f, const GridFunction& g, const Mask& reliable,
                    double lo, double hi);
double sup_distance(const GridFunction& f, const GridFunction& g);

/// Number of sign changes among nodes with |f| >= floor.
std::size_t sign_changes(const GridFunction& f, double floor);

/// Relative size below which the runs at either end count as a wall layer.
constexpr double kWallLayerFraction = 1e-6;

/// sign_changes restricted to the nodes between the first and last node with
/// |f| >= edge_fraction * max|f|. Finite differences next to a Dirichlet wall
/// leave round-off of either sign there.
std::size_t interior_sign_changes(const GridFunction& f, double floor, double edge_fraction = kWallLayerFraction);

} // namespace isofokker
