#include "isofokker/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "isofokker/error.hpp"

namespace isofokker {

Grid1D::Grid1D(double c1, double c2, std::size_t n_points) : c1_(c1), c2_(c2), n_(n_points) {
    if (!std::isfinite(c1) || !std::isfinite(c2) || !(c1 < c2)) {
        std::ostringstream os;
        os << "grid: need c1 < c2, got [" << c1 << ", " << c2 << "]";
        throw std::invalid_argument(os.str());
    }
    if (n_points < 3) throw std::invalid_argument("grid: need at least 3 points");
    if (n_points % 2 == 0) throw std::invalid_argument("grid: n_points must be odd for Simpson quadrature");
    h_ = (c2 - c1) / static_cast<double>(n_points - 1);
}

std::vector<double> Grid1D::nodes() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = x(i);
    return out;
}

std::size_t Grid1D::nearest(double xv) const {
    const double r = std::round((xv - c1_) / h_);
    if (r <= 0.0) return 0;
    if (r >= static_cast<double>(n_ - 1)) return n_ - 1;
    return static_cast<std::size_t>(r);
}

Grid1D make_grid(double c1, double c2, std::size_t n_points) { return Grid1D(c1, c2, n_points); }

GridFunction::GridFunction(const Grid1D& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("grid function: length does not match grid");
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("grid function: non-finite sample");
    }
}

GridFunction::GridFunction(const Grid1D& grid, const std::function<double(double)>& f)
    : GridFunction(grid, [&] {
          std::vector<double> v(grid.size());
          for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.x(i));
          return v;
      }()) {}

GridFunction GridFunction::zeros(const Grid1D& grid) {
    return GridFunction(grid, std::vector<double>(grid.size(), 0.0));
}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    if (!(grid_ == other.grid_)) throw std::invalid_argument("grid function: grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    if (!(grid_ == other.grid_)) throw std::invalid_argument("grid function: grid mismatch");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid_ == b.grid_)) throw std::invalid_argument("grid function: grid mismatch");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] * b.values_[i];
    return GridFunction(a.grid_, std::move(out));
}

GridFunction operator/(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid_ == b.grid_)) throw std::invalid_argument("grid function: grid mismatch");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] / b.values_[i];
    return GridFunction(a.grid_, std::move(out));
}

Mask full_mask(const Grid1D& grid) { return Mask(grid.size(), true); }

std::size_t masked_count(const Mask& mask) {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), false));
}

Mask mask_and(const Mask& a, const Mask& b) {
    if (a.size() != b.size()) throw std::invalid_argument("mask: size mismatch");
    Mask out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
    return out;
}

double integrate(const GridFunction& f) {
    const auto v = f.values();
    const std::size_t n = v.size();
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) (i % 2 ? odd : even) += v[i];
    return f.grid().spacing() / 3.0 * (v[0] + v[n - 1] + 4.0 * odd + 2.0 * even);
}

double inner(const GridFunction& f, const GridFunction& g) { return integrate(f * g); }

GridFunction cumulative_integral(const GridFunction& f) {
    // Simpson panels up to even nodes; odd nodes take the quadratic through
    // the enclosing panel integrated over its first half.
    const auto v = f.values();
    const std::size_t n = v.size();
    const double h = f.grid().spacing();
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i + 2 < n; i += 2) {
        const double f0 = v[i], f1 = v[i + 1], f2 = v[i + 2];
        g[i + 1] = g[i] + h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2);
        g[i + 2] = g[i] + h / 3.0 * (f0 + 4.0 * f1 + f2);
    }
    return GridFunction(f.grid(), std::move(g));
}

GridFunction derivative(const GridFunction& f) {
    const auto v = f.values();
    const std::size_t n = v.size();
    const double h = f.grid().spacing();
    std::vector<double> d(n);
    if (n < 5) {
        d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
        return GridFunction(f.grid(), std::move(d));
    }
    const double s = 12.0 * h;
    d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / s;
    d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / s;
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / s;
    d[n - 2] = (3.0 * v[n - 1] + 10.0 * v[n - 2] - 18.0 * v[n - 3] + 6.0 * v[n - 4] - v[n - 5]) / s;
    d[n - 1] = (25.0 * v[n - 1] - 48.0 * v[n - 2] + 36.0 * v[n - 3] - 16.0 * v[n - 4] + 3.0 * v[n - 5]) / s;
    return GridFunction(f.grid(), std::move(d));
}

LogDerivative log_derivative(const GridFunction& f, double floor) {
    if (!(floor > 0.0)) throw std::invalid_argument("log_derivative: floor must be positive");
    const GridFunction df = derivative(f);
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    Mask reliable(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(f[i]) >= floor) {
            out[i] = df[i] / f[i];
            reliable[i] = true;
        }
    }
    if (masked_count(reliable) == n) throw NumericalError("log_derivative: |f| below floor at every node");
    return {GridFunction(f.grid(), std::move(out)), std::move(reliable)};
}

LogDerivative log_derivative(const GridFunction& f) {
    const double m = f.max_abs();
    if (m == 0.0) throw NumericalError("log_derivative: function vanishes identically");
    return log_derivative(f, kDefaultRelativeFloor * m);
}

namespace {

// Least-squares line through up to `count` reliable nodes starting at `from`
// and walking in direction `step`.
std::pair<double, double> edge_line(const GridFunction& f, const Mask& reliable, std::ptrdiff_t from,
                                    std::ptrdiff_t step, std::size_t count) {
    const auto n = static_cast<std::ptrdiff_t>(f.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::ptrdiff_t i = from; i >= 0 && i < n && m < count; i += step) {
        if (!reliable[static_cast<std::size_t>(i)]) break;
        const double xv = f.grid().x(static_cast<std::size_t>(i));
        const double yv = f[static_cast<std::size_t>(i)];
        sx += xv;
        sy += yv;
        sxx += xv * xv;
        sxy += xv * yv;
        ++m;
    }
    if (m == 0) return {0.0, 0.0};
    if (m == 1) return {sy, 0.0};
    const double md = static_cast<double>(m);
    const double den = md * sxx - sx * sx;
    const double slope = (md * sxy - sx * sy) / den;
    return {(sy - slope * sx) / md, slope};
}

} // namespace

GridFunction fill_masked(const GridFunction& f, const Mask& reliable) {
    const std::size_t n = f.size();
    if (reliable.size() != n) throw std::invalid_argument("fill_masked: mask size mismatch");
    std::vector<double> out(f.values().begin(), f.values().end());
    std::size_t first = 0;
    while (first < n && !reliable[first]) ++first;
    if (first == n) throw NumericalError("fill_masked: no reliable node");
    std::size_t last = n - 1;
    while (!reliable[last]) --last;

    constexpr std::size_t kFitNodes = 8;
    if (first > 0) {
        const auto [a, b] = edge_line(f, reliable, static_cast<std::ptrdiff_t>(first), 1, kFitNodes);
        for (std::size_t i = 0; i < first; ++i) out[i] = a + b * f.grid().x(i);
    }
    if (last + 1 < n) {
        const auto [a, b] = edge_line(f, reliable, static_cast<std::ptrdiff_t>(last), -1, kFitNodes);
        for (std::size_t i = last + 1; i < n; ++i) out[i] = a + b * f.grid().x(i);
    }
    for (std::size_t i = first; i <= last;) {
        if (reliable[i]) {
            ++i;
            continue;
        }
        const std::size_t lo = i - 1;
        std::size_t hi = i;
        while (!reliable[hi]) ++hi;
        for (std::size_t j = lo + 1; j < hi; ++j) {
            const double w = static_cast<double>(j - lo) / static_cast<double>(hi - lo);
            out[j] = (1.0 - w) * f[lo] + w * f[hi];
        }
        i = hi;
    }
    return GridFunction(f.grid(), std::move(out));
}

double sup_distance(const GridFunction& f, const GridFunction& g, const Mask& reliable, double lo, double hi) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("sup_distance: grid mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double xv = f.grid().x(i);
        if (xv < lo || xv > hi) continue;
        if (!reliable.empty() && !reliable[i]) continue;
        m = std::max(m, std::abs(f[i] - g[i]));
    }
    return m;
}

double sup_distance(const GridFunction& f, const GridFunction& g) {
    return sup_distance(f, g, {}, f.grid().c1(), f.grid().c2());
}

std::size_t sign_changes(const GridFunction& f, double floor) {
    std::size_t changes = 0;
    int last = 0;
    for (double v : f.values()) {
        if (std::abs(v) < floor) continue;
        const int s = v > 0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

std::size_t interior_sign_changes(const GridFunction& f, double floor, double edge_fraction) {
    const double edge = edge_fraction * f.max_abs();
    std::size_t lo = 0, hi = f.size();
    while (lo < hi && std::abs(f[lo]) < edge) ++lo;
    while (hi > lo && std::abs(f[hi - 1]) < edge) --hi;
    std::size_t changes = 0;
    int last = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        if (std::abs(f[i]) < floor) continue;
        const int s = f[i] > 0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

} // namespace isofokker
