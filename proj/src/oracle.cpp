#include "isofokker/oracle.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "isofokker/error.hpp"
#include "isofokker/mittag.hpp"

namespace isofokker {

namespace {

// z / (e^z - 1)
double bernoulli(double z) {
    if (std::abs(z) < 1e-12) return 1.0 - 0.5 * z;
    return z / std::expm1(z);
}

struct Tridiagonal {
    std::vector<double> lower, diag, upper;
};

// y = (I + s L) x
std::vector<double> apply(const Tridiagonal& L, double s, const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i] + s * L.diag[i] * x[i];
        if (i > 0) v += s * L.lower[i] * x[i - 1];
        if (i + 1 < n) v += s * L.upper[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

// Thomas algorithm for (I - s L) x = b; the matrix is column diagonally dominant.
class ImplicitSolver {
public:
    ImplicitSolver(const Tridiagonal& L, double s) : c_(L.diag.size()), m_(L.diag.size()), lower_(L.diag.size()) {
        const std::size_t n = L.diag.size();
        for (std::size_t i = 0; i < n; ++i) lower_[i] = -s * L.lower[i];
        double denom = 1.0 - s * L.diag[0];
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) denom = 1.0 - s * L.diag[i] - lower_[i] * c_[i - 1];
            if (!(std::abs(denom) > 0.0) || !std::isfinite(denom)) {
                throw NumericalError("cn_evolve: singular Crank-Nicolson matrix");
            }
            m_[i] = 1.0 / denom;
            c_[i] = (i + 1 < n) ? -s * L.upper[i] * m_[i] : 0.0;
        }
    }

    void solve(std::vector<double>& b) const {
        const std::size_t n = b.size();
        b[0] *= m_[0];
        for (std::size_t i = 1; i < n; ++i) b[i] = (b[i] - lower_[i] * b[i - 1]) * m_[i];
        for (std::size_t i = n - 1; i-- > 0;) b[i] -= c_[i] * b[i + 1];
    }

private:
    std::vector<double> c_, m_, lower_;
};

double trapezoid_mass(const std::vector<double>& p, double h) {
    double s = 0.5 * (p.front() + p.back());
    for (std::size_t i = 1; i + 1 < p.size(); ++i) s += p[i];
    return s * h;
}

} // namespace

GridFunction cn_evolve(const DriftSpec& drift, const GridFunction& P0, const CnConfig& cfg) {
    const Grid1D& grid = P0.grid();
    if (!(drift.D.grid() == grid)) throw std::invalid_argument("cn_evolve: drift and initial density use different grids");
    const double h = grid.spacing();
    if (!(cfg.dt > 0.0) || cfg.dt > h) {
        std::ostringstream os;
        os << "cn_evolve: need 0 < dt <= h = " << h << ", got dt = " << cfg.dt;
        throw std::invalid_argument(os.str());
    }
    if (!(cfg.t_end >= 0.0)) throw std::invalid_argument("cn_evolve: t_end must be non-negative");

    const std::size_t n = grid.size();
    Tridiagonal L{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        // F_{i+1/2} = (B(-z) P_i - B(z) P_{i+1}) / h
        const double z = h * 0.5 * (drift.D[i] + drift.D[i + 1]);
        const double left = bernoulli(-z) / h;
        const double right = bernoulli(z) / h;
        const double wi = (i == 0) ? 0.5 * h : h;
        const double wj = (i + 1 == n - 1) ? 0.5 * h : h;
        // dP_i/dt gets -F/w_i, dP_{i+1}/dt gets +F/w_{i+1}
        L.diag[i] -= left / wi;
        L.upper[i] += right / wi;
        L.lower[i + 1] += left / wj;
        L.diag[i + 1] -= right / wj;
    }
    if (cfg.boundary == Boundary::DirichletZero) {
        for (std::size_t i : {std::size_t{0}, n - 1}) L.lower[i] = L.diag[i] = L.upper[i] = 0.0;
    }

    std::vector<double> p(P0.values().begin(), P0.values().end());
    if (cfg.boundary == Boundary::DirichletZero) p.front() = p.back() = 0.0;
    if (cfg.t_end == 0.0) return GridFunction(grid, std::move(p));

    const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    const double dt = cfg.t_end / static_cast<double>(steps);
    const ImplicitSolver solver(L, 0.5 * dt);
    const double mass0 = trapezoid_mass(p, h);
    for (std::size_t k = 0; k < steps; ++k) {
        p = apply(L, 0.5 * dt, p);
        if (cfg.boundary == Boundary::DirichletZero) p.front() = p.back() = 0.0;
        solver.solve(p);
    }
    if (cfg.boundary == Boundary::ZeroFlux) {
        const double drift_mass = std::abs(trapezoid_mass(p, h) - mass0);
        if (drift_mass > 1e-6 * std::max(1.0, std::abs(mass0))) {
            std::ostringstream os;
            os << "cn_evolve: mass drifted by " << drift_mass << " under zero-flux walls";
            throw NumericalError(os.str());
        }
    }
    return GridFunction(grid, std::move(p));
}

namespace {

void check_residual_args(double dt, double t_end) {
    if (!(dt > 0.0) || !(t_end > 0.0) || dt > t_end) {
        throw std::invalid_argument("residual check: need 0 < dt <= t_end");
    }
}

template <typename Fn>
double max_residual(double dt, double t_end, double t_min, Fn&& residual_at) {
    check_residual_args(dt, t_end);
    if (t_min < 0.0) t_min = 0.1 * t_end;
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    double worst = 0.0;
    for (std::size_t j = 1; j <= steps; ++j) {
        if (static_cast<double>(j) * dt < t_min * (1.0 - 1e-12)) continue;
        worst = std::max(worst, std::abs(residual_at(j)));
    }
    return worst;
}

} // namespace

double gl_residual(double alpha, double eps, double dt, double t_end, double t_min) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("gl_residual: need 0 < alpha < 1");
    if (!(eps >= 0.0)) throw std::invalid_argument("gl_residual: need eps >= 0");
    check_residual_args(dt, t_end);
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    std::vector<double> T(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) T[j] = ml_relaxation(alpha, eps, static_cast<double>(j) * dt);
    // Grunwald-Letnikov weights of order beta = 1 - alpha.
    const double beta = 1.0 - alpha;
    std::vector<double> w(steps + 1);
    w[0] = 1.0;
    for (std::size_t m = 1; m <= steps; ++m) w[m] = w[m - 1] * (1.0 - (beta + 1.0) / static_cast<double>(m));
    const double scale = std::pow(dt, -beta);
    return max_residual(dt, t_end, t_min, [&](std::size_t j) {
        double gl = 0.0;
        for (std::size_t m = 0; m <= j; ++m) gl += w[m] * T[j - m];
        return (T[j] - T[j - 1]) / dt + eps * scale * gl;
    });
}

double classical_residual(double eps, double dt, double t_end, double t_min) {
    if (!(eps >= 0.0)) throw std::invalid_argument("classical_residual: need eps >= 0");
    return max_residual(dt, t_end, t_min, [&](std::size_t j) {
        const double t = static_cast<double>(j) * dt;
        const double now = std::exp(-eps * t);
        return (now - std::exp(-eps * (t - dt))) / dt + eps * now;
    });
}

} // namespace isofokker
