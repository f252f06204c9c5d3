#include "isofokker/evolve.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "isofokker/error.hpp"
#include "isofokker/mittag.hpp"

namespace isofokker {

TemporalRule TemporalRule::fractional(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        std::ostringstream os;
        os << "fractional evolution needs 0 < alpha < 1, got " << alpha;
        throw std::invalid_argument(os.str());
    }
    return TemporalRule(Kind::Fractional, alpha);
}

double TemporalRule::factor(double eps, double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("temporal factor: t must be non-negative");
    if (kind_ == Kind::Classical) return std::exp(-eps * t);
    return ml_relaxation(alpha_, eps, t);
}

std::vector<double> project(const GridFunction& P0, const Spectrum& spectrum) {
    const GridFunction& phi0 = spectrum.states.front();
    const double floor = kDefaultRelativeFloor * phi0.max_abs();
    const double p_tol = 1e-10 * P0.max_abs();
    std::vector<double> ratio(P0.size(), 0.0);
    for (std::size_t i = 0; i < P0.size(); ++i) {
        if (std::abs(phi0[i]) >= floor) {
            ratio[i] = P0[i] / phi0[i];
        } else if (std::abs(P0[i]) > p_tol) {
            std::ostringstream os;
            os << "project: initial density is not negligible (" << P0[i] << ") at x = " << P0.grid().x(i)
               << " where the ground state underflows; its tails are heavier than the stationary density";
            throw NumericalError(os.str());
        }
    }
    const GridFunction q(P0.grid(), std::move(ratio));
    std::vector<double> c;
    c.reserve(spectrum.states.size());
    for (const auto& phi : spectrum.states) c.push_back(inner(phi, q));
    return c;
}

namespace {

GridFunction expand(const FpeSolution& sol, double t) {
    if (sol.coeffs.size() > sol.basis.states.size()) {
        throw std::invalid_argument("evolve_pdf: more coefficients than basis states");
    }
    const GridFunction& phi0 = sol.basis.states.front();
    std::vector<double> sum(phi0.size(), 0.0);
    for (std::size_t k = 0; k < sol.coeffs.size(); ++k) {
        const double w = sol.coeffs[k] * (t == 0.0 ? 1.0 : sol.temporal.factor(sol.basis.energies[k], t));
        if (w == 0.0) continue;
        const auto phi = sol.basis.states[k].values();
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w * phi[i];
    }
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] *= phi0[i];
    return GridFunction(phi0.grid(), std::move(sum));
}

} // namespace

GridFunction evolve_pdf(const FpeSolution& sol, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("evolve_pdf: t must be non-negative");
    return expand(sol, t);
}

GridFunction reconstruct(const FpeSolution& sol) { return expand(sol, 0.0); }

double truncation_residual(const GridFunction& P0, const FpeSolution& sol) {
    return integrate((P0 - reconstruct(sol)).map([](double v) { return std::abs(v); }));
}

std::vector<double> moments(const GridFunction& P, const std::vector<int>& orders) {
    std::vector<double> out;
    out.reserve(orders.size());
    for (int m : orders) {
        const GridFunction xm(P.grid(), [m](double x) { return std::pow(x, m); });
        out.push_back(integrate(xm * P));
    }
    return out;
}

GridFunction gaussian_density(const Grid1D& grid, double mean, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("gaussian: variance must be positive");
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * variance);
    return GridFunction(grid, [=](double x) { return norm * std::exp(-(x - mean) * (x - mean) / (2.0 * variance)); });
}

} // namespace isofokker
