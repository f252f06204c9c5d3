#include "isofokker/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "isofokker/io.hpp"

namespace isofokker {

DriftSpec ou_scenario(const Grid1D& grid, double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("ou_scenario: gamma must be positive");
    GridFunction W(grid, [gamma](double x) { return 0.25 * gamma * x * x; });
    GridFunction D(grid, [gamma](double x) { return -gamma * x; });
    return {std::move(W), std::move(D), full_mask(grid)};
}

double ou_energy(double gamma, std::size_t k) { return gamma * static_cast<double>(k); }

GridFunction ou_state(const Grid1D& grid, double gamma, std::size_t k) {
    const double s = std::sqrt(0.5 * gamma);
    const auto order = static_cast<unsigned>(k);
    return normalize_state(
        GridFunction(grid, [=](double x) { return std::hermite(order, s * x) * std::exp(-0.25 * gamma * x * x); }));
}

SchrodingerOperator box_hamiltonian(const Grid1D& grid) {
    return build_hamiltonian_from_potential(GridFunction::zeros(grid));
}

double box_energy(const Grid1D& grid, std::size_t k) {
    const double q = static_cast<double>(k + 1) * std::numbers::pi / (grid.c2() - grid.c1());
    return q * q;
}

double hawking_temperature(double r) { return 1.0 / (4.0 * std::numbers::pi * r); }

double horizon_entropy(double r) { return std::numbers::pi * r * r; }

double schwarzschild_u(double T, double r) { return 0.5 * r - std::numbers::pi * T * r * r; }

namespace {

void check_thermal_args(double T, const Grid1D& grid) {
    if (!(T > 0.0)) throw std::invalid_argument("schwarzschild_potential: temperature must be positive");
    if (!(grid.c1() > 0.0)) {
        std::ostringstream os;
        os << "schwarzschild_potential: horizon radius grid must be positive, starts at " << grid.c1();
        throw std::invalid_argument(os.str());
    }
}

} // namespace

ThermalPotential schwarzschild_potential(double T, const Grid1D& grid) {
    check_thermal_args(T, grid);
    GridFunction U(grid, [T](double r) { return schwarzschild_u(T, r); });
    GridFunction W = U * 0.5;
    GridFunction D(grid, [T](double r) { return -(0.5 - 2.0 * std::numbers::pi * T * r); });
    return {T, std::move(U), {std::move(W), std::move(D), full_mask(grid)}};
}

GridFunction thermal_potential_by_quadrature(double T, const Grid1D& grid) {
    check_thermal_args(T, grid);
    // dS/dr = 2 pi r
    const GridFunction integrand(grid, [T](double r) { return (hawking_temperature(r) - T) * 2.0 * std::numbers::pi * r; });
    const double u0 = schwarzschild_u(T, grid.c1());
    return cumulative_integral(integrand).map([u0](double v) { return v + u0; });
}

DriftSpec custom_drift(const std::string& path) {
    const CsvTable table = read_csv(path);
    if (table.columns.size() != 2) {
        std::ostringstream os;
        os << path << ": expected two columns (x, D), got " << table.columns.size();
        throw std::invalid_argument(os.str());
    }
    for (double v : table.columns[1]) {
        if (!std::isfinite(v)) throw std::invalid_argument(path + ": drift column contains non-finite values");
    }
    const Grid1D grid = grid_from_nodes(table.columns[0]);
    return drift_from_coefficient(GridFunction(grid, table.columns[1]));
}

} // namespace isofokker
