#pragma once

#include <cstddef>
#include <string>

#include "isofokker/grid.hpp"
#include "isofokker/spectral.hpp"

namespace isofokker {

/// Ornstein-Uhlenbeck drift D = -gamma x, W = gamma x^2 / 4.
DriftSpec ou_scenario(const Grid1D& grid, double gamma);
/// eps_k = gamma k
double ou_energy(double gamma, std::size_t k);
/// Unit-norm H_k(x sqrt(gamma/2)) exp(-gamma x^2/4), leftmost lobe positive.
GridFunction ou_state(const Grid1D& grid, double gamma, std::size_t k);

/// Particle in a box: V = 0 with Dirichlet walls at the grid ends. There is
/// no finite prepotential (the zero mode is not normalizable), so only the
/// operator is provided.
SchrodingerOperator box_hamiltonian(const Grid1D& grid);
/// ((k+1) pi / L)^2
double box_energy(const Grid1D& grid, std::size_t k);

/// Schwarzschild thermal potential U = Int (T_h - T) dS in terms of the
/// horizon radius r, with T_h = 1/(4 pi r) and S = pi r^2.
struct ThermalPotential {
    double T;
    GridFunction U;
    DriftSpec drift;  ///< W = U/2, D = -U'
};

double hawking_temperature(double r);
double horizon_entropy(double r);
/// U = r/2 - pi T r^2
double schwarzschild_u(double T, double r);

/// Throws std::invalid_argument for T <= 0 or a grid reaching r <= 0.
ThermalPotential schwarzschild_potential(double T, const Grid1D& grid);

/// U(c1) + Int_{c1}^{r} (T_h - T) S'(r') dr' by cumulative quadrature.
GridFunction thermal_potential_by_quadrature(double T, const Grid1D& grid);

/// Two-column CSV (x, D) on a uniform grid with an odd number of rows; an
/// optional header row is skipped. W = -(1/2) cumulative_integral(D).
/// Throws std::invalid_argument on malformed rows, non-finite values or a
/// non-uniform x column.
DriftSpec custom_drift(const std::string& path);

} // namespace isofokker
