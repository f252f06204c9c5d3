#pragma once

#include "isofokker/grid.hpp"
#include "isofokker/spectral.hpp"

namespace isofokker {

enum class Boundary { ZeroFlux, DirichletZero };

struct CnConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    Boundary boundary = Boundary::ZeroFlux;
};

/// Integrates dP/dt = -(D P)' + P'' directly with Crank-Nicolson.
///
/// The flux F = D P - P' lives at half nodes with D averaged from the two
/// neighbours; within a cell it is exponentially fitted, which keeps
/// exp(-2W) stationary. Zero-flux walls use half cells at c1 and c2 and
/// conserve the trapezoidal mass to round-off. The step is shortened so
/// that t_end is hit exactly.
///
/// Throws std::invalid_argument for dt <= 0, dt > h or t_end < 0, and
/// NumericalError if zero-flux mass drifts by more than 1e-6.
GridFunction cn_evolve(const DriftSpec& drift, const GridFunction& P0, const CnConfig& cfg);

/// Max over t_j in [t_min, t_end] of the residual of the fractional
/// relaxation equation T' = -eps RL-D^{1-alpha} T evaluated on
/// T = ml_relaxation(alpha, eps, .): backward difference on the left,
/// Grunwald-Letnikov weights on the right. Both are first order in dt.
/// t_min < 0 selects t_end / 10; the t^alpha singularity at t = 0 spoils
/// the order on any window reaching down to the origin.
double gl_residual(double alpha, double eps, double dt, double t_end, double t_min = -1.0);

/// Same residual for the classical T' = -eps T with T = exp(-eps t).
double classical_residual(double eps, double dt, double t_end, double t_min = -1.0);

} // namespace isofokker
