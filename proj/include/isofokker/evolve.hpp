#pragma once

#include <cstddef>
#include <vector>

#include "isofokker/grid.hpp"
#include "isofokker/spectral.hpp"

namespace isofokker {

/// Temporal factor attached to a mode of energy eps: exp(-eps t) for the
/// ordinary FPE, E_alpha(-eps t^alpha) for the fractional one.
class TemporalRule {
public:
    enum class Kind { Classical, Fractional };

    static TemporalRule classical() { return TemporalRule(Kind::Classical, 1.0); }
    /// Throws std::invalid_argument unless 0 < alpha < 1.
    static TemporalRule fractional(double alpha);

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double factor(double eps, double t) const;

private:
    TemporalRule(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}
    Kind kind_;
    double alpha_;
};

/// Expansion P(x,t) = phi_0 sum_k c_k phi_k tau_k(t) over an orthonormal basis
/// whose first state is the ground state. The basis may be the original
/// spectrum or a deformed one.
struct FpeSolution {
    Spectrum basis;
    std::vector<double> coeffs;
    TemporalRule temporal = TemporalRule::classical();
};

/// c_k = Int phi_k (P0 / phi_0) dx for k <= kmax. Nodes where phi_0 is below
/// the default floor contribute nothing; throws NumericalError if P0 is not
/// negligible there.
std::vector<double> project(const GridFunction& P0, const Spectrum& spectrum);

GridFunction evolve_pdf(const FpeSolution& sol, double t);

/// phi_0 sum_k c_k phi_k at t = 0.
GridFunction reconstruct(const FpeSolution& sol);

/// || P0 - reconstruct(sol) ||_1
double truncation_residual(const GridFunction& P0, const FpeSolution& sol);

/// Int x^m P dx for each requested m.
std::vector<double> moments(const GridFunction& P, const std::vector<int>& orders);

/// Gaussian density with the given mean and variance sampled on the grid.
GridFunction gaussian_density(const Grid1D& grid, double mean, double variance);

} // namespace isofokker
