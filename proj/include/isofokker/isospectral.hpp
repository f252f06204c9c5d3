#pragma once

#include <cstddef>
#include <vector>

#include "isofokker/darboux.hpp"
#include "isofokker/evolve.hpp"
#include "isofokker/grid.hpp"
#include "isofokker/spectral.hpp"

namespace isofokker {

/// Deformation parameters lambda_0 .. lambda_{n-1}, one per reinstated level.
struct IsoParams {
    std::vector<double> lambdas;
};

/// Virtual state Phi_s = (I_s + lambda) / phi_s^(s) of stage s.
///
/// Phi_s is unbounded at the Dirichlet walls where phi_s^(s) vanishes, so
/// only its reciprocal is sampled.
struct VirtualState {
    std::size_t s;
    double lambda;
    GridFunction I;        ///< I_s(x) = Int_{c1}^x (phi_s^(s))^2
    GridFunction inverse;  ///< Phi_s^{-1} = phi_s^(s) / (I_s + lambda)
};

/// Throws std::invalid_argument when lambda lies in [-i_end, 0] or is not finite.
void check_admissible(std::size_t s, double lambda, double i_end);

VirtualState virtual_state(const DarbouxChain& chain, std::size_t s, double lambda);

/// n-parameter isospectral partner of the base spectrum of a chain.
struct IsoDeformation {
    IsoParams params;
    DarbouxChain chain;
    /// Phi_s^{-1}(lambda_s, ..., lambda_{n-1}) for s = 0..n-1 (unit L2 norm).
    std::vector<GridFunction> dressed_inverse;
    /// Kernels of B_s = d/dx - (ln|Phi_s^{-1}|)'.
    std::vector<FirstOrderKernel> b_kernels;
    /// Deformed states with the original energies; states[0] is Phi_0^{-1}.
    Spectrum basis;
    DriftSpec drift;

    std::size_t n() const { return params.lambdas.size(); }
};

/// Reinstates the n = params.lambdas.size() lowest levels deleted by `chain`.
/// Virtual states are dressed from level n-1 downward. Throws
/// std::invalid_argument for inadmissible parameters, including dressed
/// virtual states that develop interior zeros.
IsoDeformation reinstate(const DarbouxChain& chain, const IsoParams& params);

/// D = 2 (ln|Phi_0^{-1}(lambda_0, ..., lambda_{n-1})|)'
const DriftSpec& deformed_drift(const IsoDeformation& deformation);

/// Phi_0^{-1} sum_k c_k hat-phi_k tau_k(t) with unit mass. The coefficients
/// come from projecting onto the original spectrum.
GridFunction iso_pdf(const IsoDeformation& deformation, const std::vector<double>& coeffs, double t,
                     const TemporalRule& temporal = TemporalRule::classical());

} // namespace isofokker
