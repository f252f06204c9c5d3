#pragma once

#include <cstddef>
#include <vector>

#include "isofokker/evolve.hpp"
#include "isofokker/grid.hpp"
#include "isofokker/spectral.hpp"

namespace isofokker {

/// First-order operator A = d/dx - g with g = (ln|f|)' for a node-free f.
/// The kernel is defined everywhere: edge bands where f underflowed are
/// continued linearly, `reliable` remembers which nodes were computed.
struct FirstOrderKernel {
    GridFunction g;
    Mask reliable;
};

/// Kernel (ln|f|)' of a node-free function. Throws NumericalError when masked
/// nodes that do not touch the domain edges exceed 5% of the interior.
FirstOrderKernel kernel_of(const GridFunction& f);

/// A f = f' - g f
GridFunction apply_lowering(const FirstOrderKernel& a, const GridFunction& f);
/// A^+ f = -f' - g f
GridFunction apply_raising(const FirstOrderKernel& a, const GridFunction& f);

/// Successive Darboux deletions of the lowest levels of a spectrum.
///
/// Stage s holds phi_k^(s) for k = s..kmax (unit L2 norm, leftmost lobe
/// positive) with energies eps_k - eps_s. Stage 0 is the base spectrum.
class DarbouxChain {
public:
    explicit DarbouxChain(Spectrum base);

    const Spectrum& base() const { return base_; }
    std::size_t n_steps() const { return stages_.size() - 1; }
    std::size_t kmax() const { return base_.kmax(); }

    /// phi_k^(s); requires s <= n_steps and s <= k <= kmax.
    const GridFunction& state(std::size_t s, std::size_t k) const;
    /// eps_k - eps_s
    double stage_energy(std::size_t s, std::size_t k) const;
    /// Kernel of A^(s), built from phi_s^(s).
    const FirstOrderKernel& lowering(std::size_t s) const;

    /// Stage s as a Spectrum (ground state phi_s^(s) first).
    Spectrum stage_spectrum(std::size_t s) const;

private:
    friend DarbouxChain darboux_step(const DarbouxChain& chain);

    Spectrum base_;
    std::vector<std::vector<GridFunction>> stages_;
    std::vector<FirstOrderKernel> kernels_;
};

/// Appends stage s+1: phi_k^(s+1) = A^(s) phi_k^(s), renormalized.
DarbouxChain darboux_step(const DarbouxChain& chain);
DarbouxChain build_chain(const Spectrum& base, std::size_t n_steps);

/// Steps beyond this count are numerically unvalidated.
constexpr std::size_t kMaxValidatedSteps = 4;

/// Wronskian of f_0..f_{m-1} at every node given their derivative tables
/// (derivs[i][j] = j-th derivative of f_i, j = 0..m-1).
GridFunction wronskian(const std::vector<std::vector<GridFunction>>& derivs);

/// phi_k^(n) = W[phi_0..phi_{n-1}, phi_k] / W[phi_0..phi_{n-1}], normalized.
/// Nodes at the domain edges where the denominator falls below
/// (1e-12)^n max|W| are set to zero.
GridFunction crum_states(const Spectrum& base, std::size_t n, std::size_t k);

/// D^(n) = 2 (ln|phi_n^(n)|)' of the last stage.
DriftSpec partner_drift(const DarbouxChain& chain);

/// PDF of the n-step partner FPE, n = chain.n_steps():
/// phi_n^(n) sum_{k>=n} c_k phi_k^(n) tau(eps_k - eps_n, t), unit mass.
GridFunction partner_pdf(const DarbouxChain& chain, const std::vector<double>& coeffs, double t,
                         const TemporalRule& temporal = TemporalRule::classical());

} // namespace isofokker
