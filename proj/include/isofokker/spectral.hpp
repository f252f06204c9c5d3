#pragma once

#include <cstddef>
#include <vector>

#include "isofokker/grid.hpp"

namespace isofokker {

/// Drift coefficient D and prepotential W with D = -2 W'. The drift
/// potential is U = 2W. `reliable` marks nodes where D was computed
/// directly; the rest were filled by continuation.
struct DriftSpec {
    GridFunction W;
    GridFunction D;
    Mask reliable;
};

/// Builds a DriftSpec from a drift sample, W = -(1/2) * cumulative_integral(D).
DriftSpec drift_from_coefficient(const GridFunction& D);
/// Builds a DriftSpec from a prepotential sample, D = -2 W'.
DriftSpec drift_from_prepotential(const GridFunction& W);

/// Symmetric tridiagonal second-order discretization of
/// H = -d^2/dx^2 + V with Dirichlet walls at c1 and c2. The matrix acts on
/// the interior nodes 1..n-2.
struct SchrodingerOperator {
    Grid1D grid;
    GridFunction V;
    std::vector<double> diag;
    std::vector<double> offdiag;
};

/// V = W'^2 - W'' by fourth-order differences.
GridFunction potential_direct(const GridFunction& W);

/// Second-order V = W'^2 - W'' taken as the discrete Laplacian of exp(-W)
/// divided by exp(-W). The three-point operator then annihilates exp(-W)
/// exactly, so the discrete spectrum keeps H = A^+ A non-negative.
/// Throws NumericalError on non-finite V.
GridFunction potential_factorized(const GridFunction& W);

SchrodingerOperator build_hamiltonian(const GridFunction& W);
SchrodingerOperator build_hamiltonian_from_potential(const GridFunction& V);
/// H = A^+ A for the drift of a node-free state, W = -ln phi0. End rows treat
/// phi0 as exactly zero on a wall node where it vanishes.
SchrodingerOperator build_hamiltonian_from_ground_state(const GridFunction& phi0);

/// Lowest eigenpairs of H. States are unit-L2 normalized and sign-fixed so
/// that the leftmost significant lobe is positive.
struct Spectrum {
    std::vector<double> energies;
    std::vector<GridFunction> states;

    std::size_t kmax() const { return energies.size() - 1; }
    const Grid1D& grid() const { return states.front().grid(); }
};

/// Lowest kmax+1 eigenpairs: Sturm-count bisection, then inverse iteration.
/// Requires kmax + 1 < n_points / 4.
Spectrum solve_spectrum(const SchrodingerOperator& H, std::size_t kmax);

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& offdiag, double x);

/// D = 2 (ln phi0)', W = -ln phi0. Rejects phi0 with interior sign changes.
DriftSpec ground_state_to_drift(const GridFunction& phi0);

/// Flips the sign of f so its leftmost lobe above 1e-3 max|f| is positive.
GridFunction fix_sign(GridFunction f);
/// Scales f to unit L2 norm and fixes its sign.
GridFunction normalize_state(const GridFunction& f);

/// max |(-phi'' + V phi - e phi)| / max|phi| using the operator's own stencil.
double eigen_residual(const SchrodingerOperator& H, const GridFunction& phi, double energy);

} // namespace isofokker
