#include "isofokker/isospectral.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "isofokker/error.hpp"

namespace isofokker {

void check_admissible(std::size_t s, double lambda, double i_end) {
    if (!std::isfinite(lambda) || (lambda >= -i_end && lambda <= 0.0)) {
        std::ostringstream os;
        os << "lambda_" << s << " = " << lambda << " is inadmissible: it must lie outside [-I_" << s
           << "(c2), 0] = [" << -i_end << ", 0]";
        throw std::invalid_argument(os.str());
    }
}

VirtualState virtual_state(const DarbouxChain& chain, std::size_t s, double lambda) {
    if (s > chain.n_steps() || s > chain.kmax()) {
        std::ostringstream os;
        os << "virtual_state: stage " << s << " is not available (chain has " << chain.n_steps() << " steps)";
        throw std::invalid_argument(os.str());
    }
    const GridFunction& phi = chain.state(s, s);
    GridFunction I = cumulative_integral(phi * phi);
    check_admissible(s, lambda, I[I.size() - 1]);
    std::vector<double> inv(phi.size());
    for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = phi[i] / (I[i] + lambda);
    return {s, lambda, std::move(I), GridFunction(phi.grid(), std::move(inv))};
}

namespace {

// A dressed virtual state Phi is carried as G = Phi * phi_s^(s). G starts as
// I_s + lambda_s, stays polynomially bounded, and may cross zero at
// intermediate levels; only the fully dressed G has to be node-free.
GridFunction step_lowering(const GridFunction& G, const GridFunction& a_s, const GridFunction& a_j) {
    const GridFunction dG = derivative(G);
    std::vector<double> out(G.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = dG[i] - (a_s[i] + a_j[i]) * G[i];
    GridFunction r(G.grid(), std::move(out));
    return r * (1.0 / r.max_abs());
}

// beta_j = (ln|Phi_j|)' = -b_j
GridFunction step_raising(const GridFunction& G, const GridFunction& a_s, const GridFunction& b_j) {
    const GridFunction dG = derivative(G);
    std::vector<double> out(G.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = -dG[i] + (a_s[i] - b_j[i]) * G[i];
    GridFunction r(G.grid(), std::move(out));
    return r * (1.0 / r.max_abs());
}

// Phi^{-1} = phi / G, rejecting G with zeros where phi is significant.
// G restricted to nodes where |phi| >= fraction * max|phi|.
GridFunction restrict_to(const GridFunction& G, const GridFunction& phi, double fraction) {
    const double pfloor = fraction * phi.max_abs();
    std::vector<double> inside(G.size(), 0.0);
    for (std::size_t i = 0; i < G.size(); ++i)
        if (std::abs(phi[i]) >= pfloor) inside[i] = G[i];
    return GridFunction(G.grid(), std::move(inside));
}

// Phi^{-1} = phi / G, rejecting G with zeros where phi is significant.
GridFunction dressed_reciprocal(const GridFunction& phi, const GridFunction& G, std::size_t level) {
    const GridFunction g_in = restrict_to(G, phi, kDefaultRelativeFloor);
    const double gfloor = kDefaultRelativeFloor * g_in.max_abs();
    if (!(g_in.max_abs() > 0.0) || sign_changes(g_in, gfloor) != 0) {
        std::ostringstream os;
        os << "dressed virtual state Phi_" << level;
        // Zeros confined to where phi_s is below 5% of its peak are the
        // signature of lost accuracy next to a Dirichlet wall.
        const GridFunction core = restrict_to(G, phi, 5e-2);
        if (core.max_abs() > 0.0 && sign_changes(core, kDefaultRelativeFloor * core.max_abs()) == 0) {
            os << " loses accuracy in the wall layer (hard-wall dressing with several parameters is not supported)";
            throw NumericalError(os.str());
        }
        os << " develops an interior zero; this combination of lambdas is inadmissible";
        throw std::invalid_argument(os.str());
    }
    double sign = 1.0;
    for (double v : g_in.values())
        if (std::abs(v) >= gfloor) {
            sign = v > 0.0 ? 1.0 : -1.0;
            break;
        }
    std::vector<double> out(G.size(), 0.0);
    // Wrong-signed G can only occur in the wall layer; Phi^{-1} is dropped there.
    for (std::size_t i = 0; i < out.size(); ++i)
        if (G[i] * sign > 0.0) out[i] = phi[i] / G[i];
    return normalize_state(GridFunction(G.grid(), std::move(out)));
}

} // namespace

IsoDeformation reinstate(const DarbouxChain& chain, const IsoParams& params) {
    const std::size_t n = params.lambdas.size();
    if (n == 0) throw std::invalid_argument("reinstate: no lambdas given");
    if (n > chain.n_steps()) {
        std::ostringstream os;
        os << "reinstate: " << n << " lambdas need a chain of at least " << n << " steps, got " << chain.n_steps();
        throw std::invalid_argument(os.str());
    }
    std::vector<VirtualState> virtuals;
    for (std::size_t s = 0; s < n; ++s) virtuals.push_back(virtual_state(chain, s, params.lambdas[s]));

    const GridFunction zero = GridFunction::zeros(chain.base().grid());
    IsoDeformation out{params, chain, std::vector<GridFunction>(n, zero),
                       std::vector<FirstOrderKernel>(n, FirstOrderKernel{zero, {}}), Spectrum{},
                       DriftSpec{zero, zero, {}}};
    for (std::size_t s = n; s-- > 0;) {
        const GridFunction& a_s = chain.lowering(s).g;
        GridFunction G = virtuals[s].I.map([&](double v) { return v + virtuals[s].lambda; });
        for (std::size_t j = s + 1; j < n; ++j) G = step_lowering(G, a_s, chain.lowering(j).g);
        for (std::size_t j = n; j-- > s + 1;) G = step_raising(G, a_s, out.b_kernels[j].g);
        out.dressed_inverse[s] = dressed_reciprocal(chain.state(s, s), G, s);
        out.b_kernels[s] = kernel_of(out.dressed_inverse[s]);
    }

    auto raise_through = [&](GridFunction f, std::size_t top) {
        for (std::size_t j = top; j-- > 0;) f = apply_raising(out.b_kernels[j], f);
        return normalize_state(f);
    };
    const Spectrum& base = chain.base();
    for (std::size_t k = 0; k <= chain.kmax(); ++k) {
        out.basis.energies.push_back(base.energies[k]);
        if (k < n) {
            out.basis.states.push_back(raise_through(out.dressed_inverse[k], k));
        } else {
            out.basis.states.push_back(raise_through(chain.state(n, k), n));
        }
    }
    out.drift = ground_state_to_drift(out.basis.states.front());
    return out;
}

const DriftSpec& deformed_drift(const IsoDeformation& deformation) { return deformation.drift; }

GridFunction iso_pdf(const IsoDeformation& deformation, const std::vector<double>& coeffs, double t,
                     const TemporalRule& temporal) {
    if (!(t >= 0.0)) throw std::invalid_argument("iso_pdf: t must be non-negative");
    if (coeffs.empty() || coeffs.size() > deformation.basis.states.size()) {
        std::ostringstream os;
        os << "iso_pdf: expected between 1 and " << deformation.basis.states.size() << " coefficients, got "
           << coeffs.size();
        throw std::invalid_argument(os.str());
    }
    const GridFunction p = evolve_pdf(FpeSolution{deformation.basis, coeffs, temporal}, t);
    const double mass = integrate(p);
    if (!(std::abs(mass) > 0.0)) throw NumericalError("iso_pdf: deformed density has zero mass");
    return p * (1.0 / mass);
}

} // namespace isofokker
