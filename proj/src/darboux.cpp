#include "isofokker/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "isofokker/error.hpp"

namespace isofokker {

namespace {

constexpr double kContaminationLimit = 0.05;
// Eigenvector tails are accurate to full relative precision, so operator
// kernels only mask exact zeros (the Dirichlet walls).
constexpr double kKernelRelativeFloor = 1e-280;

// Masked nodes inside the domain, i.e. not part of a band touching c1 or c2.
std::size_t inner_masked(const Mask& reliable) {
    std::size_t first = 0;
    while (first < reliable.size() && !reliable[first]) ++first;
    std::size_t last = reliable.size();
    while (last > first && !reliable[last - 1]) --last;
    std::size_t count = 0;
    for (std::size_t i = first; i < last; ++i)
        if (!reliable[i]) ++count;
    return count;
}

void check_contamination(const Mask& reliable, const char* where) {
    const std::size_t interior = reliable.size() - 2;
    const std::size_t bad = inner_masked(reliable);
    if (static_cast<double>(bad) > kContaminationLimit * static_cast<double>(interior)) {
        std::ostringstream os;
        os << where << ": " << bad << " of " << interior << " interior nodes are masked (limit 5%)";
        throw NumericalError(os.str());
    }
}

} // namespace

FirstOrderKernel kernel_of(const GridFunction& f) {
    if (interior_sign_changes(f, kDefaultRelativeFloor * f.max_abs()) != 0) {
        throw NumericalError("kernel_of: base function has interior zeros");
    }
    const GridFunction pos = fix_sign(f);
    LogDerivative ld = log_derivative(pos, kKernelRelativeFloor * pos.max_abs());
    // Wall-layer round-off may leave a few tiny values of the wrong sign.
    for (std::size_t i = 0; i < pos.size(); ++i)
        if (pos[i] <= 0.0) ld.reliable[i] = false;
    check_contamination(ld.reliable, "kernel_of");
    return {fill_masked(ld.values, ld.reliable), std::move(ld.reliable)};
}

namespace {

GridFunction apply_first_order(const FirstOrderKernel& a, const GridFunction& f, double sign) {
    const GridFunction df = derivative(f);
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i)
        if (a.reliable[i]) out[i] = sign * df[i] - a.g[i] * f[i];
    return GridFunction(f.grid(), std::move(out));
}

} // namespace

GridFunction apply_lowering(const FirstOrderKernel& a, const GridFunction& f) { return apply_first_order(a, f, 1.0); }

GridFunction apply_raising(const FirstOrderKernel& a, const GridFunction& f) { return apply_first_order(a, f, -1.0); }

DarbouxChain::DarbouxChain(Spectrum base) : base_(std::move(base)) {
    if (base_.states.empty()) throw std::invalid_argument("DarbouxChain: empty spectrum");
    stages_.push_back(base_.states);
}

const GridFunction& DarbouxChain::state(std::size_t s, std::size_t k) const {
    if (s > n_steps() || k < s || k > kmax()) {
        std::ostringstream os;
        os << "DarbouxChain: no state phi_" << k << "^(" << s << ")";
        throw std::out_of_range(os.str());
    }
    return stages_[s][k - s];
}

double DarbouxChain::stage_energy(std::size_t s, std::size_t k) const {
    if (s > n_steps() || k < s || k > kmax()) throw std::out_of_range("DarbouxChain: stage energy out of range");
    return base_.energies[k] - base_.energies[s];
}

const FirstOrderKernel& DarbouxChain::lowering(std::size_t s) const {
    if (s >= kernels_.size()) throw std::out_of_range("DarbouxChain: lowering operator not built");
    return kernels_[s];
}

Spectrum DarbouxChain::stage_spectrum(std::size_t s) const {
    if (s > n_steps()) throw std::out_of_range("DarbouxChain: stage out of range");
    Spectrum out;
    for (std::size_t k = s; k <= kmax(); ++k) {
        out.energies.push_back(stage_energy(s, k));
        out.states.push_back(state(s, k));
    }
    return out;
}

DarbouxChain darboux_step(const DarbouxChain& chain) {
    const std::size_t s = chain.n_steps();
    if (s + 1 > chain.kmax()) {
        std::ostringstream os;
        os << "darboux_step: stage " << s << " has no excited state left (kmax = " << chain.kmax() << ")";
        throw std::invalid_argument(os.str());
    }
    DarbouxChain next = chain;
    next.kernels_.push_back(kernel_of(chain.state(s, s)));
    const FirstOrderKernel& a = next.kernels_.back();
    std::vector<GridFunction> stage;
    stage.reserve(chain.kmax() - s);
    for (std::size_t k = s + 1; k <= chain.kmax(); ++k) stage.push_back(normalize_state(apply_lowering(a, chain.state(s, k))));
    next.stages_.push_back(std::move(stage));
    return next;
}

DarbouxChain build_chain(const Spectrum& base, std::size_t n_steps) {
    DarbouxChain chain(base);
    for (std::size_t s = 0; s < n_steps; ++s) chain = darboux_step(chain);
    return chain;
}

namespace {

// Determinant by Gaussian elimination with partial pivoting; `a` is destroyed.
double determinant(std::vector<double>& a, std::size_t m) {
    double det = 1.0;
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < m; ++r)
            if (std::abs(a[r * m + c]) > std::abs(a[p * m + c])) p = r;
        if (a[p * m + c] == 0.0) return 0.0;
        if (p != c) {
            for (std::size_t j = 0; j < m; ++j) std::swap(a[p * m + j], a[c * m + j]);
            det = -det;
        }
        const double piv = a[c * m + c];
        det *= piv;
        for (std::size_t r = c + 1; r < m; ++r) {
            const double f = a[r * m + c] / piv;
            if (f == 0.0) continue;
            for (std::size_t j = c; j < m; ++j) a[r * m + j] -= f * a[c * m + j];
        }
    }
    return det;
}

// f, f', ..., f^(order)
std::vector<GridFunction> derivative_table(const GridFunction& f, std::size_t order) {
    std::vector<GridFunction> out{f};
    for (std::size_t j = 0; j < order; ++j) out.push_back(derivative(out.back()));
    return out;
}

} // namespace

GridFunction wronskian(const std::vector<std::vector<GridFunction>>& derivs) {
    const std::size_t m = derivs.size();
    if (m == 0) throw std::invalid_argument("wronskian: no functions");
    const Grid1D& grid = derivs[0][0].grid();
    std::vector<double> out(grid.size());
    std::vector<double> a(m * m);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) a[r * m + c] = derivs[c][r][i];
        out[i] = determinant(a, m);
    }
    return GridFunction(grid, std::move(out));
}

GridFunction crum_states(const Spectrum& base, std::size_t n, std::size_t k) {
    if (n == 0) throw std::invalid_argument("crum_states: n must be at least 1");
    if (k < n || k > base.kmax()) {
        std::ostringstream os;
        os << "crum_states: need n <= k <= kmax, got n = " << n << ", k = " << k;
        throw std::invalid_argument(os.str());
    }
    std::vector<std::vector<GridFunction>> den_table, num_table;
    for (std::size_t i = 0; i < n; ++i) {
        auto t = derivative_table(base.states[i], n);
        num_table.push_back(t);
        t.pop_back();
        den_table.push_back(std::move(t));
    }
    num_table.push_back(derivative_table(base.states[k], n));
    const GridFunction num = wronskian(num_table);
    const GridFunction den = wronskian(den_table);

    const double floor = std::pow(kDefaultRelativeFloor, static_cast<double>(n)) * den.max_abs();
    Mask reliable(den.size());
    std::vector<double> ratio(den.size(), 0.0);
    for (std::size_t i = 0; i < den.size(); ++i) {
        reliable[i] = std::abs(den[i]) >= floor;
        if (reliable[i]) ratio[i] = num[i] / den[i];
    }
    check_contamination(reliable, "crum_states");
    // Edge bands stay zero; inner masked nodes (below the 5% limit) are interpolated.
    GridFunction r(den.grid(), std::move(ratio));
    if (inner_masked(reliable) > 0) {
        const auto first = static_cast<std::size_t>(std::find(reliable.begin(), reliable.end(), true) - reliable.begin());
        const auto last = reliable.size() - 1 -
                          static_cast<std::size_t>(std::find(reliable.rbegin(), reliable.rend(), true) - reliable.rbegin());
        const GridFunction filled = fill_masked(r, reliable);
        std::vector<double> v(filled.values().begin(), filled.values().end());
        for (std::size_t i = 0; i < v.size(); ++i)
            if (i < first || i > last) v[i] = 0.0;
        r = GridFunction(den.grid(), std::move(v));
    }
    return normalize_state(r);
}

DriftSpec partner_drift(const DarbouxChain& chain) {
    const std::size_t n = chain.n_steps();
    const GridFunction& ground = chain.state(n, n);
    if (interior_sign_changes(ground, 1e-8 * ground.max_abs()) != 0) {
        throw NumericalError("partner_drift: stage ground state has nodes (construction error)");
    }
    return ground_state_to_drift(ground);
}

GridFunction partner_pdf(const DarbouxChain& chain, const std::vector<double>& coeffs, double t,
                         const TemporalRule& temporal) {
    if (!(t >= 0.0)) throw std::invalid_argument("partner_pdf: t must be non-negative");
    const std::size_t n = chain.n_steps();
    if (coeffs.size() > chain.kmax() + 1) throw std::invalid_argument("partner_pdf: more coefficients than states");
    FpeSolution sol{chain.stage_spectrum(n), {}, temporal};
    bool any = false;
    for (std::size_t k = n; k < coeffs.size(); ++k) {
        sol.coeffs.push_back(coeffs[k]);
        any = any || coeffs[k] != 0.0;
    }
    if (!any) throw std::invalid_argument("partner_pdf: all coefficients c_k with k >= n vanish; no mass to normalize");
    // Fractional partners are assembled mode by mode; no A-operator acts on an evolved P.
    GridFunction p = evolve_pdf(sol, t);
    const double mass = integrate(p);
    if (!(std::abs(mass) > 0.0)) throw NumericalError("partner_pdf: partner density has zero mass");
    return p * (1.0 / mass);
}

} // namespace isofokker
