#include "isofokker/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "isofokker/error.hpp"

namespace isofokker {

DriftSpec drift_from_coefficient(const GridFunction& D) {
    GridFunction W = cumulative_integral(D) * -0.5;
    return {std::move(W), D, full_mask(D.grid())};
}

DriftSpec drift_from_prepotential(const GridFunction& W) {
    return {W, derivative(W) * -2.0, full_mask(W.grid())};
}

SchrodingerOperator build_hamiltonian_from_potential(const GridFunction& V) {
    const Grid1D& g = V.grid();
    const std::size_t m = g.size() - 2;
    const double h2 = g.spacing() * g.spacing();
    std::vector<double> diag(m), off(m > 0 ? m - 1 : 0, -1.0 / h2);
    for (std::size_t i = 0; i < m; ++i) diag[i] = 2.0 / h2 + V[i + 1];
    return {g, V, std::move(diag), std::move(off)};
}

GridFunction potential_direct(const GridFunction& W) {
    const GridFunction dW = derivative(W);
    const GridFunction d2W = derivative(dW);
    std::vector<double> v(W.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = dW[i] * dW[i] - d2W[i];
    return GridFunction(W.grid(), std::move(v));
}

GridFunction potential_factorized(const GridFunction& W) {
    // V_i = (phi_{i-1} - 2 phi_i + phi_{i+1}) / (h^2 phi_i) with phi = exp(-W),
    // written with exponent differences so large W never overflows.
    const std::size_t n = W.size();
    const double h2 = W.grid().spacing() * W.grid().spacing();
    std::vector<double> v(n);
    for (std::size_t i = 1; i + 1 < n; ++i)
        v[i] = (std::exp(W[i] - W[i - 1]) - 2.0 + std::exp(W[i] - W[i + 1])) / h2;
    // Wall nodes do not enter the Dirichlet matrix; extrapolate for reporting.
    v[0] = 2.0 * v[1] - v[2];
    v[n - 1] = 2.0 * v[n - 2] - v[n - 3];
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(v[i])) {
            std::ostringstream os;
            os << "build_hamiltonian: non-finite potential at x = " << W.grid().x(i);
            throw NumericalError(os.str());
        }
    }
    return GridFunction(W.grid(), std::move(v));
}

SchrodingerOperator build_hamiltonian(const GridFunction& W) {
    return build_hamiltonian_from_potential(potential_factorized(W));
}

SchrodingerOperator build_hamiltonian_from_ground_state(const GridFunction& phi0) {
    const GridFunction phi = fix_sign(phi0);
    const DriftSpec d = ground_state_to_drift(phi);
    const GridFunction V0 = potential_factorized(d.W);
    std::vector<double> v(V0.values().begin(), V0.values().end());
    const std::size_t n = v.size();
    const double h2 = phi.grid().spacing() * phi.grid().spacing();
    const double floor = kDefaultRelativeFloor * phi.max_abs();
    // The filled W is finite on a wall node where phi0 vanishes; drop that
    // neighbour so the end rows see phi0 = 0 there.
    if (phi[0] <= floor) v[1] = (-2.0 + std::exp(d.W[1] - d.W[2])) / h2;
    if (phi[n - 1] <= floor) v[n - 2] = (std::exp(d.W[n - 2] - d.W[n - 3]) - 2.0) / h2;
    return build_hamiltonian_from_potential(GridFunction(phi.grid(), std::move(v)));
}

std::size_t sturm_count(const std::vector<double>& diag, const std::vector<double>& offdiag, double x) {
    // Pivot floor scaled by the largest coupling so off^2 / pivot stays finite.
    double big = 1.0;
    for (double e : offdiag) big = std::max(big, e * e);
    const double pivmin = std::numeric_limits<double>::min() * big;
    std::size_t count = 0;
    double q = 0.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        q = diag[i] - x - (i > 0 ? offdiag[i - 1] * offdiag[i - 1] / q : 0.0);
        if (std::abs(q) <= pivmin) q = -pivmin;
        if (q < 0) ++count;
    }
    return count;
}

namespace {

double bisect_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off, std::size_t k,
                         double lo, double hi) {
    // Invariant: count(lo) <= k < count(hi).
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(diag, off, mid) > k) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Solves (T - sigma I) y = b for symmetric tridiagonal T by Gaussian
// elimination with partial pivoting. Overwrites b with y.
void shifted_solve(const std::vector<double>& diag, const std::vector<double>& off, double sigma,
                   std::vector<double>& b) {
    const std::size_t m = diag.size();
    // Row i holds entries in columns i, i+1, i+2 after elimination.
    std::vector<double> d(m), du(m, 0.0), du2(m, 0.0), dl(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) d[i] = diag[i] - sigma;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        du[i] = off[i];
        dl[i] = off[i];
    }
    const double eps = std::numeric_limits<double>::epsilon();
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(d[i]) + 2.0 * std::abs(off.empty() ? 0.0 : off[0]));
    const double pivot_floor = eps * scale;

    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (std::abs(d[i]) < pivot_floor) d[i] = pivot_floor;
            const double f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            dl[i] = 0.0;
        } else {
            // Swap rows i and i+1.
            const double f = d[i] / dl[i];
            d[i] = dl[i];
            const double tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            if (i + 2 < m) {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            du[i] = tmp;
            std::swap(b[i], b[i + 1]);
            b[i + 1] -= f * b[i];
        }
    }
    if (std::abs(d[m - 1]) < pivot_floor) d[m - 1] = pivot_floor;

    b[m - 1] /= d[m - 1];
    if (m > 1) b[m - 2] = (b[m - 2] - du[m - 2] * b[m - 1]) / d[m - 2];
    for (std::size_t ii = m - 2; ii-- > 0;) b[ii] = (b[ii] - du[ii] * b[ii + 1] - du2[ii] * b[ii + 2]) / d[ii];
}

double vec_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double tridiag_residual(const std::vector<double>& diag, const std::vector<double>& off, double lambda,
                        const std::vector<double>& v) {
    const std::size_t m = diag.size();
    double r = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double t = (diag[i] - lambda) * v[i];
        if (i > 0) t += off[i - 1] * v[i - 1];
        if (i + 1 < m) t += off[i] * v[i + 1];
        r = std::max(r, std::abs(t));
    }
    return r;
}

// Replaces the tails of an eigenvector (interior indexing) by the three-term
// recurrence run inward from the Dirichlet walls. Inward, the solution that
// decays toward the wall grows, so the recurrence keeps full relative
// accuracy where inverse iteration only controls the normwise residual.
void refine_tails(const std::vector<double>& diag, const std::vector<double>& off, double lambda,
                  std::vector<double>& v) {
    const std::size_t m = v.size();
    if (m < 3) return;
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    const double thr = 1e-4 * vmax;
    std::size_t left = 0;
    while (std::abs(v[left]) < thr) ++left;
    std::size_t right = m - 1;
    while (std::abs(v[right]) < thr) --right;
    constexpr double kRescale = 1e200;

    if (left > 0) {
        std::vector<double> u(left + 1);
        u[0] = 1e-200;
        // Row 0 of (T - lambda) u = 0 with the wall value zero.
        u[1] = -(diag[0] - lambda) * u[0] / off[0];
        for (std::size_t i = 1; i < left; ++i) {
            u[i + 1] = -((diag[i] - lambda) * u[i] + off[i - 1] * u[i - 1]) / off[i];
            if (std::abs(u[i + 1]) > kRescale) {
                for (std::size_t j = 0; j <= i + 1; ++j) u[j] /= kRescale;
            }
        }
        if (u[left] != 0.0) {
            const double scale = v[left] / u[left];
            for (std::size_t i = 0; i < left; ++i) v[i] = u[i] * scale;
        }
    }
    if (right + 1 < m) {
        const std::size_t len = m - right;
        std::vector<double> u(len);  // u[j] holds index m-1-j
        u[0] = 1e-200;
        u[1] = -(diag[m - 1] - lambda) * u[0] / off[m - 2];
        for (std::size_t j = 1; j + 1 < len; ++j) {
            const std::size_t i = m - 1 - j;
            u[j + 1] = -((diag[i] - lambda) * u[j] + off[i] * u[j - 1]) / off[i - 1];
            if (std::abs(u[j + 1]) > kRescale) {
                for (std::size_t q = 0; q <= j + 1; ++q) u[q] /= kRescale;
            }
        }
        if (u[len - 1] != 0.0) {
            const double scale = v[right] / u[len - 1];
            for (std::size_t j = 0; j + 1 < len; ++j) v[m - 1 - j] = u[j] * scale;
        }
    }
}

} // namespace

GridFunction fix_sign(GridFunction f) {
    const double thr = 1e-3 * f.max_abs();
    for (double v : f.values()) {
        if (std::abs(v) >= thr) {
            if (v < 0) f *= -1.0;
            break;
        }
    }
    return f;
}

GridFunction normalize_state(const GridFunction& f) {
    const double n2 = integrate(f * f);
    if (!(n2 > 0.0)) throw NumericalError("normalize_state: zero norm");
    return fix_sign(f * (1.0 / std::sqrt(n2)));
}

Spectrum solve_spectrum(const SchrodingerOperator& H, std::size_t kmax) {
    const std::size_t n = H.grid.size();
    if (4 * (kmax + 1) >= n) {
        std::ostringstream os;
        os << "solve_spectrum: kmax = " << kmax << " too large for " << n << " nodes (need kmax+1 < n/4)";
        throw std::invalid_argument(os.str());
    }
    const auto& diag = H.diag;
    const auto& off = H.offdiag;
    const std::size_t m = diag.size();

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < m; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(off[i - 1]);
        if (i + 1 < m) r += std::abs(off[i]);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    const double pad = 1e-12 * std::max(std::abs(lo), std::abs(hi)) + 1e-300;
    lo -= pad;
    hi += pad;

    Spectrum spec;
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t k = 0; k <= kmax; ++k) {
        const double e = bisect_eigenvalue(diag, off, k, lo, hi);
        spec.energies.push_back(e);

        std::vector<double> v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3 * static_cast<double>(k) + 0.1);
        // Shift slightly off the eigenvalue so the shifted matrix is not exactly singular.
        const double sigma = e + 4.0 * eps * std::max(1.0, std::abs(hi));
        const double tol = 1e3 * eps * std::max(std::abs(hi), 1.0);
        bool converged = false;
        // A fixed minimum of sweeps: the normwise residual test alone stops while
        // neighbouring modes still contaminate the tails at the 1e-8 level.
        for (int it = 0; it < 10; ++it) {
            shifted_solve(diag, off, sigma, v);
            const double nv = vec_norm(v);
            if (!(nv > 0.0) || !std::isfinite(nv)) throw NumericalError("solve_spectrum: inverse iteration broke down");
            for (double& x : v) x /= nv;
            if (it >= 3 && tridiag_residual(diag, off, e, v) <= tol) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            std::ostringstream os;
            os << "solve_spectrum: inverse iteration did not converge for k = " << k;
            throw NumericalError(os.str());
        }
        refine_tails(diag, off, e, v);
        std::vector<double> full(n, 0.0);
        std::copy(v.begin(), v.end(), full.begin() + 1);
        spec.states.push_back(normalize_state(GridFunction(H.grid, std::move(full))));
    }
    return spec;
}

DriftSpec ground_state_to_drift(const GridFunction& phi0) {
    const double floor = kDefaultRelativeFloor * phi0.max_abs();
    if (interior_sign_changes(phi0, floor) != 0) throw NumericalError("ground_state_to_drift: ground state has interior zeros");
    const GridFunction phi = fix_sign(phi0);
    LogDerivative ld = log_derivative(phi, floor);
    // Wrong-sign round-off can only sit in the wall layers; treat it as underflow.
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (phi[i] <= 0.0) ld.reliable[i] = false;
    GridFunction D = fill_masked(ld.values, ld.reliable) * 2.0;
    // W from the drift, anchored so that W = -ln phi0 at the maximum of phi0.
    GridFunction W = cumulative_integral(D) * -0.5;
    std::size_t imax = 0;
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (phi[i] > phi[imax]) imax = i;
    const double shift = -std::log(phi[imax]) - W[imax];
    W = W.map([shift](double w) { return w + shift; });
    return {std::move(W), std::move(D), std::move(ld.reliable)};
}

double eigen_residual(const SchrodingerOperator& H, const GridFunction& phi, double energy) {
    const std::size_t n = phi.size();
    const double h2 = H.grid.spacing() * H.grid.spacing();
    double r = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double lap = (phi[i - 1] - 2.0 * phi[i] + phi[i + 1]) / h2;
        r = std::max(r, std::abs(-lap + H.V[i] * phi[i] - energy * phi[i]));
    }
    return r / phi.max_abs();
}

} // namespace isofokker
