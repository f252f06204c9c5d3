#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "isofokker/darboux.hpp"
#include "isofokker/evolve.hpp"
#include "isofokker/isospectral.hpp"
#include "isofokker/oracle.hpp"
#include "isofokker/scenarios.hpp"
#include "isofokker/spectral.hpp"

using namespace isofokker;

namespace {

const Grid1D kLine(-12.0, 12.0, 2001);

const Spectrum& ou() {
    static const Spectrum s = solve_spectrum(build_hamiltonian(ou_scenario(kLine, 1.0).W), 7);
    return s;
}

const DarbouxChain& chain(std::size_t n) {
    static const DarbouxChain c1 = build_chain(ou(), 1), c2 = build_chain(ou(), 2);
    return n == 1 ? c1 : c2;
}

// Closed forms for n = 1 on the OU ground state phi0^2 = exp(-x^2/2)/sqrt(2 pi).
double rho(double x) { return std::exp(-x * x / 2) / std::sqrt(2 * std::numbers::pi); }
double i0(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

GridFunction drift_sample(const Grid1D& g, double lambda) {
    return GridFunction(g, [lambda](double x) { return -x - 2 * rho(x) / (lambda + i0(x)); });
}

std::vector<double> resolved(const IsoDeformation& d) {
    return solve_spectrum(build_hamiltonian_from_ground_state(d.basis.states[0]), 7).energies;
}

}  // namespace

TEST_CASE("admissibility excludes the closed interval [-1, 0]") {
    for (double bad : {0.0, -1.0, -0.5, -1e-9, std::numeric_limits<double>::quiet_NaN(),
                       std::numeric_limits<double>::infinity()})
        CHECK_THROWS_AS(check_admissible(0, bad, 1.0), std::invalid_argument);
    for (double ok : {1e-9, 0.5, -1.0000001, -3.0, 1e6}) CHECK_NOTHROW(check_admissible(0, ok, 1.0));
    CHECK_THROWS_AS(virtual_state(chain(1), 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(virtual_state(chain(1), 0, -1.0), std::invalid_argument);
    CHECK_THROWS_WITH_AS(reinstate(chain(1), {{-0.5}}), doctest::Contains("inadmissible"), std::invalid_argument);
}

TEST_CASE("virtual state of the OU ground level") {
    const auto v = virtual_state(chain(1), 0, 0.5);
    CHECK(v.I[kLine.size() - 1] == doctest::Approx(1.0).epsilon(1e-8));
    const std::size_t mid = kLine.nearest(0.0);
    CHECK(v.I[mid] == doctest::Approx(0.5).epsilon(1e-8));
    // Phi_0(0) = (0.5 + I_0(0)) / phi_0(0) = 1 / phi_0(0)
    CHECK(1.0 / v.inverse[mid] == doctest::Approx(1.0 / ou().states[0][mid]).epsilon(1e-8));
    // independent quadrature oracle for I_0
    double err = 0.0;
    for (std::size_t i = 0; i < kLine.size(); ++i) err = std::max(err, std::abs(v.I[i] - i0(kLine.x(i))));
    CHECK(err < 1e-5);
}

TEST_CASE("A A+ annihilates the virtual state") {
    // A+ Phi_0 = -phi_0, so A A+ Phi_0 = -A phi_0 = 0. The two terms of
    // A+ Phi_0 grow like exp(x^2/4) and cancel; keep to |x| <= 3.
    const auto v = virtual_state(chain(1), 0, 0.5);
    const std::size_t lo = kLine.nearest(-3.0), hi = kLine.nearest(3.0);
    const Grid1D g(kLine.x(lo), kLine.x(hi), hi - lo + 1);
    std::vector<double> phi, Phi, gk;
    for (std::size_t i = lo; i <= hi; ++i) {
        phi.push_back(ou().states[0][i]);
        Phi.push_back(1.0 / v.inverse[i]);
        gk.push_back(chain(1).lowering(0).g[i]);
    }
    const FirstOrderKernel a{GridFunction(g, gk), full_mask(g)};
    const GridFunction p(g, phi);
    const auto raised = apply_raising(a, GridFunction(g, Phi));
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(raised[i] / p[i] + 1.0));
    CHECK(err < 1e-4);
    const auto aa = apply_lowering(a, raised);
    // skip the one-sided stencils at the cut ends of the window
    double worst = 0.0;
    for (std::size_t i = 10; i + 10 < g.size(); ++i) worst = std::max(worst, std::abs(aa[i]));
    CHECK(worst <= 1e-5 * raised.max_abs());
}

TEST_CASE("one-parameter deformation against the closed form") {
    const auto d = reinstate(chain(1), {{0.5}});
    REQUIRE(d.n() == 1);
    // ground state proportional to phi_0 / (I_0 + 0.5)
    const GridFunction ground(kLine, [](double x) { return std::sqrt(rho(x)) / (0.5 + i0(x)); });
    CHECK(sup_distance(d.basis.states[0], normalize_state(ground)) < 1e-4);
    CHECK(sup_distance(deformed_drift(d).D, drift_sample(kLine, 0.5), deformed_drift(d).reliable, -8, 8) < 1e-4);
    // D_hat = D - 2 (ln(I_0 + lambda))'
    const auto lnI = cumulative_integral(ou().states[0] * ou().states[0]).map([](double v) { return std::log(v + 0.5); });
    const auto alt = GridFunction(kLine, [](double x) { return -x; }) - 2.0 * derivative(lnI);
    CHECK(sup_distance(deformed_drift(d).D, alt, deformed_drift(d).reliable, -8, 8) < 1e-4);
}

TEST_CASE("deformation breaks parity") {
    const auto& D = reinstate(chain(1), {{0.5}}).drift.D;
    double asym = 0.0;
    for (std::size_t i = 0; i < kLine.size(); ++i) asym = std::max(asym, std::abs(D[i] + D[kLine.size() - 1 - i]));
    CHECK(asym > 0.1);
}

TEST_CASE("large lambda recovers the original drift monotonically") {
    const auto minus_x = GridFunction(kLine, [](double x) { return -x; });
    const auto far = reinstate(chain(1), {{1e6}});
    const auto near = reinstate(chain(1), {{1e3}});
    const double e6 = sup_distance(far.drift.D, minus_x, far.drift.reliable, -8, 8);
    const double e3 = sup_distance(near.drift.D, minus_x, near.drift.reliable, -8, 8);
    CHECK(e6 <= 1e-3);
    CHECK(e3 > e6);
    const auto both = reinstate(chain(2), {{1e6, 1e6}});
    for (std::size_t k = 0; k <= 5; ++k)
        CHECK(std::min(sup_distance(both.basis.states[k], ou().states[k]),
                       sup_distance(both.basis.states[k], ou().states[k] * -1.0)) < 1e-3);
}

TEST_CASE("B_0 annihilates the deformed ground state") {
    for (const auto& p : {IsoParams{{0.5}}, IsoParams{{0.5, 0.5}}}) {
        const auto d = reinstate(chain(p.lambdas.size()), p);
        const auto& g0 = d.basis.states[0];
        CHECK(apply_lowering(d.b_kernels[0], g0).max_abs() <= 1e-5 * g0.max_abs());
    }
}

TEST_CASE("isospectrality for several admissible parameters") {
    const std::vector<IsoParams> cases{{{0.5}}, {{-1.5}}, {{3.0}}, {{0.5, 0.5}}, {{2.0, 0.25}}, {{-2.0, 4.0}}};
    for (const auto& p : cases) {
        CAPTURE(p.lambdas);
        const auto d = reinstate(chain(p.lambdas.size()), p);
        const auto e = resolved(d);
        for (std::size_t k = 0; k + 2 <= 7; ++k) CHECK(std::abs(e[k] - ou().energies[k]) <= 5e-3);
        for (std::size_t k = 0; k <= 7; ++k)
            CHECK(interior_sign_changes(d.basis.states[k], 1e-8 * d.basis.states[k].max_abs()) == k);
    }
}

TEST_CASE("deformed basis is orthonormal on a fine grid") {
    // O(h^2) leakage between the stencil eigenvectors and the fourth-order
    // A/B operators; N = 4001 keeps it under 1e-4.
    const Grid1D fine(-12.0, 12.0, 4001);
    const auto base = solve_spectrum(build_hamiltonian(ou_scenario(fine, 1.0).W), 7);
    const auto d = reinstate(build_chain(base, 2), {{0.5, 0.5}});
    for (std::size_t j = 0; j <= 7; ++j)
        for (std::size_t k = j; k <= 7; ++k)
            CHECK(std::abs(inner(d.basis.states[j], d.basis.states[k]) - (j == k ? 1.0 : 0.0)) <= 1e-4);
}

TEST_CASE("deformed densities") {
    const auto d = reinstate(chain(1), {{0.5}});
    const auto stationary = d.basis.states[0] * d.basis.states[0];
    CHECK(sup_distance(iso_pdf(d, {1.0}, 0.0), stationary) < 1e-12);
    CHECK(sup_distance(iso_pdf(d, {1.0}, 5.0), stationary) < 1e-12);

    const auto c = project(gaussian_density(kLine, 2.0, 0.5), ou());
    CHECK(integrate(iso_pdf(d, c, 0.3)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sup_distance(iso_pdf(d, c, 40.0), stationary) < 1e-10);
    CHECK(integrate(iso_pdf(d, c, 1.0, TemporalRule::fractional(0.5))) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(iso_pdf(d, std::vector<double>(9, 0.1), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(iso_pdf(d, {}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(iso_pdf(d, c, -0.1), std::invalid_argument);
}

TEST_CASE("deformed density matches Crank-Nicolson under the deformed drift") {
    const auto d = reinstate(chain(1), {{0.5}});
    const auto c = project(gaussian_density(kLine, 0.5, 1.0), ou());
    const auto start = iso_pdf(d, c, 0.0);
    const auto cn = cn_evolve(d.drift, start, {.dt = 1e-3, .t_end = 1.0});
    CHECK(sup_distance(iso_pdf(d, c, 1.0), cn) <= 5e-3);
}

TEST_CASE("reinstate errors") {
    CHECK_THROWS_AS(reinstate(chain(1), {{}}), std::invalid_argument);
    CHECK_THROWS_AS(reinstate(chain(1), {{0.5, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(reinstate(chain(2), {{0.5, -0.25}}), std::invalid_argument);
}
