#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isofokker/darboux.hpp"
#include "isofokker/error.hpp"
#include "isofokker/evolve.hpp"
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

const DarbouxChain& ou_chain3() {
    static const DarbouxChain c = build_chain(ou(), 3);
    return c;
}

// Sup distance after aligning the overall sign.
double aligned_distance(const GridFunction& a, const GridFunction& b) {
    return std::min(sup_distance(a, b), sup_distance(a, b * -1.0));
}

GridFunction minus_x(const Grid1D& g) {
    return GridFunction(g, [](double x) { return -x; });
}

}  // namespace

TEST_CASE("one OU step shifts the spectrum down by one") {
    const auto& c = ou_chain3();
    REQUIRE(c.n_steps() == 3);
    for (std::size_t k = 1; k <= 7; ++k) CHECK(std::abs(c.stage_energy(1, k) - double(k - 1)) < 1e-3);
    CHECK(c.stage_energy(2, 2) == 0.0);
}

TEST_CASE("A^(s) annihilates the stage ground state") {
    const auto& c = ou_chain3();
    for (std::size_t s = 0; s <= 2; ++s) {
        const auto& phi = c.state(s, s);
        CHECK(apply_lowering(c.lowering(s), phi).max_abs() <= 1e-5 * phi.max_abs());
    }
}

TEST_CASE("stage states are orthonormal and have k - s nodes") {
    const auto& c = ou_chain3();
    for (std::size_t s = 0; s <= 3; ++s)
        for (std::size_t k = s; k <= 7; ++k) {
            const auto& f = c.state(s, k);
            CHECK(interior_sign_changes(f, 1e-8 * f.max_abs()) == k - s);
            for (std::size_t j = s; j <= k; ++j)
                CHECK(std::abs(inner(c.state(s, j), f) - (j == k ? 1.0 : 0.0)) <= 1e-4);
        }
}

TEST_CASE("OU partner drifts are shape invariant") {
    for (std::size_t n = 1; n <= 2; ++n) {
        const auto d = partner_drift(build_chain(ou(), n));
        CHECK(sup_distance(d.D, minus_x(kLine), d.reliable, -8, 8) <= 1e-3);
    }
}

TEST_CASE("Crum Wronskian") {
    const auto& c = ou_chain3();
    SUBCASE("n = 1 and k = 1 gives the Gaussian again") {
        const GridFunction g(kLine, [](double x) { return std::exp(-x * x / 4) / std::pow(2 * std::numbers::pi, 0.25); });
        CHECK(sup_distance(crum_states(ou(), 1, 1), g) <= 1e-4);
    }
    SUBCASE("n = 1 is the single-step identity phi0 phi_k' - phi0' phi_k over phi0") {
        for (std::size_t k : {1u, 4u, 7u}) {
            const auto& p0 = ou().states[0];
            const auto& pk = ou().states[k];
            const auto w = p0 * derivative(pk) - derivative(p0) * pk;
            std::vector<double> r(kLine.size(), 0.0);
            for (std::size_t i = 0; i < r.size(); ++i)
                if (p0[i] > 1e-12 * p0.max_abs()) r[i] = w[i] / p0[i];
            const GridFunction ratio(kLine, r);
            CHECK(aligned_distance(crum_states(ou(), 1, k), normalize_state(ratio)) <= 1e-4);
        }
    }
    SUBCASE("n = 2, k = 2 matches the iterated steps") {
        CHECK(aligned_distance(crum_states(ou(), 2, 2), c.state(2, 2)) <= 1e-4);
    }
    SUBCASE("agrees with iterated steps for n <= 3") {
        for (std::size_t n = 1; n <= 3; ++n)
            for (std::size_t k = n; k <= 7; ++k) CHECK(aligned_distance(crum_states(ou(), n, k), c.state(n, k)) <= 1e-3);
    }
}

TEST_CASE("Wronskian of two exponentials") {
    // W[e^x, e^{2x}] = e^{3x}
    const Grid1D g(0.0, 1.0, 101);
    const GridFunction a(g, [](double x) { return std::exp(x); });
    const GridFunction b(g, [](double x) { return std::exp(2 * x); });
    const auto w = wronskian({{a, a}, {b, b * 2.0}});
    CHECK(sup_distance(w, GridFunction(g, [](double x) { return std::exp(3 * x); })) < 1e-12);
    CHECK_THROWS_AS(wronskian({}), std::invalid_argument);
}

TEST_CASE("re-solving the partner drift gives the shifted spectrum") {
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto chain = build_chain(ou(), n);
        const auto d = partner_drift(chain);
        CHECK(masked_count(d.reliable) < kLine.size() / 2);
        const auto s = solve_spectrum(build_hamiltonian_from_ground_state(chain.state(n, n)), 7 - n);
        for (std::size_t k = n; k + 2 <= 7; ++k)
            CHECK(std::abs(s.energies[k - n] - (ou().energies[k] - ou().energies[n])) <= 5e-3);
    }
}

TEST_CASE("box: partner drift agrees with the Crum route") {
    const Grid1D g(0.0, 1.0, 2001);
    const auto base = solve_spectrum(box_hamiltonian(g), 7);
    const auto chain = build_chain(base, 1);
    const auto iterated = partner_drift(chain);
    const auto crum = ground_state_to_drift(crum_states(base, 1, 1));
    const auto both = mask_and(iterated.reliable, crum.reliable);
    // D^(1) blows up at the walls; compare on the bulk
    CHECK(sup_distance(iterated.D, crum.D, both, 0.1, 0.9) <= 1e-3);
    // phi_1^(1) is proportional to sin^2(pi x), so D^(1) = 4 pi cot(pi x)
    const GridFunction exact(g, [](double x) { return x > 0 && x < 1 ? 4 * std::numbers::pi / std::tan(std::numbers::pi * x) : 0.0; });
    CHECK(sup_distance(iterated.D, exact, iterated.reliable, 0.1, 0.9) <= 1e-3);
}

TEST_CASE("partner densities") {
    const auto chain = build_chain(ou(), 1);
    std::vector<double> single(8, 0.0);
    single[1] = 1.0;
    const auto stationary = chain.state(1, 1) * chain.state(1, 1);
    for (double t : {0.0, 0.7, 3.0}) CHECK(sup_distance(partner_pdf(chain, single, t), stationary) < 1e-12);

    std::vector<double> mixed{0.3, 1.0, 0.4, -0.2, 0.1, 0.0, 0.0, 0.0};
    CHECK(integrate(partner_pdf(chain, mixed, 0.5)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sup_distance(partner_pdf(chain, mixed, 30.0), stationary) < 1e-10);

    std::vector<double> low{1.0};
    CHECK_THROWS_AS(partner_pdf(chain, low, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(partner_pdf(chain, mixed, -1.0), std::invalid_argument);
}

TEST_CASE("partner density matches Crank-Nicolson under the partner drift") {
    const auto chain = build_chain(ou(), 1);
    const auto d = partner_drift(chain);
    const auto P0 = gaussian_density(kLine, 0.5, 1.0);
    // project onto the partner spectrum: its ground state is phi_1^(1)
    const auto coeffs1 = project(P0, chain.stage_spectrum(1));
    std::vector<double> coeffs(8, 0.0);
    for (std::size_t k = 0; k < coeffs1.size(); ++k) coeffs[k + 1] = coeffs1[k];
    const auto spectral = partner_pdf(chain, coeffs, 1.0);
    const auto cn = cn_evolve(d, P0, {.dt = 1e-3, .t_end = 1.0});
    CHECK(sup_distance(spectral, cn) <= 5e-3);
}

TEST_CASE("chain errors") {
    const auto& c = ou_chain3();
    CHECK_THROWS_AS(c.state(4, 5), std::out_of_range);
    CHECK_THROWS_AS(c.state(2, 1), std::out_of_range);
    CHECK_THROWS_AS(crum_states(ou(), 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(crum_states(ou(), 3, 2), std::invalid_argument);
    const auto small = solve_spectrum(build_hamiltonian(ou_scenario(kLine, 1.0).W), 2);
    CHECK_THROWS_AS(build_chain(small, 3), std::invalid_argument);
}
