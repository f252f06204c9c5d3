#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isofokker/evolve.hpp"
#include "isofokker/oracle.hpp"
#include "isofokker/scenarios.hpp"

using namespace isofokker;

namespace {

const Grid1D kLine(-12.0, 12.0, 2001);

GridFunction normal(const Grid1D& g, double mean, double var) {
    return GridFunction(g, [=](double x) {
        return std::exp(-(x - mean) * (x - mean) / (2 * var)) / std::sqrt(2 * std::numbers::pi * var);
    });
}

}  // namespace

TEST_CASE("stationary density is a fixed point") {
    const auto drift = ou_scenario(kLine, 1.0);
    const auto P0 = normal(kLine, 0.0, 1.0);
    const auto P = cn_evolve(drift, P0, {.dt = 1e-3, .t_end = 1.0});
    CHECK(sup_distance(P, P0) <= 1e-6);
}

TEST_CASE("OU transition density") {
    const auto drift = ou_scenario(kLine, 1.0);
    const auto P = cn_evolve(drift, normal(kLine, 2.0, 0.5), {.dt = 1e-3, .t_end = 0.5});
    const auto exact = normal(kLine, 2 * std::exp(-0.5), 1 + (0.5 - 1) * std::exp(-1.0));
    CHECK(sup_distance(P, exact) <= 1e-3);
    CHECK(std::abs(integrate(P) - 1.0) <= 1e-8);
}

TEST_CASE("stiffer OU keeps variance 1/gamma") {
    const auto drift = ou_scenario(kLine, 2.0);
    const auto P0 = normal(kLine, 0.0, 0.5);
    CHECK(sup_distance(cn_evolve(drift, P0, {.dt = 1e-3, .t_end = 0.5}), P0) <= 1e-6);
}

TEST_CASE("Dirichlet walls") {
    const auto drift = ou_scenario(kLine, 1.0);
    const auto P = cn_evolve(drift, normal(kLine, 0.0, 1.0), {.dt = 1e-3, .t_end = 0.5, .boundary = Boundary::DirichletZero});
    CHECK(P[0] == 0.0);
    CHECK(P[kLine.size() - 1] == 0.0);
    CHECK(std::abs(integrate(P) - 1.0) <= 1e-8);
}

TEST_CASE("Crank-Nicolson is second order in time") {
    // error of each run measured against its own dt/4 reference
    const Grid1D g(-12.0, 12.0, 801);
    const auto drift = ou_scenario(g, 1.0);
    const auto P0 = normal(g, 2.0, 0.5);
    auto run = [&](double dt) { return cn_evolve(drift, P0, {.dt = dt, .t_end = 0.5}); };
    const double coarse = sup_distance(run(0.02), run(0.005));
    const double fine = sup_distance(run(0.01), run(0.0025));
    const double ratio = coarse / fine;
    CAPTURE(ratio);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
}

TEST_CASE("t_end is hit exactly") {
    const auto drift = ou_scenario(kLine, 1.0);
    const auto P0 = normal(kLine, 2.0, 0.5);
    // 0.0105 is not a multiple of 1e-3
    const auto P = cn_evolve(drift, P0, {.dt = 1e-3, .t_end = 0.0105});
    const auto exact = normal(kLine, 2 * std::exp(-0.0105), 1 + (0.5 - 1) * std::exp(-0.021));
    CHECK(sup_distance(P, exact) <= 1e-4);
    CHECK(sup_distance(cn_evolve(drift, P0, {.dt = 1e-3, .t_end = 0.0}), P0) == 0.0);
}

TEST_CASE("cn_evolve argument checks") {
    const auto drift = ou_scenario(kLine, 1.0);
    const auto P0 = normal(kLine, 0.0, 1.0);
    CHECK_THROWS_AS(cn_evolve(drift, P0, {.dt = 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(cn_evolve(drift, P0, {.dt = 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(cn_evolve(drift, P0, {.dt = 1e-3, .t_end = -1.0}), std::invalid_argument);
    const Grid1D other(-10.0, 10.0, 2001);
    CHECK_THROWS_AS(cn_evolve(drift, normal(other, 0.0, 1.0), {}), std::invalid_argument);
}

TEST_CASE("Grunwald-Letnikov residual") {
    CHECK(gl_residual(0.5, 0.0, 1e-3, 1.0) < 1e-12);

    const double r1 = gl_residual(0.5, 1.0, 1e-3, 1.0);
    const double r2 = gl_residual(0.5, 1.0, 5e-4, 1.0);
    CAPTURE(r1);
    CAPTURE(r2);
    CHECK(r2 / r1 >= 0.4);
    CHECK(r2 / r1 <= 0.6);

    // alpha -> 1 reduces to the classical residual of exp(-t)
    CHECK(std::abs(gl_residual(0.999, 1.0, 1e-3, 1.0) - classical_residual(1.0, 1e-3, 1.0)) <= 1e-3);
    CHECK(classical_residual(1.0, 5e-4, 1.0) / classical_residual(1.0, 1e-3, 1.0) == doctest::Approx(0.5).epsilon(0.05));

    CHECK_THROWS_AS(gl_residual(1.0, 1.0, 1e-3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gl_residual(0.5, -1.0, 1e-3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gl_residual(0.5, 1.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gl_residual(0.5, 1.0, 2.0, 1.0), std::invalid_argument);
}
