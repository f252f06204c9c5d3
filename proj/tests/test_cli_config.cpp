#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <string>

#include "config.hpp"

using namespace isofokker::cli;

namespace {

// message of the invalid_argument thrown by f, or "" if nothing was thrown
template <class F>
std::string message_of(F&& f) {
    try {
        f();
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("parse_grid") {
    const auto g = parse_grid("-5:5:101");
    CHECK(g.c1 == -5.0);
    CHECK(g.c2 == 5.0);
    CHECK(g.n == 101);
    CHECK(parse_grid(" 0 : 1 : 3 ").n == 3);
    for (const char* bad : {"", "0:1", "0:1:3:4", "0:1:100", "1:0:11", "0:1:2.5", "0:1:1", "a:1:11", "0:inf:11"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_grid(bad), std::invalid_argument);
    }
}

TEST_CASE("parse_list") {
    CHECK(parse_list("").empty());
    CHECK(parse_list("  ").empty());
    CHECK(parse_list("0.5") == std::vector<double>{0.5});
    CHECK(parse_list("1, -2.5,3e2") == std::vector<double>{1.0, -2.5, 300.0});
    CHECK_THROWS_AS(parse_list("1,,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_list("1,x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_list("nan"), std::invalid_argument);
}

TEST_CASE("parse_ic") {
    const auto g = parse_ic("gaussian:1.5,0.25");
    CHECK(g.kind == InitialCondition::Kind::Gaussian);
    CHECK(g.mean == 1.5);
    CHECK(g.variance == 0.25);

    const auto d = parse_ic("delta:-1");
    CHECK(d.kind == InitialCondition::Kind::Gaussian);
    CHECK(d.mean == -1.0);
    CHECK(d.variance == kDeltaVariance);

    const auto c = parse_ic("csv:/tmp/p0.csv");
    CHECK(c.kind == InitialCondition::Kind::Csv);
    CHECK(c.path == "/tmp/p0.csv");

    for (const char* bad : {"gaussian:1", "gaussian:1,0", "gaussian:1,-2", "delta:", "delta:1,2", "csv:", "uniform:0,1", ""}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_ic(bad), std::invalid_argument);
    }
}

TEST_CASE("default grids") {
    const auto line = default_grid("ou");
    CHECK(line.c1 == -12.0);
    CHECK(line.c2 == 12.0);
    CHECK(line.n == 2001);
    CHECK(default_grid("custom").c1 == -12.0);
    CHECK(default_grid("box").c1 == 0.0);
    CHECK(default_grid("box").c2 == 1.0);
    CHECK(default_grid("schwarzschild").c1 == 0.1);
    CHECK(default_grid("schwarzschild").c2 == 3.0);
}

TEST_CASE("resolve defaults") {
    const RawOptions raw;
    const auto cfg = resolve("spectrum", raw);
    CHECK(cfg.scenario == "ou");
    CHECK(cfg.kmax == 7);
    CHECK(resolve("evolve", raw).kmax == 8);
    CHECK(cfg.lambdas.empty());
    CHECK_FALSE(cfg.alpha.has_value());
    CHECK_FALSE(cfg.steps.has_value());
    CHECK(cfg.times == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(cfg.ic.mean == 2.0);
    CHECK(cfg.ic.variance == 0.5);
    CHECK(cfg.grid.n == 2001);

    RawOptions k = raw;
    k.kmax = 3;
    CHECK(resolve("evolve", k).kmax == 3);
}

TEST_CASE("resolve rejects bad scenarios and grids") {
    RawOptions raw;
    raw.scenario = "harmonic";
    CHECK(message_of([&] { resolve("spectrum", raw); }).find("unknown scenario") != std::string::npos);

    raw = {};
    raw.gamma = 0.0;
    CHECK_THROWS_AS(resolve("spectrum", raw), std::invalid_argument);

    raw = {};
    raw.scenario = "custom";
    CHECK(message_of([&] { resolve("spectrum", raw); }).find("--drift-csv") != std::string::npos);
    raw.drift_csv = "drift.csv";
    CHECK_NOTHROW(resolve("spectrum", raw));

    raw = {};
    raw.grid = "0:1:11";
    raw.kmax = 1;
    CHECK(resolve("spectrum", raw).grid.n == 11);
    raw.kmax = 2;
    CHECK_THROWS_AS(resolve("spectrum", raw), std::invalid_argument);
    raw.kmax = 0;
    CHECK_THROWS_AS(resolve("spectrum", raw), std::invalid_argument);
}

TEST_CASE("resolve checks lambda admissibility") {
    RawOptions raw;
    for (const char* bad : {"0", "-1", "-0.5", "0.5,-0.25"}) {
        CAPTURE(bad);
        raw.lambda = bad;
        const auto msg = message_of([&] { resolve("deform", raw); });
        CHECK(msg.find("outside [-1, 0]") != std::string::npos);
    }
    for (const char* good : {"0.5", "-1.5", "1e6", "2,0.25", "-2,4"}) {
        CAPTURE(good);
        raw.lambda = good;
        CHECK_NOTHROW(resolve("deform", raw));
    }
    raw.lambda = "1,1,1,1,1,1,1,1";
    CHECK_THROWS_AS(resolve("deform", raw), std::invalid_argument);
}

TEST_CASE("resolve checks alpha, times, dt and the ml window") {
    RawOptions raw;
    for (double a : {0.0, 1.0, -0.2, 1.5}) {
        raw.alpha = a;
        CHECK(message_of([&] { resolve("evolve", raw); }).find("--alpha") != std::string::npos);
    }
    raw.alpha = 0.5;
    CHECK(*resolve("evolve", raw).alpha == 0.5);

    raw = {};
    raw.times = "0,-1";
    CHECK_THROWS_AS(resolve("evolve", raw), std::invalid_argument);

    raw = {};
    raw.dt = 0.0;
    CHECK_THROWS_AS(resolve("verify", raw), std::invalid_argument);

    raw = {};
    raw.zmax = 1.0;
    CHECK_THROWS_AS(resolve("ml", raw), std::invalid_argument);
    raw = {};
    raw.zmin = 0.0;
    raw.zmax = -1.0;
    CHECK_THROWS_AS(resolve("ml", raw), std::invalid_argument);

    raw = {};
    raw.steps = 0;
    CHECK_THROWS_AS(resolve("darboux", raw), std::invalid_argument);
    raw.steps = 2;
    CHECK(*resolve("darboux", raw).steps == 2);

    raw = {};
    raw.out = "";
    CHECK_THROWS_AS(resolve("spectrum", raw), std::invalid_argument);
    raw = {};
    raw.temperature = -1.0;
    CHECK_THROWS_AS(resolve("spectrum", raw), std::invalid_argument);
}

TEST_CASE("rmin and rmax only with schwarzschild") {
    RawOptions raw;
    raw.rmin = 0.2;
    CHECK(message_of([&] { resolve("spectrum", raw); }).find("schwarzschild") != std::string::npos);

    raw.scenario = "schwarzschild";
    raw.rmax = 4.0;
    const auto cfg = resolve("spectrum", raw);
    CHECK(cfg.grid.c1 == 0.2);
    CHECK(cfg.grid.c2 == 4.0);
    CHECK(cfg.grid.n == 2001);

    raw.rmin = 0.0;
    CHECK_THROWS_AS(resolve("spectrum", raw), std::invalid_argument);
    raw.rmin = 5.0;
    CHECK_THROWS_AS(resolve("spectrum", raw), std::invalid_argument);
}

TEST_CASE("config echo as JSON") {
    RawOptions raw;
    raw.gamma = 2.0;
    raw.lambda = "0.5,3";
    raw.alpha = 0.75;
    raw.ic = "delta:1";
    const auto j = to_json(resolve("evolve", raw));
    CHECK(j["command"] == "evolve");
    CHECK(j["gamma"] == 2.0);
    CHECK(j["grid"]["n_points"] == 2001);
    CHECK(j["kmax"] == 8);
    CHECK(j["steps"].is_null());
    CHECK(j["lambdas"] == std::vector<double>{0.5, 3.0});
    CHECK(j["alpha"] == 0.75);
    CHECK(j["ic"]["kind"] == "gaussian");
    CHECK(j["ic"]["variance"] == kDeltaVariance);
    CHECK(j.dump().find("\"gamma\":2.0") != std::string::npos);

    raw.ic = "csv:p.csv";
    CHECK(to_json(resolve("evolve", raw))["ic"]["path"] == "p.csv");
}
