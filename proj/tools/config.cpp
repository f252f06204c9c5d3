#include "config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "isofokker/grid.hpp"

namespace isofokker::cli {

namespace {

double to_double(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw std::invalid_argument(what + ": '" + s + "' is not a finite number");
    }
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

} // namespace

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), "list entry"));
    return out;
}

GridSpec parse_grid(const std::string& text) {
    std::stringstream ss(text);
    std::string a, b, c, extra;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c, ':') || std::getline(ss, extra, ':')) {
        throw std::invalid_argument("--grid: expected c1:c2:n, got '" + text + "'");
    }
    const double n = to_double(trim(c), "--grid n");
    if (n < 3 || n != std::floor(n) || n > 1e7) throw std::invalid_argument("--grid: n must be an integer >= 3");
    GridSpec g{to_double(trim(a), "--grid c1"), to_double(trim(b), "--grid c2"), static_cast<std::size_t>(n)};
    // Grid1D enforces c1 < c2 and odd n with its own message.
    Grid1D check(g.c1, g.c2, g.n);
    return g;
}

InitialCondition parse_ic(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    InitialCondition ic;
    if (kind == "gaussian") {
        const auto v = parse_list(rest);
        if (v.size() != 2) throw std::invalid_argument("--ic: expected gaussian:mean,variance");
        if (!(v[1] > 0.0)) throw std::invalid_argument("--ic: gaussian variance must be positive");
        ic.kind = InitialCondition::Kind::Gaussian;
        ic.mean = v[0];
        ic.variance = v[1];
    } else if (kind == "delta") {
        const auto v = parse_list(rest);
        if (v.size() != 1) throw std::invalid_argument("--ic: expected delta:x0");
        ic.kind = InitialCondition::Kind::Gaussian;
        ic.mean = v[0];
        ic.variance = kDeltaVariance;
    } else if (kind == "csv") {
        if (rest.empty()) throw std::invalid_argument("--ic: expected csv:path");
        ic.kind = InitialCondition::Kind::Csv;
        ic.path = rest;
    } else {
        throw std::invalid_argument("--ic: unknown initial condition '" + kind + "' (use gaussian:mean,var, delta:x0 or csv:path)");
    }
    return ic;
}

GridSpec default_grid(const std::string& scenario) {
    if (scenario == "box") return {0.0, 1.0, 2001};
    if (scenario == "schwarzschild") return {0.1, 3.0, 2001};
    return {-12.0, 12.0, 2001};
}

RunConfig resolve(const std::string& command, const RawOptions& raw) {
    RunConfig cfg;
    cfg.command = command;
    cfg.scenario = raw.scenario;
    if (raw.scenario != "ou" && raw.scenario != "box" && raw.scenario != "custom" && raw.scenario != "schwarzschild") {
        throw std::invalid_argument("--scenario: unknown scenario '" + raw.scenario +
                                    "' (choose ou, box, custom or schwarzschild)");
    }
    if (!(raw.gamma > 0.0)) throw std::invalid_argument("--gamma: OU stiffness must be positive");
    cfg.gamma = raw.gamma;
    if (raw.scenario == "custom" && raw.drift_csv.empty()) {
        throw std::invalid_argument("--drift-csv: the custom scenario needs a two-column (x, D) CSV file");
    }
    cfg.drift_csv = raw.drift_csv;
    cfg.grid = raw.grid.empty() ? default_grid(raw.scenario) : parse_grid(raw.grid);
    // --rmin/--rmax override the grid ends, keeping the node count.
    if (raw.rmin || raw.rmax) {
        if (raw.scenario != "schwarzschild") throw std::invalid_argument("--rmin/--rmax: only valid with --scenario schwarzschild");
        if (raw.rmin) cfg.grid.c1 = *raw.rmin;
        if (raw.rmax) cfg.grid.c2 = *raw.rmax;
        if (!(cfg.grid.c1 > 0.0 && cfg.grid.c1 < cfg.grid.c2)) {
            throw std::invalid_argument("--rmin/--rmax: need 0 < rmin < rmax");
        }
    }
    const int kmax = raw.kmax.value_or(command == "evolve" ? 8 : 7);
    if (kmax < 1) throw std::invalid_argument("--kmax: must be at least 1");
    cfg.kmax = static_cast<std::size_t>(kmax);
    if (4 * (cfg.kmax + 1) >= cfg.grid.n) throw std::invalid_argument("--kmax: too large for the grid (need kmax+1 < n/4)");
    if (raw.steps && *raw.steps < 1) throw std::invalid_argument("--steps: must be at least 1");
    cfg.steps = raw.steps;
    cfg.lambdas = parse_list(raw.lambda);
    if (cfg.lambdas.size() > cfg.kmax) throw std::invalid_argument("--lambda: more parameters than levels below kmax");
    for (std::size_t s = 0; s < cfg.lambdas.size(); ++s) {
        const double l = cfg.lambdas[s];
        if (l >= -1.0 && l <= 0.0) {
            std::ostringstream os;
            os << "--lambda: lambda_" << s << " = " << l << " is inadmissible; each lambda must lie outside [-1, 0]";
            throw std::invalid_argument(os.str());
        }
    }
    if (raw.alpha && !(*raw.alpha > 0.0 && *raw.alpha < 1.0)) {
        throw std::invalid_argument("--alpha: fractional order must satisfy 0 < alpha < 1");
    }
    cfg.alpha = raw.alpha;
    cfg.times = parse_list(raw.times);
    for (double t : cfg.times)
        if (!(t >= 0.0)) throw std::invalid_argument("--times: times must be non-negative");
    cfg.ic = parse_ic(raw.ic);
    if (!(raw.temperature > 0.0)) throw std::invalid_argument("--temperature: must be positive");
    cfg.temperature = raw.temperature;
    if (!(raw.zmin <= raw.zmax) || raw.zmax > 0.0) throw std::invalid_argument("--zmin/--zmax: need zmin <= zmax <= 0");
    cfg.zmin = raw.zmin;
    cfg.zmax = raw.zmax;
    if (!(raw.dt > 0.0)) throw std::invalid_argument("--dt: must be positive");
    cfg.dt = raw.dt;
    if (raw.out.empty()) throw std::invalid_argument("--out: output directory must not be empty");
    cfg.out = raw.out;
    cfg.all = raw.all;
    return cfg;
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["command"] = cfg.command;
    j["scenario"] = cfg.scenario;
    j["gamma"] = cfg.gamma;
    j["drift_csv"] = cfg.drift_csv;
    j["grid"] = {{"c1", cfg.grid.c1}, {"c2", cfg.grid.c2}, {"n_points", cfg.grid.n}};
    j["kmax"] = cfg.kmax;
    j["steps"] = cfg.steps ? nlohmann::ordered_json(*cfg.steps) : nlohmann::ordered_json(nullptr);
    j["lambdas"] = cfg.lambdas;
    j["alpha"] = cfg.alpha ? nlohmann::ordered_json(*cfg.alpha) : nlohmann::ordered_json(nullptr);
    j["times"] = cfg.times;
    if (cfg.ic.kind == InitialCondition::Kind::Gaussian) {
        j["ic"] = {{"kind", "gaussian"}, {"mean", cfg.ic.mean}, {"variance", cfg.ic.variance}};
    } else {
        j["ic"] = {{"kind", "csv"}, {"path", cfg.ic.path}};
    }
    j["temperature"] = cfg.temperature;
    j["zmin"] = cfg.zmin;
    j["zmax"] = cfg.zmax;
    j["dt"] = cfg.dt;
    j["out"] = cfg.out;
    j["all"] = cfg.all;
    return j;
}

} // namespace isofokker::cli
