#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace isofokker::cli {

struct GridSpec {
    double c1;
    double c2;
    std::size_t n;
};

struct InitialCondition {
    enum class Kind { Gaussian, Csv } kind = Kind::Gaussian;
    double mean = 2.0;
    double variance = 0.5;
    std::string path;
};

/// Raw option values as given on the command line or in the config file.
struct RawOptions {
    std::string scenario = "ou";
    double gamma = 1.0;
    std::string drift_csv;
    std::string grid;
    std::optional<int> kmax;  ///< default: 8 for evolve, 7 otherwise
    std::optional<int> steps;
    std::string lambda;
    std::optional<double> alpha;
    std::string times = "0,0.5,1";
    std::string ic = "gaussian:2,0.5";
    double temperature = 1.0 / (4.0 * 3.14159265358979323846);
    std::optional<double> rmin;
    std::optional<double> rmax;
    double zmin = -10.0;
    double zmax = 0.0;
    double dt = 1e-3;
    std::string out = ".";
    bool all = false;
};

/// Validated configuration shared by every subcommand.
struct RunConfig {
    std::string command;
    std::string scenario;
    double gamma;
    std::string drift_csv;
    GridSpec grid;
    std::size_t kmax;
    std::optional<int> steps;
    std::vector<double> lambdas;
    std::optional<double> alpha;
    std::vector<double> times;
    InitialCondition ic;
    double temperature;
    double zmin;
    double zmax;
    double dt;
    std::string out;
    bool all;
};

/// "c1:c2:n"
GridSpec parse_grid(const std::string& text);
/// "a,b,c"; empty text gives an empty list.
std::vector<double> parse_list(const std::string& text);
/// "gaussian:mean,variance", "delta:x0" (a Gaussian of variance 0.01) or "csv:path"
InitialCondition parse_ic(const std::string& text);

/// Variance of the narrow Gaussian standing in for a delta initial condition.
constexpr double kDeltaVariance = 0.01;

/// Default domain per scenario: [-12, 12] for the full line, [0, 1] for the
/// box and [0.1, 3] in r for Schwarzschild, all with 2001 nodes.
GridSpec default_grid(const std::string& scenario);

/// Parses and checks everything; throws std::invalid_argument with a
/// one-line message naming the offending option.
RunConfig resolve(const std::string& command, const RawOptions& raw);

nlohmann::ordered_json to_json(const RunConfig& cfg);

} // namespace isofokker::cli
