#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "isofokker/error.hpp"

using namespace isofokker::cli;

int main(int argc, char** argv) {
    CLI::App app{"isofokker: Darboux-Crum and isospectral partners of 1-D Fokker-Planck equations"};
    app.set_config("--config", "", "INI-style key = value file; command-line flags override it");
    app.require_subcommand(1);

    RawOptions raw;
    CLI::Option* scenario = app.add_option("--scenario", raw.scenario, "ou | box | custom | schwarzschild")->capture_default_str();
    app.add_option("--gamma", raw.gamma, "OU stiffness gamma > 0")->capture_default_str();
    app.add_option("--drift-csv", raw.drift_csv, "two-column (x, D) file for --scenario custom");
    app.add_option("--grid", raw.grid, "c1:c2:n (n odd); default depends on the scenario");
    app.add_option("--kmax", raw.kmax, "highest level kept (default 8 for evolve, 7 otherwise)");
    app.add_option("--steps", raw.steps, "darboux: number of steps; ml: number of z samples");
    // Config files split values on commas; join the pieces back into one list.
    const auto list = [](CLI::Option* o) { o->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join); };
    list(app.add_option("--lambda", raw.lambda, "deformation parameters lambda_0,...,lambda_{n-1}"));
    app.add_option("--alpha", raw.alpha, "fractional order 0 < alpha < 1 (evolve, ml, verify)");
    list(app.add_option("--times", raw.times, "evaluation times t1,t2,...")->capture_default_str());
    list(app.add_option("--ic", raw.ic, "gaussian:mean,var | delta:x0 | csv:path")->capture_default_str());
    app.add_option("--temperature", raw.temperature, "ensemble temperature T > 0")->capture_default_str();
    app.add_option("--rmin", raw.rmin, "smallest horizon radius (schwarzschild)");
    app.add_option("--rmax", raw.rmax, "largest horizon radius (schwarzschild)");
    app.add_option("--zmin", raw.zmin, "ml table start")->capture_default_str();
    app.add_option("--zmax", raw.zmax, "ml table end")->capture_default_str();
    app.add_option("--dt", raw.dt, "Crank-Nicolson step for verify")->capture_default_str();
    app.add_option("--out", raw.out, "output directory")->envname("ISOFOKKER_OUT")->capture_default_str();
    app.add_flag("--all", raw.all, "verify: run every built-in scenario suite");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"spectrum", "eigenvalues and eigenfunctions of H"},
        {"darboux", "n-step Darboux-Crum partner"},
        {"deform", "n-parameter isospectral deformation"},
        {"evolve", "classical or fractional evolution of an initial density"},
        {"ml", "Mittag-Leffler table"},
        {"blackhole", "Schwarzschild thermal potential"},
        {"verify", "oracle suite with a pass/fail report"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kOk : kUsageError;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    if (command == "blackhole" && scenario->count() == 0) raw.scenario = "schwarzschild";
    try {
        return run(resolve(command, raw));
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const isofokker::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kVerificationFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    }
}
