#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "isofokker/darboux.hpp"
#include "isofokker/error.hpp"
#include "isofokker/evolve.hpp"
#include "isofokker/io.hpp"
#include "isofokker/isospectral.hpp"
#include "isofokker/mittag.hpp"
#include "isofokker/oracle.hpp"
#include "isofokker/scenarios.hpp"
#include "isofokker/spectral.hpp"

namespace isofokker::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
// e^{-W} at a wall above this fraction of its peak means the drift does not
// confine the density inside the domain.
constexpr double kConfinementRatio = 1e-6;

class Report {
public:
    Json results = Json::object();

    void check(const std::string& name, double value, double tolerance) {
        add(name, value, tolerance, std::isfinite(value) && value <= tolerance);
    }
    void check_range(const std::string& name, double value, double lo, double hi) {
        add(name, value, Json::array({lo, hi}), value >= lo && value <= hi);
    }
    void check_below(const std::string& name, double value, double bound) {
        add(name, value, bound, value < bound);
    }
    void merge(const Report& other, const std::string& prefix) {
        for (const auto& c : other.checks_) {
            Json copy = c;
            copy["name"] = prefix + c["name"].get<std::string>();
            checks_.push_back(copy);
        }
        ok_ = ok_ && other.ok_;
    }

    bool ok() const { return ok_; }
    const Json& checks() const { return checks_; }

private:
    void add(const std::string& name, double value, Json tolerance, bool pass) {
        checks_.push_back({{"name", name}, {"value", value}, {"tolerance", std::move(tolerance)}, {"pass", pass}});
        ok_ = ok_ && pass;
    }

    Json checks_ = Json::array();
    bool ok_ = true;
};

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

std::string out_path(const RunConfig& cfg, const std::string& ext) {
    std::filesystem::create_directories(cfg.out);
    return (std::filesystem::path(cfg.out) / (cfg.command + ext)).string();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f) throw std::runtime_error("error while writing " + path);
}

int finish(const RunConfig& cfg, const Report& report) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = cfg.command;
    j["config"] = to_json(cfg);
    j["results"] = report.results;
    j["checks"] = report.checks();
    j["status"] = report.ok() ? "pass" : "fail";
    const std::string path = out_path(cfg, ".json");
    write_text(path, j.dump(2) + "\n");
    for (const auto& c : report.checks()) {
        if (!c["pass"].get<bool>()) std::cerr << "FAIL " << c["name"].get<std::string>() << ": " << c["value"] << "\n";
    }
    std::cout << cfg.command << ": " << (report.ok() ? "pass" : "FAIL") << " (" << path << ")\n";
    return report.ok() ? kOk : kVerificationFailed;
}

std::string tag(const std::string& prefix, double v) { return prefix + format_number(v); }

// Scenario, grid and operator -------------------------------------------------

struct Problem {
    Grid1D grid;
    std::optional<DriftSpec> drift;  // none for the box
    SchrodingerOperator H;
    double wall_ratio;
    bool confining;

    // Densities pinned by hard walls rather than by the drift.
    bool walls() const { return !drift || !confining; }
};

double wall_ratio(const GridFunction& W) {
    double wmin = W[0];
    for (double w : W.values()) wmin = std::min(wmin, w);
    return std::max(std::exp(-(W[0] - wmin)), std::exp(-(W[W.size() - 1] - wmin)));
}

Problem make_problem(const RunConfig& cfg) {
    const Grid1D cfg_grid(cfg.grid.c1, cfg.grid.c2, cfg.grid.n);
    if (cfg.scenario == "box") return {cfg_grid, std::nullopt, box_hamiltonian(cfg_grid), 0.0, true};
    DriftSpec drift = [&] {
        if (cfg.scenario == "ou") return ou_scenario(cfg_grid, cfg.gamma);
        if (cfg.scenario == "schwarzschild") return schwarzschild_potential(cfg.temperature, cfg_grid).drift;
        return custom_drift(cfg.drift_csv);
    }();
    const Grid1D grid = drift.D.grid();
    const double ratio = wall_ratio(drift.W);
    SchrodingerOperator H = build_hamiltonian(drift.W);
    return {grid, std::move(drift), std::move(H), ratio, ratio <= kConfinementRatio};
}

Json confinement_json(const Problem& p) {
    return {{"confining", p.confining}, {"wall_ratio", p.wall_ratio}, {"dirichlet_walls", true}};
}

void warn_confinement(const RunConfig& cfg, const Problem& p) {
    if (p.confining) return;
    std::ostringstream os;
    os << cfg.scenario << ": the drift does not confine the density (e^-W at a wall is " << p.wall_ratio
       << " of its peak); spectral results describe the problem with Dirichlet walls at " << p.grid.c1() << " and "
       << p.grid.c2();
    warn(os.str());
}

Spectrum solve(const Problem& p, std::size_t kmax) { return solve_spectrum(p.H, kmax); }

// Energies shifted so the ground level is exactly zero: the FPE zero mode.
Spectrum fpe_basis(Spectrum s) {
    const double e0 = s.energies[0];
    for (double& e : s.energies) e -= e0;
    return s;
}

GridFunction base_drift(const Problem& p, const Spectrum& basis) {
    return p.drift ? p.drift->D : ground_state_to_drift(basis.states[0]).D;
}

// |x| <= 8 at unit stiffness, scaled with the Gaussian width.
double ou_window(double gamma) { return 8.0 / std::sqrt(gamma); }

// Spectrum of the drift whose ground state is phi0.
std::vector<double> resolved_energies(const GridFunction& phi0, std::size_t kmax) {
    return solve_spectrum(build_hamiltonian_from_ground_state(phi0), kmax).energies;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

// The top two levels carry the largest stencil error and are only reported.
std::size_t checked_levels(std::size_t n) { return n > 2 ? n - 2 : n; }

std::vector<double> head(const std::vector<double>& v) {
    return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(checked_levels(v.size()))};
}

// Re-solved against expected energies for k <= kmax - 2, 5e-3 absolute. Hard-wall problems put
// 1/x^2 layers into every partner potential, where the three-point stencil
// loses accuracy in proportion to the level, so they are compared relative
// to max(1, eps_k).
void spectrum_check(Report& r, const std::string& name, const std::vector<double>& got, const std::vector<double>& ref,
                    bool walls) {
    const std::size_t count = checked_levels(std::min(got.size(), ref.size()));
    if (!walls) {
        r.check(name, max_abs_diff(head(got), head(ref)), 5e-3);
        return;
    }
    double m = 0.0;
    for (std::size_t k = 0; k < count; ++k) m = std::max(m, std::abs(got[k] - ref[k]) / std::max(1.0, std::abs(ref[k])));
    r.check(name + "_relative", m, 5e-3);
}

double orthonormality_defect(const Spectrum& s) {
    double m = 0.0;
    for (std::size_t j = 0; j < s.states.size(); ++j)
        for (std::size_t k = j; k < s.states.size(); ++k)
            m = std::max(m, std::abs(inner(s.states[j], s.states[k]) - (j == k ? 1.0 : 0.0)));
    return m;
}

GridFunction initial_density(const RunConfig& cfg, const Grid1D& grid) {
    GridFunction P0 = [&] {
        if (cfg.ic.kind == InitialCondition::Kind::Gaussian) return gaussian_density(grid, cfg.ic.mean, cfg.ic.variance);
        const CsvTable t = read_csv(cfg.ic.path);
        if (t.columns.size() != 2) throw std::invalid_argument("--ic " + cfg.ic.path + ": expected two columns (x, P)");
        const Grid1D g = grid_from_nodes(t.columns[0]);
        const double tol = 1e-9 * grid.spacing();
        if (g.size() != grid.size() || std::abs(g.c1() - grid.c1()) > tol || std::abs(g.c2() - grid.c2()) > tol) {
            throw std::invalid_argument("--ic " + cfg.ic.path + ": x column does not match the scenario grid");
        }
        for (double v : t.columns[1]) {
            if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("--ic " + cfg.ic.path + ": densities must be finite and non-negative");
        }
        return GridFunction(grid, t.columns[1]);
    }();
    const double mass = integrate(P0);
    if (!(mass > 0.0)) throw std::invalid_argument("--ic: initial density has no mass on the grid");
    if (std::abs(mass - 1.0) > 1e-6) {
        std::ostringstream os;
        os << "initial density has mass " << mass << " on the grid; renormalized to 1";
        warn(os.str());
    }
    return P0 * (1.0 / mass);
}

TemporalRule temporal_rule(const RunConfig& cfg) {
    return cfg.alpha ? TemporalRule::fractional(*cfg.alpha) : TemporalRule::classical();
}

Json moments_json(const GridFunction& P, double t) {
    const auto m = moments(P, {0, 1, 2});
    double pmin = P[0];
    for (double v : P.values()) pmin = std::min(pmin, v);
    return {{"t", t}, {"mass_error", std::abs(m[0] - 1.0)}, {"mean", m[1]}, {"variance", m[2] - m[1] * m[1]},
            {"min_value", pmin}};
}

double relative_error(double value, double ref) {
    return std::abs(ref) > 1e-8 ? std::abs(value - ref) / std::abs(ref) : std::abs(value - ref);
}

IsoParams iso_params(const std::vector<double>& lambdas) { return IsoParams{lambdas}; }

// Subcommands -------------------------------------------------------------------

int cmd_spectrum(const RunConfig& cfg) {
    const Problem p = make_problem(cfg);
    warn_confinement(cfg, p);
    const Spectrum s = solve(p, cfg.kmax);
    Report r;
    r.results["confinement"] = confinement_json(p);
    r.results["eigenvalues"] = s.energies;
    r.results["orthonormality_defect"] = orthonormality_defect(s);
    r.check("ground_energy_nonnegative", -s.energies[0], 1e-8);
    r.check("orthonormality", orthonormality_defect(s), 1e-3);
    if (cfg.scenario == "ou" || cfg.scenario == "box") {
        std::vector<double> ref;
        for (std::size_t k = 0; k <= cfg.kmax; ++k) ref.push_back(cfg.scenario == "ou" ? ou_energy(cfg.gamma, k) : box_energy(p.grid, k));
        r.results["reference"] = ref;
        r.results["max_abs_diff"] = max_abs_diff(s.energies, ref);
        if (cfg.scenario == "ou") {
            r.check("eigenvalues_vs_closed_form", max_abs_diff(s.energies, ref), 1e-3);
        } else {
            double rel = 0.0;
            for (std::size_t k = 0; k < ref.size(); ++k) rel = std::max(rel, relative_error(s.energies[k], ref[k]));
            r.check("eigenvalues_vs_closed_form_relative", rel, 1e-4);
        }
    }
    std::vector<CsvColumn> cols;
    if (p.drift) cols.push_back({"W", p.drift->W});
    cols.push_back({"V", p.H.V});
    for (std::size_t k = 0; k <= cfg.kmax; ++k) cols.push_back({"phi_" + std::to_string(k), s.states[k]});
    write_csv(out_path(cfg, ".csv"), p.grid, cols);
    return finish(cfg, r);
}

int cmd_darboux(const RunConfig& cfg) {
    const std::size_t n = static_cast<std::size_t>(cfg.steps.value_or(1));
    if (n >= cfg.kmax) throw std::invalid_argument("--steps: must be below --kmax so the partner keeps a bound state");
    if (n > kMaxValidatedSteps) {
        warn("more than " + std::to_string(kMaxValidatedSteps) + " Darboux steps are numerically unvalidated");
    }
    const Problem p = make_problem(cfg);
    warn_confinement(cfg, p);
    const Spectrum basis = fpe_basis(solve(p, cfg.kmax));
    const DarbouxChain chain = build_chain(basis, n);
    Report r;
    r.results["confinement"] = confinement_json(p);
    std::vector<CsvColumn> cols;
    Json stages = Json::array();
    std::vector<GridFunction> drifts;
    for (std::size_t s = 0; s <= n; ++s) {
        const DriftSpec d = s == 0 ? DriftSpec{GridFunction::zeros(p.grid), base_drift(p, basis), full_mask(p.grid)}
                                   : ground_state_to_drift(chain.state(s, s));
        drifts.push_back(d.D);
        cols.push_back({"D_" + std::to_string(s), d.D});
        Json st;
        st["stage"] = s;
        std::vector<double> energies;
        for (std::size_t k = s; k <= cfg.kmax; ++k) energies.push_back(chain.stage_energy(s, k));
        st["energies"] = energies;
        if (s > 0) {
            const auto re = resolved_energies(chain.state(s, s), cfg.kmax - s);
            st["resolved_energies"] = re;
            st["max_abs_diff"] = max_abs_diff(re, energies);
            spectrum_check(r, "stage_" + std::to_string(s) + "_resolved_spectrum", re, energies, p.walls());
        }
        if (s > 0 && s <= 3) {
            double m = 0.0;
            for (std::size_t k = s; k <= cfg.kmax; ++k) m = std::max(m, sup_distance(crum_states(basis, s, k), chain.state(s, k)));
            st["crum_vs_iterated"] = m;
            r.check("stage_" + std::to_string(s) + "_crum_vs_iterated", m, 1e-3);
        }
        stages.push_back(st);
    }
    if (cfg.scenario == "ou") {
        const double window = ou_window(cfg.gamma);
        const double lo = std::max(-window, p.grid.c1()), hi = std::min(window, p.grid.c2());
        const double d1 = sup_distance(drifts[1], drifts[0], full_mask(p.grid), lo, hi);
        r.results["shape_invariance"] = d1;
        r.check("ou_shape_invariance_step_1", d1, 1e-3);
    }
    r.results["stages"] = stages;
    for (std::size_t s = 0; s <= n; ++s)
        for (std::size_t k = s; k <= cfg.kmax; ++k)
            cols.push_back({"phi_" + std::to_string(s) + "_" + std::to_string(k), chain.state(s, k)});
    write_csv(out_path(cfg, ".csv"), p.grid, cols);
    return finish(cfg, r);
}

int cmd_deform(const RunConfig& cfg) {
    if (cfg.lambdas.empty()) throw std::invalid_argument("deform: --lambda is required (comma list lambda_0,...,lambda_{n-1})");
    const std::size_t n = cfg.lambdas.size();
    if (n >= cfg.kmax) throw std::invalid_argument("--lambda: need fewer parameters than --kmax");
    const Problem p = make_problem(cfg);
    warn_confinement(cfg, p);
    const Spectrum basis = fpe_basis(solve(p, cfg.kmax));
    const IsoDeformation def = reinstate(build_chain(basis, n), iso_params(cfg.lambdas));
    const DriftSpec& dd = deformed_drift(def);
    const auto re = resolved_energies(def.basis.states[0], cfg.kmax);
    Report r;
    r.results["confinement"] = confinement_json(p);
    r.results["eigenvalues"] = basis.energies;
    r.results["deformed_eigenvalues"] = re;
    r.results["compared_levels"] = checked_levels(re.size());
    r.results["max_abs_eig_diff"] = max_abs_diff(head(re), head(basis.energies));
    r.results["max_abs_eig_diff_all_levels"] = max_abs_diff(re, basis.energies);
    r.results["orthonormality_defect"] = orthonormality_defect(def.basis);
    spectrum_check(r, "max_abs_eig_diff", re, basis.energies, p.walls());
    std::vector<CsvColumn> cols{{"D", base_drift(p, basis)}, {"D_hat", dd.D}, {"P_hat", def.basis.states[0] * def.basis.states[0]}};
    for (std::size_t s = 0; s < n; ++s) cols.push_back({"inv_Phi_" + std::to_string(s), def.dressed_inverse[s]});
    write_csv(out_path(cfg, ".csv"), p.grid, cols);
    return finish(cfg, r);
}

int cmd_evolve(const RunConfig& cfg) {
    if (cfg.times.empty()) throw std::invalid_argument("--times: need at least one time");
    const Problem p = make_problem(cfg);
    warn_confinement(cfg, p);
    const Spectrum basis = fpe_basis(solve(p, cfg.kmax));
    const GridFunction P0 = initial_density(cfg, p.grid);
    const FpeSolution sol{basis, project(P0, basis), temporal_rule(cfg)};
    std::optional<IsoDeformation> def;
    if (!cfg.lambdas.empty()) {
        if (cfg.lambdas.size() >= cfg.kmax) throw std::invalid_argument("--lambda: need fewer parameters than --kmax");
        def = reinstate(build_chain(basis, cfg.lambdas.size()), iso_params(cfg.lambdas));
    }

    Report r;
    r.results["confinement"] = confinement_json(p);
    r.results["coefficients"] = sol.coeffs;
    r.results["truncation_residual"] = truncation_residual(P0, sol);
    Json mom = Json::array(), dmom = Json::array();
    std::vector<CsvColumn> cols{{"P0", P0}};
    const bool ou_closed_form = cfg.scenario == "ou" && cfg.ic.kind == InitialCondition::Kind::Gaussian;
    for (double t : cfg.times) {
        const GridFunction P = evolve_pdf(sol, t);
        cols.push_back({tag("P_t=", t), P});
        Json m = moments_json(P, t);
        r.check(tag("mass_t=", t), m["mass_error"].get<double>(), 1e-6);
        if (ou_closed_form && t > 0.0) {
            // <x> and <x^2> only involve the modes k <= 2, eps_k = gamma k.
            const double g = cfg.gamma, mu = cfg.ic.mean, v = cfg.ic.variance;
            const double mean = mu * sol.temporal.factor(g, t);
            const double second = 1.0 / g + (v + mu * mu - 1.0 / g) * sol.temporal.factor(2.0 * g, t);
            m["reference_mean"] = mean;
            m["reference_variance"] = second - mean * mean;
            r.check(tag("ou_mean_t=", t), relative_error(m["mean"].get<double>(), mean), 1e-3);
            r.check(tag("ou_variance_t=", t), relative_error(m["variance"].get<double>(), second - mean * mean), 1e-3);
        }
        mom.push_back(m);
        if (def) {
            const GridFunction Pd = iso_pdf(*def, sol.coeffs, t, sol.temporal);
            cols.push_back({tag("P_hat_t=", t), Pd});
            Json dm = moments_json(Pd, t);
            r.check(tag("deformed_mass_t=", t), dm["mass_error"].get<double>(), 1e-6);
            dmom.push_back(dm);
        }
    }
    r.results["moments"] = mom;
    if (def) {
        r.results["deformed_moments"] = dmom;
        cols.push_back({"D_hat", deformed_drift(*def).D});
    }
    write_csv(out_path(cfg, ".csv"), p.grid, cols);
    return finish(cfg, r);
}

int cmd_ml(const RunConfig& cfg) {
    if (!cfg.alpha) throw std::invalid_argument("ml: --alpha is required");
    const int count = cfg.steps.value_or(101);
    if (count < 2) throw std::invalid_argument("--steps: ml needs at least 2 points");
    if (!(cfg.zmin < cfg.zmax)) throw std::invalid_argument("--zmin/--zmax: ml needs zmin < zmax");
    const double a = *cfg.alpha;
    std::ostringstream csv;
    csv << "z,E\n";
    std::vector<double> z(static_cast<std::size_t>(count)), E(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = i + 1 == z.size() ? cfg.zmax : cfg.zmin + (cfg.zmax - cfg.zmin) * static_cast<double>(i) / (count - 1);
        E[i] = mittag_leffler(a, z[i]);
        csv << format_number(z[i]) << "," << format_number(E[i]) << "\n";
    }
    write_text(out_path(cfg, ".csv"), csv.str());
    Report r;
    r.results["alpha"] = a;
    r.results["points"] = count;
    r.results["series_switch"] = ml_detail::series_switch(a);
    // E_a(-x) is completely monotone for 0 < a <= 1: in (0, 1] and increasing in z.
    double worst_step = 0.0, lo = E[0], hi = E[0];
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (i > 0) worst_step = std::max(worst_step, E[i - 1] - E[i]);
        lo = std::min(lo, E[i]);
        hi = std::max(hi, E[i]);
    }
    r.check("monotone_in_z", worst_step, 1e-12);
    r.check_range("min_value", lo, 0.0, 1.0);
    r.check_range("max_value", hi, 0.0, 1.0 + 1e-15);
    if (cfg.zmax == 0.0) r.check("E_at_zero", std::abs(E.back() - 1.0), 1e-15);
    return finish(cfg, r);
}

int cmd_blackhole(const RunConfig& cfg) {
    if (cfg.scenario != "schwarzschild") throw std::invalid_argument("blackhole: only --scenario schwarzschild is supported");
    const Grid1D grid(cfg.grid.c1, cfg.grid.c2, cfg.grid.n);
    const double T = cfg.temperature;
    const ThermalPotential tp = schwarzschild_potential(T, grid);
    const GridFunction Uq = thermal_potential_by_quadrature(T, grid);
    const GridFunction Th(grid, [](double r) { return hawking_temperature(r); });
    const GridFunction S(grid, [](double r) { return horizon_entropy(r); });
    const GridFunction dU = derivative(tp.U);
    const GridFunction dU_ref(grid, [T](double r) { return (hawking_temperature(r) - T) * 2.0 * std::numbers::pi * r; });
    const GridFunction d2U = derivative(dU);

    Report r;
    const double ratio = wall_ratio(tp.drift.W);
    r.results["confinement"] = {{"confining", ratio <= kConfinementRatio}, {"wall_ratio", ratio}, {"concave", true}};
    if (ratio > kConfinementRatio) {
        warn("schwarzschild: U is concave (U'' = -2 pi T), so the drift is not confining; any deformation below "
             "uses Dirichlet walls at rmin and rmax");
    }
    const double r_eq = 1.0 / (4.0 * std::numbers::pi * T);
    r.results["temperature"] = T;
    r.results["equilibrium_radius"] = r_eq;
    r.results["U_at_equilibrium"] = schwarzschild_u(T, r_eq);
    r.check("U_quadrature", sup_distance(tp.U, Uq), 1e-6);
    r.check("dU_equals_(T_h-T)dS", sup_distance(dU, dU_ref), 1e-6);
    double curv = 0.0;
    for (double v : d2U.values()) curv = std::max(curv, std::abs(v + 2.0 * std::numbers::pi * T));
    r.check("U_curvature", curv, 1e-6);

    std::vector<CsvColumn> cols{{"U", tp.U}, {"U_quadrature", Uq}, {"W", tp.drift.W}, {"D", tp.drift.D}, {"T_h", Th}, {"S", S}};
    if (!cfg.lambdas.empty()) {
        if (cfg.lambdas.size() >= cfg.kmax) throw std::invalid_argument("--lambda: need fewer parameters than --kmax");
        const Spectrum basis = fpe_basis(solve_spectrum(build_hamiltonian(tp.drift.W), cfg.kmax));
        const IsoDeformation def = reinstate(build_chain(basis, cfg.lambdas.size()), iso_params(cfg.lambdas));
        const DriftSpec& dd = deformed_drift(def);
        const auto re = resolved_energies(def.basis.states[0], cfg.kmax);
        r.results["eigenvalues"] = basis.energies;
        r.results["deformed_eigenvalues"] = re;
        r.results["max_abs_eig_diff"] = max_abs_diff(re, basis.energies);
        spectrum_check(r, "max_abs_eig_diff", re, basis.energies, true);
        cols.push_back({"U_hat", dd.W * 2.0});
        cols.push_back({"D_hat", dd.D});
    }
    write_csv(out_path(cfg, ".csv"), grid, cols);
    return finish(cfg, r);
}

// verify --------------------------------------------------------------------

double evolve_time(const RunConfig& cfg) {
    double t = 0.0;
    for (double v : cfg.times) t = std::max(t, v);
    return t > 0.0 ? t : 1.0;
}

Report scenario_suite(const RunConfig& cfg) {
    Report r;
    const Problem p = make_problem(cfg);
    const std::size_t kmax = cfg.kmax;
    const Spectrum raw = solve(p, kmax);
    const Spectrum basis = fpe_basis(raw);
    r.results["confinement"] = confinement_json(p);
    r.results["eigenvalues"] = raw.energies;
    r.check("ground_energy_nonnegative", -raw.energies[0], 1e-8);
    r.check("orthonormality", orthonormality_defect(raw), 1e-3);

    if (cfg.scenario == "ou") {
        std::vector<double> ref;
        for (std::size_t k = 0; k <= kmax; ++k) ref.push_back(ou_energy(cfg.gamma, k));
        r.check("eigenvalues_vs_closed_form", max_abs_diff(raw.energies, ref), 1e-3);
    } else if (cfg.scenario == "box") {
        double rel = 0.0;
        for (std::size_t k = 0; k <= kmax; ++k) rel = std::max(rel, relative_error(raw.energies[k], box_energy(p.grid, k)));
        r.check("eigenvalues_vs_closed_form_relative", rel, 1e-4);
    } else if (cfg.scenario == "schwarzschild") {
        const ThermalPotential tp = schwarzschild_potential(cfg.temperature, p.grid);
        r.check("U_quadrature", sup_distance(tp.U, thermal_potential_by_quadrature(cfg.temperature, p.grid)), 1e-6);
        r.results["U_at_1"] = schwarzschild_u(cfg.temperature, 1.0);
    }

    // Partner and deformation spectra.
    const DarbouxChain chain1 = build_chain(basis, 1);
    const DriftSpec partner = partner_drift(chain1);
    std::vector<double> shifted;
    for (std::size_t k = 1; k <= kmax; ++k) shifted.push_back(chain1.stage_energy(1, k));
    spectrum_check(r, "partner_resolved_spectrum", resolved_energies(chain1.state(1, 1), kmax - 1), shifted, p.walls());

    std::vector<double> lambdas = cfg.lambdas;
    // Multi-parameter dressing is only validated away from hard walls.
    if (lambdas.empty()) lambdas = kmax >= 3 && !p.walls() ? std::vector<double>{0.5, 0.5} : std::vector<double>{0.5};
    const IsoDeformation def = reinstate(build_chain(basis, lambdas.size()), iso_params(lambdas));
    spectrum_check(r, "isospectral_resolved_spectrum", resolved_energies(def.basis.states[0], kmax), basis.energies, p.walls());
    r.results["lambdas"] = lambdas;

    if (cfg.scenario == "ou") {
        const GridFunction& D = p.drift->D;
        const double window = ou_window(cfg.gamma);
        const double lo = std::max(-window, p.grid.c1()), hi = std::min(window, p.grid.c2());
        r.check("ou_shape_invariance", sup_distance(partner.D, D, full_mask(p.grid), lo, hi), 1e-3);
        double crum = 0.0;
        const DarbouxChain chain3 = build_chain(basis, std::min<std::size_t>(3, kmax - 1));
        for (std::size_t n = 1; n <= chain3.n_steps(); ++n)
            for (std::size_t k = n; k <= kmax; ++k) crum = std::max(crum, sup_distance(crum_states(basis, n, k), chain3.state(n, k)));
        r.check("crum_vs_iterated", crum, 1e-3);
        const double d3 = sup_distance(reinstate(chain1, {{1e3}}).drift.D, D, full_mask(p.grid), lo, hi);
        const double d6 = sup_distance(reinstate(chain1, {{1e6}}).drift.D, D, full_mask(p.grid), lo, hi);
        r.results["lambda_limit"] = {{"1e3", d3}, {"1e6", d6}};
        r.check("lambda_1e6_recovers_drift", d6, 1e-3);
        r.check_below("lambda_limit_monotone", d6, d3);
    }

    if (!p.confining || !p.drift) {
        r.results["evolution_checks"] = p.drift ? "skipped: drift is not confining" : "skipped: no finite drift at the walls";
        return r;
    }

    const double t = evolve_time(cfg);
    const GridFunction P0 = initial_density(cfg, p.grid);
    const FpeSolution sol{basis, project(P0, basis)};
    const CnConfig cn{cfg.dt, t, Boundary::ZeroFlux};
    r.results["truncation_residual"] = truncation_residual(P0, sol);

    const GridFunction spec = evolve_pdf(sol, t);
    const GridFunction cn0 = cn_evolve(*p.drift, P0, cn);
    r.check("spectral_vs_cn_base", sup_distance(spec, cn0), 5e-3);
    r.check("mass_classical", std::abs(integrate(spec) - 1.0), 1e-6);
    r.check("mass_cn", std::abs(integrate(cn0) - 1.0), 1e-6);

    const GridFunction part0 = partner_pdf(chain1, sol.coeffs, 0.0);
    r.check("spectral_vs_cn_partner", sup_distance(partner_pdf(chain1, sol.coeffs, t), cn_evolve(partner, part0, cn)), 5e-3);

    const IsoDeformation def1 = reinstate(chain1, {{lambdas.front()}});
    const GridFunction iso0 = iso_pdf(def1, sol.coeffs, 0.0);
    r.check("spectral_vs_cn_deformed", sup_distance(iso_pdf(def1, sol.coeffs, t), cn_evolve(def1.drift, iso0, cn)), 5e-3);

    const double alpha = cfg.alpha.value_or(0.5);
    const GridFunction frac = evolve_pdf({basis, sol.coeffs, TemporalRule::fractional(alpha)}, t);
    r.check("mass_fractional", std::abs(integrate(frac) - 1.0), 1e-6);
    const GridFunction near = evolve_pdf({basis, sol.coeffs, TemporalRule::fractional(0.999)}, t);
    r.check("alpha_0.999_vs_classical", sup_distance(near, spec), 5e-3);

    if (cfg.scenario == "ou" && cfg.ic.kind == InitialCondition::Kind::Gaussian) {
        const double g = cfg.gamma, mu = cfg.ic.mean, v = cfg.ic.variance;
        double worst = 0.0;
        for (double tt : {0.25, 0.5, 1.0}) {
            const auto m = moments(evolve_pdf(sol, tt), {1, 2});
            const double mean = mu * std::exp(-g * tt);
            const double var = 1.0 / g + (v - 1.0 / g) * std::exp(-2.0 * g * tt);
            worst = std::max({worst, relative_error(m[0], mean), relative_error(m[1] - m[0] * m[0], var)});
        }
        r.check("ou_closed_form_moments", worst, 1e-3);
    }
    return r;
}

Report temporal_suite() {
    Report r;
    r.check("E_1(-1)", std::abs(mittag_leffler(1.0, -1.0) - std::exp(-1.0)), 1e-10);
    r.check("E_1/2(-1)", std::abs(mittag_leffler(0.5, -1.0) - std::exp(1.0) * std::erfc(1.0)), 1e-8);
    double overlap = 0.0;
    for (double a : {0.5, 0.75, 0.9, 0.999})
        for (int i = 0; i <= 20; ++i) {
            const double z = -4.0 - 0.1 * i;
            overlap = std::max(overlap, std::abs(ml_detail::series(a, z) - ml_detail::integral(a, z)));
        }
    r.check("branch_overlap", overlap, 1e-9);
    const double g1 = gl_residual(0.5, 1.0, 1e-3, 1.0), g2 = gl_residual(0.5, 1.0, 5e-4, 1.0);
    r.check_range("gl_halving_ratio", g2 / g1, 0.4, 0.6);
    r.check("gl_classical_limit", std::abs(gl_residual(0.999, 1.0, 1e-3, 1.0) - classical_residual(1.0, 1e-3, 1.0)), 1e-3);
    r.check("fractional_zero_mode", std::abs(ml_relaxation(0.5, 0.0, 1.0) - 1.0), 1e-15);
    return r;
}

RunConfig suite_config(const RunConfig& base, const std::string& scenario, double gamma) {
    RunConfig c = base;
    c.scenario = scenario;
    c.gamma = gamma;
    c.grid = default_grid(scenario);
    c.lambdas.clear();
    return c;
}

int cmd_verify(const RunConfig& cfg) {
    Report r;
    std::vector<std::pair<std::string, RunConfig>> suites;
    if (cfg.all) {
        suites.emplace_back("ou.", suite_config(cfg, "ou", 1.0));
        suites.emplace_back("ou_gamma2.", suite_config(cfg, "ou", 2.0));
        suites.emplace_back("box.", suite_config(cfg, "box", 1.0));
        suites.emplace_back("schwarzschild.", suite_config(cfg, "schwarzschild", 1.0));
        if (cfg.scenario == "custom") suites.emplace_back("custom.", cfg);
    } else {
        suites.emplace_back(cfg.scenario + ".", cfg);
    }
    // Suites are independent pure computations.
    std::vector<std::future<Report>> jobs;
    for (const auto& [name, c] : suites) jobs.push_back(std::async(std::launch::async, scenario_suite, c));
    Json per = Json::object();
    const Report temporal = temporal_suite();
    r.merge(temporal, "temporal.");
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const Report s = jobs[i].get();
        const std::string& name = suites[i].first;
        per[name.substr(0, name.size() - 1)] = s.results;
        r.merge(s, name);
    }
    r.results["suites"] = per;
    return finish(cfg, r);
}

} // namespace

int run(const RunConfig& cfg) {
    if (cfg.command == "spectrum") return cmd_spectrum(cfg);
    if (cfg.command == "darboux") return cmd_darboux(cfg);
    if (cfg.command == "deform") return cmd_deform(cfg);
    if (cfg.command == "evolve") return cmd_evolve(cfg);
    if (cfg.command == "ml") return cmd_ml(cfg);
    if (cfg.command == "blackhole") return cmd_blackhole(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

} // namespace isofokker::cli
