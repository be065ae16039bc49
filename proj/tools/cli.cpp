#include "cli.hpp"

#include "qnls/excited.hpp"
#include "qnls/fiber.hpp"
#include "qnls/ground_state.hpp"
#include "qnls/io.hpp"
#include "qnls/scans.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace qnls {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void apply_override(json& cfg, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must be key=value: " + spec);
    const std::string path = spec.substr(0, eq);
    const std::string raw = spec.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw; // plain string
    }

    json* node = &cfg;
    std::size_t pos = 0;
    while (true) {
        const auto dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot - pos);
        if (key.empty())
            throw ConfigError("override has an empty path segment: " + spec);
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

ModelParams params_from(const json& cfg, bool allow_defaults) {
    if (!cfg.contains("params"))
        throw ConfigError("config invalid: missing required object 'params'");
    const json& p = cfg.at("params");
    ModelParams prm;
    if (!p.contains("N"))
        throw ConfigError("config invalid: params.N is required");
    prm.dimension = p.at("N").get<int>();
    if (p.contains("p"))
        prm.p = p.at("p").get<double>();
    else if (allow_defaults)
        prm.p = mass_critical_exponent(prm.dimension);
    else
        throw ConfigError("config invalid: params.p is required");
    prm.mass = p.value("a", 1.0);
    prm.theta = p.contains("theta") ? p.at("theta").get<double>()
                                    : default_theta(prm.dimension);
    prm.mu = p.value("mu", 0.0);
    if (prm.dimension == 1)
        prm.mu = 0.0;
    return prm;
}

GridConfig grid_from(const json& cfg) {
    GridConfig gc;
    if (cfg.contains("grid")) {
        const json& g = cfg.at("grid");
        gc.r_max = g.value("r_max", 0.0);
        gc.nodes = g.value("nodes", static_cast<std::size_t>(4001));
        if (gc.nodes < 3)
            throw ConfigError("config invalid: grid.nodes must be >= 3");
    }
    return gc;
}

ContinuationSchedule schedule_from(const json& cfg) {
    ContinuationSchedule sched;
    if (!cfg.contains("schedule"))
        return sched;
    const json& s = cfg.at("schedule");
    if (s.contains("mu_values")) {
        sched.mu_values = s.at("mu_values").get<std::vector<double>>();
        double prev = 1.0 + 1e-12;
        for (double mu : sched.mu_values) {
            if (!(mu > 0.0) || !(mu < prev))
                throw ConfigError("config invalid: schedule.mu_values must be "
                                  "strictly decreasing positive reals <= 1");
            prev = mu;
        }
        if (!sched.mu_values.empty() && sched.mu_values.back() > 1e-6)
            throw ConfigError(
                "config invalid: schedule.mu_values must end at or below 1e-6");
    }
    sched.max_iterations_per_stage =
        s.value("max_iterations_per_stage", sched.max_iterations_per_stage);
    sched.step_size = s.value("step_size", sched.step_size);
    sched.energy_stall_tol = s.value("energy_stall_tol", sched.energy_stall_tol);
    sched.rearrange_every = s.value("rearrange_every", sched.rearrange_every);
    sched.restarts = s.value("restarts", sched.restarts);
    sched.precondition = s.value("precondition", sched.precondition);
    return sched;
}

fs::path output_dir_from(const json& cfg) {
    std::string dir;
    if (cfg.contains("output_dir"))
        dir = cfg.at("output_dir").get<std::string>();
    else if (const char* env = std::getenv("QNLS_OUTPUT_DIR"))
        dir = env;
    else
        throw ConfigError(
            "config invalid: output_dir missing and QNLS_OUTPUT_DIR unset");
    fs::create_directories(dir);
    return dir;
}

void emit_profile_outputs(const fs::path& dir, const SolveReport& rep,
                          const ModelParams& prm) {
    write_profile_csv((dir / "profile.csv").string(), rep.profile);
    write_report_json((dir / "report.json").string(), rep, "profile.csv");
    write_xy((dir / "profile.dat").string(), rep.profile.grid().nodes(),
             rep.profile.values());

    // fiber energy of the converged profile against the dilation parameter
    const FiberMasses m = compute_masses(rep.profile, prm.with_mu(0.0));
    std::vector<double> ss, ee;
    for (int k = 0; k <= 160; ++k) {
        const double s = -2.0 + 4.0 * k / 160.0;
        ss.push_back(s);
        ee.push_back(fiber_energy(m, s, prm.with_mu(0.0)));
    }
    write_xy((dir / "fiber.dat").string(), ss, ee);
}

int cmd_qp(const json& cfg, bool quiet) {
    ModelParams prm = params_from(cfg, true);
    validate_params(prm);
    const fs::path dir = output_dir_from(cfg);
    const QpProfile qp = shoot_qp(prm.p, prm.dimension, grid_from(cfg));
    write_profile_csv((dir / "qp_profile.csv").string(), qp.profile);
    write_xy((dir / "profile.dat").string(), qp.profile.grid().nodes(),
             qp.profile.values());
    json j;
    j["p"] = qp.p;
    j["N"] = qp.dimension;
    j["beta"] = qp.initial_height;
    j["support_radius"] = qp.support_radius;
    j["l1_norm"] = qp.l1_norm;
    j["boundary_value"] = qp.boundary_value;
    j["boundary_slope"] = qp.boundary_slope;
    std::ofstream os(dir / "qp.json");
    os << j.dump(2) << '\n';
    if (!quiet)
        std::cout << "qp: beta=" << qp.initial_height << " R=" << qp.support_radius
                  << " |Q|_1=" << qp.l1_norm << '\n';
    return 0;
}

int cmd_astar(const json& cfg, bool quiet) {
    if (!cfg.contains("params") || !cfg.at("params").contains("N"))
        throw ConfigError("config invalid: params.N is required");
    const int n = cfg.at("params").at("N").get<int>();
    if (n < 1)
        throw ConfigError("config invalid: params.N must be >= 1");
    const fs::path dir = output_dir_from(cfg);
    const double astar = a_star(n);
    json j;
    j["N"] = n;
    j["p_star"] = mass_critical_exponent(n);
    j["a_star"] = astar;
    std::ofstream os(dir / "astar.json");
    os << j.dump(2) << '\n';
    if (!quiet)
        std::cout << "a_star(" << n << ") = " << astar << '\n';
    return 0;
}

int cmd_solve(const json& cfg, bool quiet) {
    ModelParams prm = params_from(cfg, false);
    validate_params(prm);
    if (is_mass_critical(prm))
        validate_mass_window(prm, a_star(prm.dimension));
    const fs::path dir = output_dir_from(cfg);
    GridConfig gc = grid_from(cfg);
    if (gc.r_max <= 0.0)
        gc.r_max = 40.0;
    GridPtr grid = make_grid(prm.dimension, gc.r_max, gc.nodes);

    std::optional<RadialField> seed;
    if (cfg.contains("seed_profile"))
        seed = read_profile_csv(cfg.at("seed_profile").get<std::string>(),
                                prm.dimension);

    const SolveReport rep =
        normalized_ground_state(prm, schedule_from(cfg), grid, seed);
    emit_profile_outputs(dir, rep, prm);
    if (!quiet)
        std::cout << "solve: converged=" << (rep.converged ? "true" : "false")
                  << " energy=" << rep.energy << " lambda=" << rep.lambda << '\n';
    return rep.converged ? 0 : 2;
}

int cmd_excited(const json& cfg, bool quiet) {
    ModelParams prm = params_from(cfg, false);
    if (!cfg.contains("k"))
        throw ConfigError("config invalid: command 'excited' requires k");
    const int k = cfg.at("k").get<int>();
    validate_excited(prm, k);
    const fs::path dir = output_dir_from(cfg);
    const SolveReport rep = excited_state(prm, k, grid_from(cfg));
    emit_profile_outputs(dir, rep, prm);
    if (!quiet)
        std::cout << "excited k=" << k
                  << ": converged=" << (rep.converged ? "true" : "false")
                  << " energy=" << rep.energy << " lambda=" << rep.lambda << '\n';
    return rep.converged ? 0 : 2;
}

int cmd_scan_critical(const json& cfg, bool quiet) {
    if (!cfg.contains("params") || !cfg.at("params").contains("N"))
        throw ConfigError("config invalid: params.N is required");
    const int n = cfg.at("params").at("N").get<int>();
    const fs::path dir = output_dir_from(cfg);

    std::vector<double> masses;
    if (cfg.contains("mass_grid")) {
        masses = cfg.at("mass_grid").get<std::vector<double>>();
    } else if (cfg.contains("mass_factors")) {
        const double astar = a_star(n);
        for (double f : cfg.at("mass_factors").get<std::vector<double>>())
            masses.push_back(f * astar);
    } else {
        throw ConfigError("config invalid: command 'scan-critical' requires "
                          "mass_grid or mass_factors");
    }
    const auto rows = critical_fiber_scan(n, masses);
    write_critical_scan_csv((dir / "critical_scan.csv").string(), rows);
    if (!quiet)
        for (const auto& r : rows)
            std::cout << "a=" << r.a << " -> " << r.classification
                      << " (inf=" << r.inf_fiber_energy << ")\n";
    return 0;
}

int cmd_concentrate(const json& cfg, bool quiet) {
    if (!cfg.contains("params") || !cfg.at("params").contains("N"))
        throw ConfigError("config invalid: params.N is required");
    const int n = cfg.at("params").at("N").get<int>();
    if (!cfg.contains("offsets"))
        throw ConfigError("config invalid: command 'concentrate' requires offsets");
    const auto offsets = cfg.at("offsets").get<std::vector<double>>();
    for (double d : offsets)
        if (!(d > 0.0))
            throw ConfigError("config invalid: offsets must be positive");
    const fs::path dir = output_dir_from(cfg);

    ConcentrationOptions opt;
    opt.grid = grid_from(cfg);
    opt.schedule = schedule_from(cfg);
    if (cfg.contains("overrides"))
        opt.rescale_denominator =
            cfg.at("overrides").value("rescale_denominator", 4.0);

    const auto rows = concentration_study(n, offsets, opt);
    write_concentration_csv((dir / "concentration.csv").string(), rows);
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        xs.push_back(r.delta);
        ys.push_back(r.dist_l2);
    }
    write_xy((dir / "concentration.dat").string(), xs, ys);
    bool all_ok = true;
    for (const auto& r : rows) {
        all_ok = all_ok && r.converged;
        if (!quiet)
            std::cout << "delta=" << r.delta << " eps_n=" << r.eps_n
                      << " dist_l2=" << r.dist_l2 << '\n';
    }
    return all_ok ? 0 : 2;
}

int cmd_gncheck(const json& cfg, bool quiet) {
    ModelParams prm = params_from(cfg, false);
    validate_params(prm);
    const fs::path dir = output_dir_from(cfg);
    const int samples = cfg.value("samples", 100);

    const SharpGnConstant& sharp = sharp_gn_constant(prm.p, prm.dimension);
    GridPtr grid = make_grid(prm.dimension, 25.0, 4001);
    std::mt19937 rng(20240901u);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> width(0.5, 2.5);
    double max_ratio = 0.0;
    for (int t = 0; t < samples; ++t) {
        std::vector<double> v(grid->size());
        double c[3], s[3];
        for (int j = 0; j < 3; ++j) {
            c[j] = coeff(rng);
            s[j] = width(rng);
        }
        if (std::abs(c[0]) < 0.2)
            c[0] = 0.5;
        for (std::size_t i = 0; i < grid->size(); ++i) {
            const double r = grid->node(i);
            double x = 0.0;
            for (int j = 0; j < 3; ++j)
                x += c[j] * std::exp(-0.5 * r * r / (s[j] * s[j]));
            v[i] = x;
        }
        max_ratio = std::max(
            max_ratio, gn_ratio(RadialField(grid, std::move(v)), prm, sharp));
    }

    json j;
    j["p"] = prm.p;
    j["N"] = prm.dimension;
    j["samples"] = samples;
    j["max_ratio"] = max_ratio;
    j["prefactor"] = sharp.prefactor;
    j["closed_form_prefactor"] = sharp.closed_form_prefactor;
    j["alpha"] = sharp.alpha;
    j["beta"] = sharp.beta;
    std::ofstream os(dir / "gncheck.json");
    os << j.dump(2) << '\n';
    if (!quiet)
        std::cout << "gncheck: max ratio over " << samples
                  << " fields = " << max_ratio << '\n';
    return max_ratio <= 1.0 + 1e-2 ? 0 : 2;
}

int dispatch(const json& cfg, bool quiet) {
    if (!cfg.contains("command"))
        throw ConfigError("config invalid: missing required field 'command'");
    const std::string cmd = cfg.at("command").get<std::string>();
    if (cmd == "qp") return cmd_qp(cfg, quiet);
    if (cmd == "astar") return cmd_astar(cfg, quiet);
    if (cmd == "solve") return cmd_solve(cfg, quiet);
    if (cmd == "excited") return cmd_excited(cfg, quiet);
    if (cmd == "scan-critical") return cmd_scan_critical(cfg, quiet);
    if (cmd == "concentrate") return cmd_concentrate(cfg, quiet);
    if (cmd == "gncheck") return cmd_gncheck(cfg, quiet);
    throw ConfigError("config invalid: unknown command '" + cmd + "'");
}

} // namespace

int run_config_file(const std::string& config_path,
                    const std::vector<std::string>& overrides, bool quiet) {
    json cfg;
    try {
        std::ifstream is(config_path);
        if (!is)
            throw ConfigError("cannot open config: " + config_path);
        is >> cfg;
        for (const auto& o : overrides)
            apply_override(cfg, o);
        return dispatch(cfg, quiet);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: config invalid: " << e.what() << '\n';
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: config invalid: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Radial solver for quasilinear Schrodinger normalized solutions"};
    std::string config_path;
    std::vector<std::string> overrides;
    bool quiet = false;
    app.add_option("--config", config_path, "Run configuration JSON")->required();
    app.add_option("--override", overrides,
                   "Dotted-path config override key=value (repeatable)");
    app.add_flag("--quiet", quiet, "Suppress progress output");
    CLI11_PARSE(app, argc, argv);
    return run_config_file(config_path, overrides, quiet);
}

} // namespace qnls
