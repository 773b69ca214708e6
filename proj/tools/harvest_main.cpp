// Command-line front end: parameter sweeps over the harvesting ratio,
// closed-form vs quadrature comparison for the accelerated pair, the full
// harvest -> distill pipeline, and distillation of imported states.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "harvest/cli_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// exit codes: 0 ok, 2 physics regime, 3 numerical, 4 bad input
constexpr int kExitOk = 0;
constexpr int kExitRegime = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitBadInput = 4;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "harvest_out";
    int workers = 1;
    double tolerance = 0.0;  // 0 = library default
    std::string format = "csv";
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in)
        throw harvest::InvalidInputError("cannot open config file " + path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw harvest::InvalidInputError(std::string("config: bad JSON: ") +
                                         e.what());
    }
}

harvest::windows::WindowFunction window_from_json(const json& j) {
    harvest::windows::WindowFunction w;
    const std::string shape = j.value("shape", std::string("cos2"));
    if (shape == "cos2" || shape == "cosine_squared")
        w.shape = harvest::windows::Shape::CosineSquared;
    else if (shape == "gaussian")
        w.shape = harvest::windows::Shape::Gaussian;
    else if (shape == "tabulated")
        return harvest::windows::load_tabulated_window(
            j.at("file").get<std::string>(), j.value("amplitude", 1.0));
    else
        throw harvest::InvalidInputError("config: unknown window shape '" +
                                         shape + "'");
    w.duration = j.value("duration", 1.0);
    w.center = j.value("center", 0.0);
    w.amplitude = j.value("amplitude", 1.0);
    w.validate();
    return w;
}

harvest::amplitudes::ScenarioConfig scenario_from_json(const json& root,
                                                       double tolerance) {
    harvest::amplitudes::ScenarioConfig cfg;
    const json s = root.value("scenario", json::object());
    const json w = s.value("window", json::object());
    cfg.atom_a.window = window_from_json(w);
    cfg.atom_b.window =
        s.contains("window_b") ? window_from_json(s["window_b"])
                               : cfg.atom_a.window;
    cfg.atom_a.gap = s.value("omega", 9.5);
    cfg.atom_b.gap = s.value("omega_b", cfg.atom_a.gap);
    cfg.separation = s.value("separation", 1.0);
    const std::string geom = s.value("geometry", std::string("static"));
    if (geom == "static")
        cfg.geometry = harvest::correlators::GeometryKind::StaticPair;
    else if (geom == "rindler")
        cfg.geometry = harvest::correlators::GeometryKind::RindlerPair;
    else
        throw harvest::InvalidInputError("config: unknown geometry '" + geom +
                                         "'");
    const std::string path = s.value("path", std::string("frequency"));
    if (path == "frequency")
        cfg.path = harvest::amplitudes::Path::FrequencyDomain;
    else if (path == "time")
        cfg.path = harvest::amplitudes::Path::TimeDomain;
    else if (path == "both")
        cfg.path = harvest::amplitudes::Path::Both;
    else
        throw harvest::InvalidInputError("config: unknown path '" + path + "'");
    cfg.allow_causal_contact = s.value("allow_causal_contact", false);

    const json q = root.value("quadrature", json::object());
    cfg.quadrature.rel_tol = q.value("rel_tol", cfg.quadrature.rel_tol);
    cfg.quadrature.abs_tol = q.value("abs_tol", cfg.quadrature.abs_tol);
    cfg.quadrature.max_subdivisions =
        q.value("max_subdivisions", cfg.quadrature.max_subdivisions);
    cfg.quadrature.extrapolation_orders =
        q.value("extrapolation_orders", cfg.quadrature.extrapolation_orders);
    cfg.quadrature.regulator_base =
        q.value("regulator_base", cfg.quadrature.regulator_base);
    cfg.quadrature.regulator_ratio =
        q.value("regulator_ratio", cfg.quadrature.regulator_ratio);
    if (q.value("tail_strategy", std::string("accelerated")) ==
        "partition")
        cfg.quadrature.tail_strategy =
            harvest::quad::TailStrategy::PartitionAtZeros;
    if (tolerance > 0) cfg.quadrature.rel_tol = tolerance;
    return cfg;
}

int run_sweep_cmd(const CommonOpts& common, const std::string& variable_flag) {
    const json cfg_json = load_config(common.config_path);
    harvest::cli::SweepSpec spec;
    spec.base = scenario_from_json(cfg_json, common.tolerance);
    const json sj = cfg_json.value("sweep", json::object());
    std::string variable = sj.value("variable", std::string("omega"));
    if (!variable_flag.empty()) variable = variable_flag;
    if (variable == "omega")
        spec.variable = harvest::cli::SweepVariable::Omega;
    else if (variable == "separation" || variable == "L")
        spec.variable = harvest::cli::SweepVariable::Separation;
    else
        throw harvest::InvalidInputError("sweep: unknown variable '" +
                                         variable + "'");
    spec.start = sj.value("start", spec.variable == harvest::cli::SweepVariable::Omega ? 2.0 : 0.5);
    spec.stop = sj.value("stop", spec.variable == harvest::cli::SweepVariable::Omega ? 14.0 : 2.0);
    spec.steps = sj.value("steps", 61);
    if (sj.contains("outputs"))
        spec.outputs = sj["outputs"].get<std::vector<std::string>>();
    spec.workers = common.workers;

    const double lambda = cfg_json.value("scenario", json::object())
                              .value("lambda", 0.01);
    harvest::cli::enforce_perturbative_coupling(lambda, lambda);
    spec.base.atom_a.window.amplitude = lambda;
    spec.base.atom_b.window.amplitude = lambda;

    const harvest::cli::SweepResult result = harvest::cli::run_sweep(spec);

    fs::create_directories(common.out_dir);
    {
        std::ofstream out(fs::path(common.out_dir) / "sweep.csv");
        harvest::cli::write_sweep_csv(out, spec, result);
    }
    {
        std::ofstream out(fs::path(common.out_dir) / "crossings.csv");
        harvest::cli::write_crossings_csv(out, spec, result);
    }
    std::cout << "sweep: " << spec.steps << " points, " << result.failures
              << " failed\n";
    for (const auto& c : result.crossings)
        std::cout << "ratio crosses 1 at "
                  << harvest::cli::format_double(c.param) << " (going "
                  << (c.direction > 0 ? "up" : "down") << ")\n";
    return kExitOk;
}

int run_rindler_cmd(const CommonOpts& common, double omega, double L,
                    int series_terms) {
    harvest::rindler::RindlerScenario s;
    s.gap = omega;
    s.separation = L;
    s.series_terms = series_terms;
    const auto report = harvest::cli::run_rindler_compare(s);
    fs::create_directories(common.out_dir);
    {
        std::ofstream out(fs::path(common.out_dir) / "rindler_compare.json");
        harvest::cli::write_rindler_json(out, report);
    }
    harvest::cli::write_rindler_json(std::cout, report);
    return report.passed() ? kExitOk : kExitNumerical;
}

int run_pipeline_cmd(const CommonOpts& common, double f_target) {
    const json cfg_json = load_config(common.config_path);
    const auto cfg = scenario_from_json(cfg_json, common.tolerance);
    harvest::cli::PipelineOptions opt;
    const json s = cfg_json.value("scenario", json::object());
    opt.lambda_a = s.value("lambda", 0.01);
    opt.lambda_b = s.value("lambda_b", opt.lambda_a);
    const json d = cfg_json.value("distill", json::object());
    opt.f_target = f_target > 0 ? f_target : d.value("f_target", 0.9);
    opt.max_rounds = d.value("max_rounds", 64);
    opt.initial_pairs = d.value("initial_pairs", 1.0e6);
    opt.rindler_effective_time = d.value("rindler_effective_time", 1.0);

    const auto res = harvest::cli::run_pipeline(cfg, opt, common.out_dir);
    std::cout << res.summary << "\n";
    return res.inseparable ? kExitOk : kExitRegime;
}

int run_distill_cmd(const CommonOpts& common, const std::string& state_path,
                    double f_target, int max_rounds) {
    harvest::two_qubit::TwoQubitState rho;
    if (fs::path(state_path).extension() == ".json")
        rho = harvest::two_qubit::load_state_json(state_path);
    else
        rho = harvest::two_qubit::load_state_text(state_path);
    rho.validate();
    const auto trace = harvest::distill::distill_to_target(
        rho, f_target, max_rounds);
    fs::create_directories(common.out_dir);
    {
        std::ofstream out(fs::path(common.out_dir) / "distill_trace.csv");
        harvest::distill::save_trace_csv(out, trace);
    }
    std::cout << (trace.reached ? "reached" : "stalled") << " F = "
              << harvest::cli::format_double(trace.final_fidelity()) << " after "
              << trace.rounds.back().round << " rounds (target "
              << harvest::two_qubit::bell_name(trace.target) << ")\n";
    return trace.reached ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "vacuum entanglement harvesting: two-atom second-order amplitudes, "
        "inseparability tests, accelerated-pair closed forms, distillation"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--config", common.config_path, "JSON configuration file");
    app.add_option("--out", common.out_dir, "output directory");
    app.add_option("--workers", common.workers, "parallel grid workers");
    app.add_option("--tolerance", common.tolerance,
                   "override quadrature relative tolerance");
    app.add_option("--format", common.format, "csv or json table output")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* sweep = app.add_subcommand("sweep", "parameter sweep of the ratio");
    std::string sweep_variable;
    sweep->add_option("--variable", sweep_variable,
                      "omega or separation (overrides config)");

    auto* rind = app.add_subcommand(
        "rindler", "series vs quadrature rates for the accelerated pair");
    double r_omega = 1.0, r_L = 2.0;
    int r_terms = 50;
    rind->add_option("--omega", r_omega, "energy gap");
    rind->add_option("--separation", r_L, "wedge scale L");
    rind->add_option("--series-terms", r_terms, "pole series length");

    auto* pipe = app.add_subcommand("pipeline",
                                    "harvest, decide, and distill end to end");
    double p_target = 0.0;
    pipe->add_option("--f-target", p_target, "distillation fidelity target");

    auto* dist = app.add_subcommand("distill", "distill an imported 4x4 state");
    std::string state_path;
    double d_target = 0.9;
    int d_rounds = 64;
    dist->add_option("--state", state_path, "state file (json or text)")
        ->required();
    dist->add_option("--f-target", d_target, "fidelity target");
    dist->add_option("--max-rounds", d_rounds, "recurrence round limit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return run_sweep_cmd(common, sweep_variable);
        if (rind->parsed())
            return run_rindler_cmd(common, r_omega, r_L, r_terms);
        if (pipe->parsed()) return run_pipeline_cmd(common, p_target);
        if (dist->parsed())
            return run_distill_cmd(common, state_path, d_target, d_rounds);
    } catch (const harvest::PerturbativeRegimeError& e) {
        std::cerr << "physics-regime error: " << e.what() << "\n";
        return kExitRegime;
    } catch (const harvest::NotDistillableError& e) {
        std::cerr << "physics-regime error: " << e.what() << "\n";
        return kExitRegime;
    } catch (const harvest::FilteredToNothingError& e) {
        std::cerr << "physics-regime error: " << e.what() << "\n";
        return kExitRegime;
    } catch (const harvest::ConvergenceError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const harvest::SweepError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const harvest::Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
