#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "harvest/amplitudes.hpp"
#include "harvest/distillation.hpp"
#include "harvest/rindler.hpp"
#include "harvest/two_qubit.hpp"

namespace harvest::cli {

// Couplings above this bound are refused by the pipeline: the truncation
// error of second-order perturbation theory is no longer negligible against
// the entanglement signal.
inline constexpr double kLambdaCeiling = 0.1;

enum class SweepVariable { Omega, Separation };

struct SweepSpec {
    SweepVariable variable = SweepVariable::Omega;
    double start = 2.0;
    double stop = 14.0;
    int steps = 61;
    amplitudes::ScenarioConfig base;
    // outputs: any of ratio, negativity, eq7, eq8, amplitudes
    std::vector<std::string> outputs{"ratio", "negativity", "eq7", "eq8",
                                     "amplitudes"};
    int workers = 1;
    void validate() const;
};

struct SweepRow {
    double param = 0.0;
    bool failed = false;
    std::string error;
    double ratio = 0.0;
    double neg = 0.0;
    bool eq7 = false, eq8 = false;
    amplitudes::AmplitudeSet amp;
};

struct Crossing {
    double param = 0.0;
    int direction = 0;  // +1 ratio rises through 1, -1 falls through 1
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<Crossing> crossings;
    int failures = 0;
};

SweepResult run_sweep(const SweepSpec& spec);
void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const SweepResult& result);
void write_crossings_csv(std::ostream& out, const SweepSpec& spec,
                         const SweepResult& result);

struct RindlerCompareReport {
    rindler::RindlerScenario scenario;
    double series_emission = 0, series_exchange = 0;
    double quad_emission = 0, quad_exchange = 0;
    double err_quad_emission = 0, err_quad_exchange = 0;
    double closed_ratio = 0;
    double rel_err_emission = 0, rel_err_exchange = 0;
    double ratio_identity_err = 0;  // |series ratio / closed ratio - 1|
    bool quadrature_failed = false;
    std::string failure;
    bool rates_within_tol = false;   // 1e-4
    bool ratio_within_tol = false;   // 1e-12
    bool passed() const {
        return !quadrature_failed && rates_within_tol && ratio_within_tol;
    }
};

RindlerCompareReport run_rindler_compare(const rindler::RindlerScenario& s,
                                         double rate_tol = 1e-4,
                                         double ratio_tol = 1e-12);
void write_rindler_json(std::ostream& out, const RindlerCompareReport& r);

struct PipelineOptions {
    double f_target = 0.9;
    int max_rounds = 64;
    double initial_pairs = 1.0e6;
    double lambda_a = 0.01;
    double lambda_b = 0.01;
    // accelerated pairs: rates are scaled by lambda^2 * t_eff to form the
    // per-window amplitude set
    double rindler_effective_time = 1.0;
};

struct PipelineResult {
    amplitudes::AmplitudeSet amp;
    two_qubit::TwoQubitState rho;
    double negativity = 0.0;
    double concurrence = 0.0;
    double ratio = 0.0;
    two_qubit::InseparabilityFlags flags;
    bool inseparable = false;
    std::optional<distill::DistillTrace> trace;  // absent when separable
    std::string summary;
};

// Full harvest -> decide -> distill chain; writes amplitudes.json,
// state.json, measures.json, distill_trace.csv, summary.json into out_dir
// (plus run_meta.json holding the timestamp, kept out of the primary
// artifacts so reruns are byte-identical).
PipelineResult run_pipeline(const amplitudes::ScenarioConfig& cfg,
                            const PipelineOptions& opt,
                            const std::filesystem::path& out_dir);

// Lambda policy guard used by the pipeline front end.
void enforce_perturbative_coupling(double lambda_a, double lambda_b);

std::string format_double(double v);  // %.17g

}  // namespace harvest::cli
