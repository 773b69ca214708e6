#include "harvest/cli_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace harvest::cli {

namespace {

using amplitudes::AmplitudeSet;
using amplitudes::ScenarioConfig;

ScenarioConfig with_param(const SweepSpec& spec, double value) {
    ScenarioConfig cfg = spec.base;
    if (spec.variable == SweepVariable::Omega) {
        cfg.atom_a.gap = value;
        cfg.atom_b.gap = value;
    } else {
        cfg.separation = value;
        // the paper's separation sweep walks through causal contact; rows
        // there are exploratory by construction
        cfg.allow_causal_contact = true;
    }
    return cfg;
}

SweepRow evaluate_row(const SweepSpec& spec, double value) {
    SweepRow row;
    row.param = value;
    try {
        const ScenarioConfig cfg = with_param(spec, value);
        row.amp = amplitudes::assemble_amplitudes(cfg);
        row.ratio = amplitudes::harvesting_ratio(row.amp);
        const auto flags = two_qubit::inseparability_inequalities(row.amp);
        row.eq7 = flags.exchange_dominates;
        row.eq8 = flags.overlap_dominates;
        row.neg = two_qubit::negativity(two_qubit::assemble_rho(row.amp));
    } catch (const Error& e) {
        row.failed = true;
        row.error = e.what();
    }
    return row;
}

double grid_point(const SweepSpec& spec, int i) {
    return spec.start +
           (spec.stop - spec.start) * double(i) / double(spec.steps - 1);
}

}  // namespace

void SweepSpec::validate() const {
    if (steps < 2) throw InvalidInputError("sweep: steps must be >= 2");
    if (!(start > 0) || !(stop > start))
        throw InvalidInputError("sweep: need 0 < start < stop");
    if (workers < 1) throw InvalidInputError("sweep: workers must be >= 1");
    for (const auto& o : outputs)
        if (o != "ratio" && o != "negativity" && o != "eq7" && o != "eq8" &&
            o != "amplitudes")
            throw InvalidInputError("sweep: unknown output column set '" + o +
                                    "'");
    base.atom_a.window.validate();
    base.atom_b.window.validate();
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult result;
    result.rows.resize(spec.steps);

    const int workers =
        std::min<int>(spec.workers, spec.steps);
    if (workers <= 1) {
        for (int i = 0; i < spec.steps; ++i)
            result.rows[i] = evaluate_row(spec, grid_point(spec, i));
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < spec.steps;
                     i = next.fetch_add(1))
                    result.rows[i] = evaluate_row(spec, grid_point(spec, i));
            });
        }
        for (auto& t : pool) t.join();
    }

    for (const auto& r : result.rows)
        if (r.failed) ++result.failures;
    if (result.failures * 2 > spec.steps) {
        std::ostringstream msg;
        msg << "sweep: " << result.failures << " of " << spec.steps
            << " grid points failed";
        throw SweepError(msg.str());
    }

    // threshold crossings of ratio = 1, bisected to 1e-3 in the parameter
    auto ratio_at = [&](double v) {
        const ScenarioConfig cfg = with_param(spec, v);
        return amplitudes::harvesting_ratio(amplitudes::assemble_amplitudes(cfg));
    };
    for (int i = 0; i + 1 < spec.steps; ++i) {
        const SweepRow& a = result.rows[i];
        const SweepRow& b = result.rows[i + 1];
        if (a.failed || b.failed) continue;
        const double fa = a.ratio - 1.0, fb = b.ratio - 1.0;
        if (fa == 0.0 || fa * fb >= 0.0) continue;
        double lo = a.param, hi = b.param, flo = fa;
        while (hi - lo > 1e-3) {
            const double mid = 0.5 * (lo + hi);
            const double fm = ratio_at(mid) - 1.0;
            if ((flo < 0) == (fm < 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        result.crossings.push_back(
            {0.5 * (lo + hi), fa < 0 ? +1 : -1});
    }
    return result;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec,
                     const SweepResult& result) {
    const auto& want = spec.outputs;
    auto has = [&](const char* k) {
        return std::find(want.begin(), want.end(), k) != want.end();
    };
    out << (spec.variable == SweepVariable::Omega ? "omega" : "separation");
    if (has("ratio")) out << ",ratio";
    if (has("negativity")) out << ",negativity";
    if (has("eq7")) out << ",eq7";
    if (has("eq8")) out << ",eq8";
    if (has("amplitudes"))
        out << ",x0_re,x0_im,x2,ea2,eb2,eab_re,eab_im"
            << ",err_x0,err_ea2,err_eb2,err_eab";
    out << ",failed\n";
    for (const auto& r : result.rows) {
        out << format_double(r.param);
        if (has("ratio")) out << "," << format_double(r.ratio);
        if (has("negativity")) out << "," << format_double(r.neg);
        if (has("eq7")) out << "," << (r.eq7 ? 1 : 0);
        if (has("eq8")) out << "," << (r.eq8 ? 1 : 0);
        if (has("amplitudes")) {
            const auto& a = r.amp;
            out << "," << format_double(a.x0.real()) << ","
                << format_double(a.x0.imag()) << "," << format_double(a.x2)
                << "," << format_double(a.ea2) << "," << format_double(a.eb2)
                << "," << format_double(a.eab.real()) << ","
                << format_double(a.eab.imag()) << ","
                << format_double(a.provenance.err_x0) << ","
                << format_double(a.provenance.err_ea2) << ","
                << format_double(a.provenance.err_eb2) << ","
                << format_double(a.provenance.err_eab);
        }
        out << "," << (r.failed ? 1 : 0) << "\n";
    }
}

void write_crossings_csv(std::ostream& out, const SweepSpec& spec,
                         const SweepResult& result) {
    out << (spec.variable == SweepVariable::Omega ? "omega" : "separation")
        << ",direction\n";
    for (const auto& c : result.crossings)
        out << format_double(c.param) << "," << c.direction << "\n";
}

RindlerCompareReport run_rindler_compare(const rindler::RindlerScenario& s,
                                         double rate_tol, double ratio_tol) {
    RindlerCompareReport r;
    r.scenario = s;
    r.series_emission = rindler::emission_rate(s);
    r.series_exchange = rindler::exchange_amplitude_rate(s);
    r.closed_ratio = rindler::analytic_ratio(s);
    r.ratio_identity_err = std::abs(
        (r.series_exchange / r.series_emission) / r.closed_ratio - 1.0);
    try {
        const auto q = rindler::rates_by_quadrature(s);
        r.quad_emission = q.emission;
        r.quad_exchange = q.exchange;
        r.err_quad_emission = q.err_emission;
        r.err_quad_exchange = q.err_exchange;
        r.rel_err_emission =
            std::abs(q.emission / r.series_emission - 1.0);
        r.rel_err_exchange =
            std::abs(q.exchange / r.series_exchange - 1.0);
    } catch (const Error& e) {
        r.quadrature_failed = true;
        r.failure = e.what();
    }
    r.rates_within_tol = !r.quadrature_failed &&
                         r.rel_err_emission <= rate_tol &&
                         r.rel_err_exchange <= rate_tol;
    r.ratio_within_tol = r.ratio_identity_err <= ratio_tol;
    return r;
}

void write_rindler_json(std::ostream& out, const RindlerCompareReport& r) {
    nlohmann::json j;
    j["separation"] = r.scenario.separation;
    j["gap"] = r.scenario.gap;
    j["omega_l"] = r.scenario.gap * r.scenario.separation;
    j["series_terms"] = r.scenario.series_terms;
    j["series_emission_rate"] = r.series_emission;
    j["series_exchange_rate"] = r.series_exchange;
    j["quadrature_emission_rate"] = r.quad_emission;
    j["quadrature_exchange_rate"] = r.quad_exchange;
    j["quadrature_error_emission"] = r.err_quad_emission;
    j["quadrature_error_exchange"] = r.err_quad_exchange;
    j["closed_form_ratio"] = r.closed_ratio;
    j["rel_err_emission"] = r.rel_err_emission;
    j["rel_err_exchange"] = r.rel_err_exchange;
    j["ratio_identity_rel_err"] = r.ratio_identity_err;
    j["quadrature_failed"] = r.quadrature_failed;
    if (r.quadrature_failed) j["failure"] = r.failure;
    j["passed"] = r.passed();
    out << j.dump(2) << "\n";
}

void enforce_perturbative_coupling(double lambda_a, double lambda_b) {
    const double lam = std::max(lambda_a, lambda_b);
    if (lam > kLambdaCeiling) {
        std::ostringstream msg;
        msg << "coupling lambda = " << lam << " exceeds the perturbative bound "
            << kLambdaCeiling
            << "; second-order amplitudes cannot be trusted at this strength";
        throw PerturbativeRegimeError(msg.str());
    }
}

namespace {

nlohmann::json amplitude_json(const AmplitudeSet& a) {
    nlohmann::json j;
    j["x0_re"] = a.x0.real();
    j["x0_im"] = a.x0.imag();
    j["x2"] = a.x2;
    j["ea2"] = a.ea2;
    j["eb2"] = a.eb2;
    j["eab_re"] = a.eab.real();
    j["eab_im"] = a.eab.imag();
    j["errors"] = {{"x0", a.provenance.err_x0},
                   {"x2", a.provenance.err_x2},
                   {"ea2", a.provenance.err_ea2},
                   {"eb2", a.provenance.err_eb2},
                   {"eab", a.provenance.err_eab}};
    j["path"] = a.provenance.path == amplitudes::Path::Both
                    ? "both"
                    : (a.provenance.path == amplitudes::Path::TimeDomain
                           ? "time"
                           : "frequency");
    j["cross_checked"] = a.provenance.cross_checked;
    if (a.provenance.cross_checked)
        j["path_deltas"] = {{"x0", a.provenance.delta_x0},
                            {"ea2", a.provenance.delta_ea2},
                            {"eb2", a.provenance.delta_eb2},
                            {"eab", a.provenance.delta_eab}};
    j["self_energy_absorbed"] = a.provenance.self_energy_absorbed;
    j["causal_contact"] = a.provenance.causal_contact;
    if (!a.provenance.note.empty()) j["note"] = a.provenance.note;
    return j;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw InvalidInputError("cannot write " + p.string());
    out << text;
}

}  // namespace

PipelineResult run_pipeline(const amplitudes::ScenarioConfig& cfg,
                            const PipelineOptions& opt,
                            const std::filesystem::path& out_dir) {
    enforce_perturbative_coupling(opt.lambda_a, opt.lambda_b);
    std::filesystem::create_directories(out_dir);

    PipelineResult res;
    if (cfg.geometry == correlators::GeometryKind::StaticPair) {
        amplitudes::ScenarioConfig run = cfg;
        run.atom_a.window.amplitude = opt.lambda_a;
        run.atom_b.window.amplitude = opt.lambda_b;
        res.amp = amplitudes::assemble_amplitudes(run);
    } else {
        rindler::RindlerScenario s;
        s.separation = cfg.separation;
        s.gap = cfg.atom_a.gap;
        res.amp = rindler::rindler_amplitudes(s, opt.lambda_a, opt.lambda_b,
                                              opt.rindler_effective_time);
    }

    res.rho = two_qubit::assemble_rho(res.amp);
    res.negativity = two_qubit::negativity(res.rho);
    res.concurrence = two_qubit::concurrence(res.rho);
    res.ratio = amplitudes::harvesting_ratio(res.amp);
    res.flags = two_qubit::inseparability_inequalities(res.amp);
    res.inseparable = res.negativity > 1e-12;

    std::ostringstream summary;
    if (res.inseparable) {
        res.trace = distill::distill_to_target(res.rho, opt.f_target,
                                               opt.max_rounds,
                                               opt.initial_pairs);
        summary << "inseparable: yes; ";
        if (res.trace->reached)
            summary << "distilled to F >= " << opt.f_target << " in "
                    << res.trace->rounds.back().round << " rounds (target "
                    << two_qubit::bell_name(res.trace->target) << ")";
        else
            summary << "distillation stalled at F = "
                    << res.trace->final_fidelity() << " after "
                    << res.trace->rounds.back().round << " rounds";
    } else {
        summary << "inseparable: no (PPT); not distillable";
    }
    res.summary = summary.str();

    // primary artifacts (timestamp-free, byte-stable)
    {
        std::ostringstream amp_out;
        amp_out << amplitude_json(res.amp).dump(2) << "\n";
        write_file(out_dir / "amplitudes.json", amp_out.str());
    }
    two_qubit::save_state_json(out_dir / "state.json", res.rho);
    {
        nlohmann::json j;
        j["negativity"] = res.negativity;
        j["concurrence"] = res.concurrence;
        j["harvesting_ratio"] = res.ratio;
        j["eq7_exchange_dominates"] = res.flags.exchange_dominates;
        j["eq8_overlap_dominates"] = res.flags.overlap_dominates;
        j["inseparable"] = res.inseparable;
        write_file(out_dir / "measures.json", j.dump(2) + "\n");
    }
    {
        std::ostringstream tr;
        if (res.trace) distill::save_trace_csv(tr, *res.trace);
        else tr << "round,fidelity,p_success,pairs_remaining\n";
        write_file(out_dir / "distill_trace.csv", tr.str());
    }
    {
        nlohmann::json j;
        j["summary"] = res.summary;
        j["inseparable"] = res.inseparable;
        j["units"] = "c = 1; times and lengths share the window-duration scale";
        if (res.trace) {
            j["rounds"] = res.trace->rounds.back().round;
            j["reached_target"] = res.trace->reached;
            j["final_fidelity"] = res.trace->final_fidelity();
            j["target_bell"] = two_qubit::bell_name(res.trace->target);
            j["filter_eta_a"] = res.trace->filter.eta_a;
            j["filter_eta_b"] = res.trace->filter.eta_b;
        }
        write_file(out_dir / "summary.json", j.dump(2) + "\n");
    }
    {
        nlohmann::json meta;
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        meta["timestamp_unix"] =
            std::chrono::duration_cast<std::chrono::seconds>(now).count();
        write_file(out_dir / "run_meta.json", meta.dump(2) + "\n");
    }
    return res;
}

}  // namespace harvest::cli
