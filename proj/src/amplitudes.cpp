#include "harvest/amplitudes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace harvest::amplitudes {

namespace {

constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

double signed_gap(OpSign s, double gap) {
    return s == OpSign::Plus ? gap : -gap;
}

// Frequency-domain route. The common 1/4pi^2 is fixed once by the mode-sum
// normalization of the massless field and asserted against the time-domain
// route in the cross-validation tests.
SmearedResult smeared_frequency(Atom i, OpSign si, Atom j, OpSign sj,
                                const ScenarioConfig& cfg) {
    const AtomParams& ai = cfg.atom(i);
    const AtomParams& aj = cfg.atom(j);
    const double wi = signed_gap(si, ai.gap);
    const double wj = signed_gap(sj, aj.gap);
    const double L = (i == j) ? 0.0 : cfg.separation;

    const double ti = ai.window.duration, tj = aj.window.duration;
    // cell width ~ half period of the fastest oscillation in the integrand
    const double cell =
        (L > 0.0) ? std::numbers::pi / std::max(L, 0.25 * (ti + tj))
                  : 4.0 * std::numbers::pi / (ti + tj);

    auto integrand = [&](double w) {
        const double k = correlators::frequency_kernel_static(w, L);
        return k * windows::window_spectrum(ai.window, wi - w) *
               windows::window_spectrum(aj.window, wj + w);
    };
    quad::IntegralResult r =
        quad::integrate_semi_infinite(integrand, 0.0, cell, cfg.quadrature);
    return {r.value / kFourPiSq, r.error / kFourPiSq};
}

// Time-domain route: double quadrature over the window supports against the
// regulated Wightman kernel, i-epsilon ladder extrapolated to zero.
SmearedResult smeared_time(Atom i, OpSign si, Atom j, OpSign sj,
                           const ScenarioConfig& cfg) {
    const AtomParams& ai = cfg.atom(i);
    const AtomParams& aj = cfg.atom(j);
    const double wi = signed_gap(si, ai.gap);
    const double wj = signed_gap(sj, aj.gap);
    const double r_sep = (i == j) ? 0.0 : cfg.separation;
    const double t_ref = std::max(ai.window.duration, aj.window.duration);

    const auto& qs = cfg.quadrature;
    std::vector<std::pair<double, Complex>> rungs;
    double quad_err = 0.0;
    for (int k = 0; k < qs.extrapolation_orders; ++k) {
        const double eps =
            qs.regulator_base * std::pow(qs.regulator_ratio, k) * t_ref;
        auto integrand = [&](double t, double tp) {
            const double ei = windows::window_eval(ai.window, t);
            if (ei == 0.0) return Complex{};
            const double ej = windows::window_eval(aj.window, tp);
            if (ej == 0.0) return Complex{};
            const double phase = wi * t + wj * tp;
            const Complex osc(std::cos(phase), std::sin(phase));
            return ei * ej * osc *
                   correlators::wightman_static(t - tp, r_sep, eps);
        };
        quad::IntegralResult ir = quad::integrate_2d(
            integrand, ai.window.support_min(), ai.window.support_max(),
            aj.window.support_min(), aj.window.support_max(), qs);
        rungs.emplace_back(eps, ir.value);
        quad_err = std::max(quad_err, ir.error);
    }
    quad::ExtrapolationResult ex = quad::extrapolate_regulator(rungs);
    return {ex.value, ex.error + quad_err};
}

double check_real(const Complex& v, double err, const char* what) {
    const double scale = std::max({std::abs(v.real()), err, 1e-300});
    if (std::abs(v.imag()) > 1e-6 * scale + 100.0 * err) {
        std::ostringstream msg;
        msg << what << ": expected a real quantity, imag part " << v.imag();
        throw CrossValidationError(msg.str());
    }
    return v.real();
}

struct FiveAmplitudes {
    Complex x0;
    double ea2, eb2;
    Complex eab;
    double err_x0, err_ea2, err_eb2, err_eab;
};

FiveAmplitudes five(const ScenarioConfig& cfg, Path path) {
    FiveAmplitudes f{};
    const SmearedResult x0 =
        smeared_two_point(Atom::A, OpSign::Plus, Atom::B, OpSign::Plus, cfg, path);
    const SmearedResult ea =
        smeared_two_point(Atom::A, OpSign::Minus, Atom::A, OpSign::Plus, cfg, path);
    const SmearedResult eb =
        smeared_two_point(Atom::B, OpSign::Minus, Atom::B, OpSign::Plus, cfg, path);
    const SmearedResult eab =
        smeared_two_point(Atom::A, OpSign::Minus, Atom::B, OpSign::Plus, cfg, path);
    f.x0 = x0.value;
    f.ea2 = check_real(ea.value, ea.error, "|E_A|^2");
    f.eb2 = check_real(eb.value, eb.error, "|E_B|^2");
    f.eab = eab.value;
    f.err_x0 = x0.error;
    f.err_ea2 = ea.error;
    f.err_eb2 = eb.error;
    f.err_eab = eab.error;
    return f;
}

}  // namespace

bool ScenarioConfig::windows_causally_safe() const {
    // every pair (t, t') in the two supports must stay outside the light
    // cone: max |t - t'| <= L (the boundary carries zero window weight)
    const double reach =
        0.5 * (atom_a.window.duration + atom_b.window.duration) +
        std::abs(atom_a.window.center - atom_b.window.center);
    return reach <= separation;
}

void ScenarioConfig::validate() const {
    if (!(atom_a.gap > 0) || !(atom_b.gap > 0))
        throw InvalidInputError("scenario: energy gaps must be > 0");
    atom_a.window.validate();
    atom_b.window.validate();
    if (!(separation > 0))
        throw InvalidInputError("scenario: separation must be > 0");
    quadrature.validate();
    if (atom_a.window.shape != atom_b.window.shape)
        throw InvalidInputError(
            "scenario: both atoms must use the same window shape");
    if (geometry == correlators::GeometryKind::StaticPair &&
        !windows_causally_safe() && !allow_causal_contact) {
        std::ostringstream msg;
        msg << "scenario: interaction windows are not spacelike separated "
               "(window reach exceeds L="
            << separation
            << "); set allow_causal_contact for exploratory runs";
        throw InvalidInputError(msg.str());
    }
}

SmearedResult smeared_two_point(Atom i, OpSign si, Atom j, OpSign sj,
                                const ScenarioConfig& cfg) {
    return smeared_two_point(i, si, j, sj, cfg,
                             cfg.path == Path::Both ? Path::FrequencyDomain
                                                    : cfg.path);
}

SmearedResult smeared_two_point(Atom i, OpSign si, Atom j, OpSign sj,
                                const ScenarioConfig& cfg, Path path) {
    cfg.validate();
    if (cfg.geometry != correlators::GeometryKind::StaticPair)
        throw InvalidInputError(
            "smeared_two_point: static geometry only; accelerated pairs are "
            "served by the closed-form Rindler rates");
    switch (path) {
        case Path::FrequencyDomain:
            return smeared_frequency(i, si, j, sj, cfg);
        case Path::TimeDomain:
            return smeared_time(i, si, j, sj, cfg);
        case Path::Both:
            break;
    }
    throw InvalidInputError("smeared_two_point: pass a concrete path");
}

void AmplitudeSet::validate() const {
    const double scale =
        std::max({std::abs(x0), ea2, eb2, std::abs(eab), x2, 1e-300});
    const double slack = 1e-8 * scale;
    if (ea2 < -slack || eb2 < -slack || x2 < -slack * scale)
        throw InvalidInputError("amplitudes: norms must be non-negative");
    if (std::norm(eab) > ea2 * eb2 + slack * scale)
        throw InvalidInputError(
            "amplitudes: |<E_A|E_B>|^2 <= |E_A|^2 |E_B|^2 violated");
    if (std::norm(x0) > x2 * (1.0 + 1e-8) + slack * scale)
        throw InvalidInputError("amplitudes: |X_AB|^2 >= |<0|X_AB>|^2 violated");
}

AmplitudeSet assemble_amplitudes(const ScenarioConfig& cfg) {
    cfg.validate();
    const Path primary =
        cfg.path == Path::TimeDomain ? Path::TimeDomain : Path::FrequencyDomain;
    FiveAmplitudes p = five(cfg, primary);

    AmplitudeSet amp;
    amp.provenance.path = cfg.path;
    amp.provenance.causal_contact = !cfg.windows_causally_safe();

    if (cfg.path == Path::Both) {
        const FiveAmplitudes t = five(cfg, Path::TimeDomain);
        struct Check {
            const char* name;
            Complex a, b;
            double err;
            double* delta;
        };
        Provenance& pr = amp.provenance;
        Check checks[] = {
            {"<0|X_AB>", p.x0, t.x0, p.err_x0 + t.err_x0, &pr.delta_x0},
            {"|E_A|^2", p.ea2, t.ea2, p.err_ea2 + t.err_ea2, &pr.delta_ea2},
            {"|E_B|^2", p.eb2, t.eb2, p.err_eb2 + t.err_eb2, &pr.delta_eb2},
            {"<E_A|E_B>", p.eab, t.eab, p.err_eab + t.err_eab, &pr.delta_eab},
        };
        for (const Check& c : checks) {
            const double d = std::abs(c.a - c.b);
            *c.delta = d;
            if (d > 10.0 * (c.err + 1e-14 * std::abs(c.a))) {
                std::ostringstream msg;
                msg << "amplitude cross-validation failed for " << c.name
                    << ": time and frequency paths differ by " << d
                    << " against a combined error budget of " << c.err;
                throw CrossValidationError(msg.str());
            }
        }
        pr.cross_checked = true;
    }

    amp.x0 = p.x0;
    amp.ea2 = std::max(0.0, p.ea2);
    amp.eb2 = std::max(0.0, p.eb2);
    amp.eab = p.eab;
    // Wick expansion of the four-point norm <X_AB|X_AB> into its three pair
    // contractions (free field):
    //   |X0|^2 + <E_A|E_B> <E_B|E_A> + |E_A|^2 |E_B|^2
    amp.x2 = std::norm(amp.x0) + std::norm(amp.eab) + amp.ea2 * amp.eb2;
    amp.provenance.err_x0 = p.err_x0;
    amp.provenance.err_ea2 = p.err_ea2;
    amp.provenance.err_eb2 = p.err_eb2;
    amp.provenance.err_eab = p.err_eab;
    amp.provenance.err_x2 =
        2.0 * std::abs(amp.x0) * p.err_x0 + 2.0 * std::abs(amp.eab) * p.err_eab +
        amp.ea2 * p.err_eb2 + amp.eb2 * p.err_ea2;
    amp.validate();
    return amp;
}

double harvesting_ratio(const AmplitudeSet& amp) {
    if (!(amp.ea2 > 0.0) || !(amp.eb2 > 0.0))
        throw UndefinedRatioError(
            "harvesting_ratio: undefined for vanishing emission norms");
    return std::abs(amp.x0) / std::sqrt(amp.ea2 * amp.eb2);
}

TransitionProbabilities transition_probabilities(Atom which,
                                                 const ScenarioConfig& cfg) {
    const SmearedResult exc =
        smeared_two_point(which, OpSign::Minus, which, OpSign::Plus, cfg);
    const SmearedResult dex =
        smeared_two_point(which, OpSign::Plus, which, OpSign::Minus, cfg);
    TransitionProbabilities p;
    p.excitation =
        std::max(0.0, check_real(exc.value, exc.error, "P(exc)"));
    p.deexcitation =
        std::max(0.0, check_real(dex.value, dex.error, "P(deexc)"));
    p.err_excitation = exc.error;
    p.err_deexcitation = dex.error;
    return p;
}

}  // namespace harvest::amplitudes
