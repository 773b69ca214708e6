#include "harvest/rindler.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace harvest::rindler {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void RindlerScenario::validate() const {
    if (!(separation > 0))
        throw InvalidInputError("rindler: separation must be > 0");
    if (!(gap > 0)) throw InvalidInputError("rindler: gap must be > 0");
    if (series_terms < 1)
        throw InvalidInputError("rindler: series_terms must be >= 1");
    // remainder of the geometric series past series_terms, relative to the
    // leading term
    const double x = std::exp(-std::numbers::pi * gap * separation);
    const double rel_remainder = std::pow(x, series_terms) / (1.0 - x);
    if (rel_remainder > 1e-13) {
        std::ostringstream msg;
        msg << "rindler: " << series_terms
            << " series terms leave a relative remainder " << rel_remainder
            << " at Omega*L = " << gap * separation << "; raise series_terms";
        throw InvalidInputError(msg.str());
    }
}

double emission_rate(const RindlerScenario& s) {
    s.validate();
    const double x = std::exp(-std::numbers::pi * s.gap * s.separation);
    double term = x, sum = 0.0;
    for (int n = 1; n <= s.series_terms; ++n) {
        sum += term;
        if (term < 1e-18 * sum) break;
        term *= x;
    }
    return s.gap / kTwoPi * sum;
}

double emission_rate_closed(const RindlerScenario& s) {
    s.validate();
    return s.gap / kTwoPi / std::expm1(std::numbers::pi * s.gap * s.separation);
}

double exchange_amplitude_rate(const RindlerScenario& s) {
    s.validate();
    const double x = std::exp(-std::numbers::pi * s.gap * s.separation);
    double term = std::sqrt(x), sum = 0.0;
    for (int n = 0; n <= s.series_terms; ++n) {
        sum += term;
        if (term < 1e-18 * sum) break;
        term *= x;
    }
    return s.gap / kTwoPi * sum;
}

double exchange_amplitude_rate_closed(const RindlerScenario& s) {
    s.validate();
    const double piOL = std::numbers::pi * s.gap * s.separation;
    return s.gap / kTwoPi * std::exp(-0.5 * piOL) / (-std::expm1(-piOL));
}

double analytic_ratio(const RindlerScenario& s) {
    s.validate();
    return std::exp(0.5 * std::numbers::pi * s.gap * s.separation);
}

namespace {

using LD = long double;
using CLD = std::complex<LD>;

// One regulated rate integral in extended precision. The emission integrand
// is O(1/eps^2) at the origin while the answer can be ~1e-11 (Omega L = 8),
// so the whole interval goes through a single long-double accumulation; any
// split would wash the cancellation through a double round-trip.
quad::Complex rate_integral(LD omega, LD L, LD eps, LD span, bool emission) {
    const LD four_pi_sq = LD(4) * std::numbers::pi_v<LD> * std::numbers::pi_v<LD>;
    auto f = [&](LD u) -> CLD {
        const CLD z = CLD(u, -eps) / L;
        CLD d;
        if (emission) {
            const CLD sh = std::sinh(z);
            d = LD(-1) / (four_pi_sq * L * L * sh * sh);
        } else {
            const CLD ch = std::cosh(z);
            d = LD(1) / (four_pi_sq * L * L * ch * ch);
        }
        const LD phase = emission ? -omega * u : omega * u;
        return d * CLD(std::cos(phase), std::sin(phase));
    };
    const LD U = span * L;
    quad::IntegralResult r = quad::detail::adaptive_gk<LD>(
        f, -U, U, LD(1e-10), LD(5e-17), 60000);
    if (!r.converged)
        throw ConvergenceError("rindler rate quadrature did not converge",
                               r.value, r.error);
    return r.value;
}

double extrapolated_rate(const RindlerScenario& s, double span, bool emission,
                         double* err_out) {
    const LD L = s.separation, omega = s.gap;
    std::vector<std::pair<double, quad::Complex>> rungs;
    LD eps = LD(1e-2) * L;
    for (int k = 0; k < 4; ++k, eps /= 2) {
        rungs.emplace_back(static_cast<double>(eps),
                           rate_integral(omega, L, eps, LD(span), emission));
    }
    quad::ExtrapolationResult ex = quad::extrapolate_regulator(rungs);
    if (err_out) *err_out = ex.error + std::abs(ex.value.imag());
    return ex.value.real();
}

}  // namespace

RateQuadrature rates_by_quadrature(const RindlerScenario& s, double span) {
    s.validate();
    if (!(span > 1)) throw InvalidInputError("rindler: span must exceed 1");
    RateQuadrature r;
    r.emission = extrapolated_rate(s, span, true, &r.err_emission);
    r.exchange = extrapolated_rate(s, span, false, &r.err_exchange);
    return r;
}

amplitudes::AmplitudeSet rindler_amplitudes(const RindlerScenario& s,
                                            double lambda_a, double lambda_b,
                                            double effective_time) {
    s.validate();
    if (!(lambda_a > 0) || !(lambda_b > 0))
        throw InvalidInputError("rindler_amplitudes: couplings must be > 0");
    if (!(effective_time > 0))
        throw InvalidInputError("rindler_amplitudes: effective_time must be > 0");
    const double emit = emission_rate(s);
    const double exch = exchange_amplitude_rate(s);

    amplitudes::AmplitudeSet amp;
    amp.x0 = lambda_a * lambda_b * effective_time * exch;
    amp.ea2 = lambda_a * lambda_a * effective_time * emit;
    amp.eb2 = lambda_b * lambda_b * effective_time * emit;
    amp.eab = 0.0;  // the e^{-i Omega(tau_A - tau_B)} phase averages to zero
    amp.x2 = std::norm(amp.x0) + amp.ea2 * amp.eb2;
    amp.provenance.path = amplitudes::Path::FrequencyDomain;
    amp.provenance.note = "rindler residue-series rates x lambda^2 t_eff";
    amp.validate();
    return amp;
}

}  // namespace harvest::rindler
