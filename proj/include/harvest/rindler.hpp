#pragma once

#include "harvest/amplitudes.hpp"
#include "harvest/errors.hpp"
#include "harvest/quadrature.hpp"

namespace harvest::rindler {

// Mirror hyperbolic trajectories in the complementary wedges, acceleration
// a = 2/L. Both atoms couple for all proper time, so emission and exchange
// grow linearly with the total proper-time extent; everything here is a rate
// per unit proper time, which is exactly the ratio the closed form fixes.
struct RindlerScenario {
    double separation = 1.0;  // wedge scale L
    double gap = 1.0;         // Omega
    int series_terms = 50;
    void validate() const;
};

// (Omega/2pi) sum_{n>=1} e^{-pi n Omega L}; the poles at
// dtau = i eps + i pi n L, n = -1, -2, ...
double emission_rate(const RindlerScenario& s);
double emission_rate_closed(const RindlerScenario& s);

// (Omega/2pi) sum_{n>=0} e^{-pi (n+1/2) Omega L}; the poles at
// sigma = i eps + i pi (n+1/2) L, n = 0, 1, ...
double exchange_amplitude_rate(const RindlerScenario& s);
double exchange_amplitude_rate_closed(const RindlerScenario& s);

// exchange/emission = e^{pi Omega L / 2}, exactly.
double analytic_ratio(const RindlerScenario& s);

struct RateQuadrature {
    double emission = 0.0;
    double exchange = 0.0;
    double err_emission = 0.0;
    double err_exchange = 0.0;
};

// Brute-force check of the residue series: the reduced 1-D rate integrals
// over a window of +-span*L in the difference/sum variable, on a regulator
// ladder extrapolated to eps -> 0. Extended precision internally; the
// emission integrand cancels ~12 digits at Omega L = 8.
RateQuadrature rates_by_quadrature(const RindlerScenario& s, double span = 20.0);

// Amplitude set for an accelerated pair watched for an effective proper time
// per atom: X0 and the emission norms scale with lambda^2 * t_eff, the
// emitted photons never overlap (<E_A|E_B> = 0 for eternal coupling).
amplitudes::AmplitudeSet rindler_amplitudes(const RindlerScenario& s,
                                            double lambda_a, double lambda_b,
                                            double effective_time);

}  // namespace harvest::rindler
