#pragma once

#include <complex>
#include <optional>
#include <string>

#include "harvest/correlators.hpp"
#include "harvest/quadrature.hpp"
#include "harvest/windows.hpp"

namespace harvest::amplitudes {

using Complex = std::complex<double>;

enum class Atom { A, B };
enum class OpSign { Plus, Minus };

enum class Path { TimeDomain, FrequencyDomain, Both };

struct AtomParams {
    double gap = 1.0;  // energy gap Omega
    windows::WindowFunction window;
};

struct ScenarioConfig {
    AtomParams atom_a;
    AtomParams atom_b;
    correlators::GeometryKind geometry = correlators::GeometryKind::StaticPair;
    double separation = 1.0;  // L
    Path path = Path::FrequencyDomain;
    quad::QuadratureSettings quadrature;
    // T > L puts the interaction regions in causal contact; Eq.-(3)
    // factorization no longer holds and static runs refuse unless overridden.
    bool allow_causal_contact = false;

    const AtomParams& atom(Atom which) const {
        return which == Atom::A ? atom_a : atom_b;
    }
    bool windows_causally_safe() const;
    void validate() const;
};

struct SmearedResult {
    Complex value{};
    double error = 0.0;
};

// G = <0| Phi_i^{s_i} Phi_j^{s_j} |0>
//   = int dt dt' eps_i(t) eps_j(t') e^{i(s_i W_i t + s_j W_j t')} D+(x_i,t; x_j,t')
// evaluated either by regulator-extrapolated double time quadrature or
// through the spectral kernel as
//   (1/4pi^2) int_0^inf k(w) eps_i~(s_i W_i - w) eps_j~(s_j W_j + w) dw.
SmearedResult smeared_two_point(Atom i, OpSign si, Atom j, OpSign sj,
                                const ScenarioConfig& cfg);
SmearedResult smeared_two_point(Atom i, OpSign si, Atom j, OpSign sj,
                                const ScenarioConfig& cfg, Path path);

struct Provenance {
    Path path = Path::FrequencyDomain;
    double err_x0 = 0, err_x2 = 0, err_ea2 = 0, err_eb2 = 0, err_eab = 0;
    // |time - frequency| per component when both paths ran
    double delta_x0 = 0, delta_ea2 = 0, delta_eb2 = 0, delta_eab = 0;
    bool cross_checked = false;
    // the time-ordered self-energy renormalization of the ground-state
    // population is not computed; trace normalization absorbs it
    bool self_energy_absorbed = true;
    bool causal_contact = false;
    std::string note;
};

// The five second-order quantities entering the reduced density matrix.
struct AmplitudeSet {
    Complex x0{};       // <0|X_AB>
    double x2 = 0.0;    // |X_AB|^2
    double ea2 = 0.0;   // |E_A|^2
    double eb2 = 0.0;   // |E_B|^2
    Complex eab{};      // <E_A|E_B>
    Provenance provenance;

    void validate() const;
};

AmplitudeSet assemble_amplitudes(const ScenarioConfig& cfg);

// |<0|X_AB>| / sqrt(|E_A|^2 |E_B|^2); > 1 exactly when Eq.-(7)-type
// inseparability holds.
double harvesting_ratio(const AmplitudeSet& amp);

struct TransitionProbabilities {
    double excitation = 0.0;    // P(down -> up | vacuum)
    double deexcitation = 0.0;  // P(up -> down | vacuum)
    double err_excitation = 0.0;
    double err_deexcitation = 0.0;
};

TransitionProbabilities transition_probabilities(Atom which,
                                                 const ScenarioConfig& cfg);

}  // namespace harvest::amplitudes
