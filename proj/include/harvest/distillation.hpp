#pragma once

#include <array>
#include <vector>

#include "harvest/two_qubit.hpp"

namespace harvest::distill {

using two_qubit::Bell;
using two_qubit::TwoQubitState;

// Local Procrustean filter F = diag(eta, 1) per side in the {down, up}
// basis: attenuates the ground component to balance the Schmidt weights.
struct FilterParams {
    double eta_a = 1.0;
    double eta_b = 1.0;
    void validate() const;
};

struct FilterOutcome {
    TwoQubitState state;
    double p_success = 1.0;
};

FilterOutcome local_filter(const TwoQubitState& rho, const FilterParams& f);

// Deterministic log-grid search plus golden-section refinement of the
// post-filter Bell fidelity (max over the four Bell states). Throws
// NotDistillableError on PPT input.
FilterParams optimize_filter(const TwoQubitState& rho);

// One two-pair recurrence round on the Bell-diagonal projection of rho:
// bilateral CNOT, z-measurement of the target pair, keep on coincidence.
// With Bell weights q = (phi+, phi-, psi+, psi-),
//   p_success = (q0+q1)^2 + (q2+q3)^2
//   q' = (q0^2+q1^2, 2 q0 q1, q2^2+q3^2, 2 q2 q3) / p_success.
struct RecurrenceOutcome {
    TwoQubitState state;
    double p_success = 1.0;
};
RecurrenceOutcome recurrence_step(const TwoQubitState& rho);

struct DistillRound {
    int round = 0;  // 0 = after local filtering
    double fidelity = 0.0;
    double p_success = 1.0;
    double pairs_remaining = 0.0;
};

struct DistillTrace {
    std::vector<DistillRound> rounds;
    Bell target = Bell::PhiPlus;  // dominant Bell component after filtering
    FilterParams filter;
    bool reached = false;

    double final_fidelity() const {
        return rounds.empty() ? 0.0 : rounds.back().fidelity;
    }
};

// Procrustean filter once, then recurrence rounds until the fidelity reaches
// f_target or max_rounds is exhausted (partial trace, reached = false).
// Before each round the ensemble is twirled to the isotropic (Werner) form
// about the dominant Bell state -- fidelity-preserving, and it keeps the
// round-to-round map monotone above one half; the bare Bell-diagonal
// recurrence lets weight pile up in the conjugate phase component and can
// diverge. Yield bookkeeping is in expected pairs: filtering keeps a p_f
// fraction, each round consumes two pairs and keeps p_k of the survivors.
DistillTrace distill_to_target(const TwoQubitState& rho, double f_target,
                               int max_rounds, double initial_pairs = 1.0e6);

// Bell-diagonal helpers (tensor-basis construction, paper-basis storage).
TwoQubitState bell_diagonal_state(const std::array<double, 4>& q);
std::array<double, 4> bell_projection(const TwoQubitState& rho);

// Werner state with the given fidelity to psi-: F |psi-><psi-| +
// (1-F)/3 (I - |psi-><psi-|). In the mixing parametrization
// p |psi-><psi-| + (1-p) I/4 this is p = (4F-1)/3; NPT exactly for p > 1/3.
TwoQubitState werner_state(double fidelity);
TwoQubitState werner_state_mixing(double p);

void save_trace_csv(std::ostream& out, const DistillTrace& trace);

}  // namespace harvest::distill
