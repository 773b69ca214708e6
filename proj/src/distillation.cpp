#include "harvest/distillation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace harvest::distill {

namespace {

constexpr double kNegativityFloor = 1e-12;
constexpr double kSuccessFloor = 1e-30;

double max_bell_fidelity(const TwoQubitState& rho, int* which = nullptr) {
    const auto f = two_qubit::bell_fidelities(rho);
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (f[i] > f[best]) best = i;
    if (which) *which = best;
    return f[best];
}

// Post-filter fidelity without building intermediate states; used by the
// optimizer's inner loop.
double filtered_fidelity(const TwoQubitState& rho, double ea, double eb) {
    const Eigen::Vector4d d(ea * eb, 1.0, eb, ea);  // {dd, uu, ud, du}
    two_qubit::Matrix4 m = rho.matrix;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) *= d(i) * d(j);
    const double p = m.trace().real();
    if (p < kSuccessFloor) return 0.0;
    TwoQubitState s;
    s.matrix = m / p;
    return max_bell_fidelity(s);
}

}  // namespace

void FilterParams::validate() const {
    if (!(eta_a > 0) || eta_a > 1 || !(eta_b > 0) || eta_b > 1)
        throw InvalidInputError("filter: eta must lie in (0, 1]");
}

FilterOutcome local_filter(const TwoQubitState& rho, const FilterParams& f) {
    f.validate();
    rho.validate();
    const Eigen::Vector4d d(f.eta_a * f.eta_b, 1.0, f.eta_b, f.eta_a);
    two_qubit::Matrix4 m = rho.matrix;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) *= d(i) * d(j);
    const double p = m.trace().real();
    if (p < kSuccessFloor)
        throw FilteredToNothingError(
            "local_filter: success probability below 1e-30");
    FilterOutcome out;
    out.state.matrix = m / p;
    out.state.normalized = true;
    out.state.raw_trace = p;
    out.state.source = "filtered";
    out.p_success = p;
    return out;
}

FilterParams optimize_filter(const TwoQubitState& rho) {
    rho.validate();
    if (two_qubit::negativity(rho) <= kNegativityFloor)
        throw NotDistillableError(
            "optimize_filter: state is PPT, hence separable and not "
            "distillable");

    // coarse log grid over (eta_a, eta_b)
    constexpr int kGrid = 49;
    constexpr double kLogMin = -8.0;  // eta = 10^-8 .. 1
    auto eta_of = [&](int i) {
        return std::pow(10.0, kLogMin * (1.0 - double(i) / (kGrid - 1)));
    };
    double best_f = -1.0;
    int bi = kGrid - 1, bj = kGrid - 1;
    for (int i = 0; i < kGrid; ++i) {
        for (int j = 0; j < kGrid; ++j) {
            const double f = filtered_fidelity(rho, eta_of(i), eta_of(j));
            if (f > best_f) {
                best_f = f;
                bi = i;
                bj = j;
            }
        }
    }

    // golden-section sweeps in log space, one coordinate at a time
    constexpr double kGgolden = 0.6180339887498949;
    double la = std::log10(eta_of(bi)), lb = std::log10(eta_of(bj));
    const double step = -kLogMin / (kGrid - 1);
    auto refine = [&](double center, double other, bool first) {
        double lo = std::max(kLogMin, center - 1.5 * step);
        double hi = std::min(0.0, center + 1.5 * step);
        double x1 = hi - kGolden * (hi - lo);
        double x2 = lo + kGolden * (hi - lo);
        auto eval = [&](double x) {
            const double ea = first ? std::pow(10.0, x) : std::pow(10.0, other);
            const double eb = first ? std::pow(10.0, other) : std::pow(10.0, x);
            return filtered_fidelity(rho, ea, eb);
        };
        double f1 = eval(x1), f2 = eval(x2);
        for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kGolden * (hi - lo);
                f2 = eval(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kGolden * (hi - lo);
                f1 = eval(x1);
            }
        }
        return 0.5 * (lo + hi);
    };
    for (int sweep = 0; sweep < 3; ++sweep) {
        la = refine(la, lb, true);
        lb = refine(lb, la, false);
    }

    FilterParams out;
    out.eta_a = std::min(1.0, std::pow(10.0, la));
    out.eta_b = std::min(1.0, std::pow(10.0, lb));
    // keep the identity when filtering cannot improve the fidelity
    const double f_id = filtered_fidelity(rho, 1.0, 1.0);
    if (filtered_fidelity(rho, out.eta_a, out.eta_b) <= f_id + 1e-12) {
        out.eta_a = 1.0;
        out.eta_b = 1.0;
    }
    return out;
}

std::array<double, 4> bell_projection(const TwoQubitState& rho) {
    return two_qubit::bell_fidelities(rho);
}

TwoQubitState bell_diagonal_state(const std::array<double, 4>& q) {
    two_qubit::Matrix4 m = two_qubit::Matrix4::Zero();
    for (int b = 0; b < 4; ++b) {
        const Eigen::Vector4cd v = two_qubit::bell_vector(static_cast<Bell>(b));
        m += q[b] * (v * v.adjoint());
    }
    TwoQubitState s;
    s.matrix = m;
    s.normalized = true;
    s.raw_trace = m.trace().real();
    s.source = "bell-diagonal";
    return s;
}

RecurrenceOutcome recurrence_step(const TwoQubitState& rho) {
    rho.validate();
    const auto q = bell_projection(rho);
    const double k0 = q[0] + q[1];  // phi sector (amplitude bit 0)
    const double k1 = q[2] + q[3];
    const double p = k0 * k0 + k1 * k1;
    std::array<double, 4> out{q[0] * q[0] + q[1] * q[1], 2.0 * q[0] * q[1],
                              q[2] * q[2] + q[3] * q[3], 2.0 * q[2] * q[3]};
    for (double& v : out) v /= p;
    RecurrenceOutcome r{bell_diagonal_state(out), p};
    r.state.source = "recurrence";
    return r;
}

DistillTrace distill_to_target(const TwoQubitState& rho, double f_target,
                               int max_rounds, double initial_pairs) {
    if (!(f_target > 0.5) || !(f_target < 1.0))
        throw InvalidInputError("distill: f_target must lie in (1/2, 1)");
    if (max_rounds < 0) throw InvalidInputError("distill: max_rounds < 0");
    rho.validate();
    if (two_qubit::negativity(rho) <= kNegativityFloor)
        throw NotDistillableError(
            "distill: state is PPT, hence not distillable");

    DistillTrace trace;
    trace.filter = optimize_filter(rho);
    const FilterOutcome filtered = local_filter(rho, trace.filter);

    int dominant = 0;
    double fidelity = max_bell_fidelity(filtered.state, &dominant);
    trace.target = static_cast<Bell>(dominant);

    double pairs = initial_pairs * filtered.p_success;
    trace.rounds.push_back({0, fidelity, filtered.p_success, pairs});

    for (int round = 1; fidelity < f_target && round <= max_rounds; ++round) {
        // isotropic twirl about the dominant component, then one recurrence
        // round; on Werner input the fidelity map is the classic
        //   F' = (F^2 + G^2) / (F^2 + 2FG + 5G^2),  G = (1-F)/3
        const double g = (1.0 - fidelity) / 3.0;
        const TwoQubitState werner =
            bell_diagonal_state({fidelity, g, g, g});
        const RecurrenceOutcome out = recurrence_step(werner);
        fidelity = max_bell_fidelity(out.state);
        pairs = 0.5 * pairs * out.p_success;
        trace.rounds.push_back({round, fidelity, out.p_success, pairs});
    }
    trace.reached = fidelity >= f_target;
    return trace;
}

TwoQubitState werner_state(double fidelity) {
    if (fidelity < 0.0 || fidelity > 1.0)
        throw InvalidInputError("werner_state: fidelity must lie in [0, 1]");
    const double g = (1.0 - fidelity) / 3.0;
    std::array<double, 4> q{g, g, g, g};
    q[static_cast<int>(Bell::PsiMinus)] = fidelity;
    TwoQubitState s = bell_diagonal_state(q);
    s.source = "werner";
    return s;
}

TwoQubitState werner_state_mixing(double p) {
    if (p < -1.0 / 3.0 || p > 1.0)
        throw InvalidInputError("werner_state_mixing: p must lie in [-1/3, 1]");
    return werner_state(p + (1.0 - p) / 4.0);
}

void save_trace_csv(std::ostream& out, const DistillTrace& trace) {
    out << "round,fidelity,p_success,pairs_remaining\n";
    char buf[128];
    for (const auto& r : trace.rounds) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.round,
                      r.fidelity, r.p_success, r.pairs_remaining);
        out << buf;
    }
}

}  // namespace harvest::distill
