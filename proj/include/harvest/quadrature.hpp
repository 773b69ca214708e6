#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "harvest/errors.hpp"

namespace harvest::quad {

using Complex = std::complex<double>;

enum class TailStrategy {
    PartitionAtZeros,  // plain partial sums over oscillation cells
    Accelerated        // Wynn-epsilon acceleration of the partial sums
};

struct QuadratureSettings {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 20000;
    TailStrategy tail_strategy = TailStrategy::Accelerated;
    // Regulator ladder for the i-epsilon prescription: rungs
    // eps_k = regulator_base * regulator_ratio^k (in units of the window
    // duration), extrapolated to zero with a degree extrapolation_orders-1
    // polynomial.
    int extrapolation_orders = 5;
    double regulator_base = 1e-2;
    double regulator_ratio = 0.5;

    void validate() const;
};

struct IntegralResult {
    Complex value{};
    double error = 0.0;  // estimated absolute error
    long evaluations = 0;
    bool converged = true;
};

// Adaptive Gauss-Kronrod (G7,K15) on [a,b]. Throws ConvergenceError (with the
// best estimate attached) if the tolerance is not met within
// max_subdivisions interval splits.
IntegralResult integrate_1d(const std::function<Complex(double)>& f, double a,
                            double b, const QuadratureSettings& s);

// Tensorized adaptive G7K15 over the rectangle [ax,bx] x [ay,by]; boxes are
// bisected along their longer side, worst error first.
IntegralResult integrate_2d(const std::function<Complex(double, double)>& f,
                            double ax, double bx, double ay, double by,
                            const QuadratureSettings& s);

// Semi-infinite integral over [a, inf), partitioned into cells of the given
// width (callers pass the oscillation half-period). Cell sums are either
// accumulated directly or fed through the Wynn epsilon algorithm, per
// s.tail_strategy.
IntegralResult integrate_semi_infinite(const std::function<Complex(double)>& f,
                                       double a, double cell,
                                       const QuadratureSettings& s);

struct ExtrapolationResult {
    Complex value{};
    double error = 0.0;
    bool reliable = true;  // false when the correction sequence is non-monotone
};

// Polynomial (Neville) extrapolation of (eps, value) samples to eps = 0.
// Requires >= 3 rungs in geometric progression.
ExtrapolationResult extrapolate_regulator(
    std::span<const std::pair<double, Complex>> values);

namespace detail {

// (G7,K15) nodes and weights, full 15-point form. Gauss weights are zero at
// the Kronrod-only nodes.
template <typename Real>
struct GK15 {
    static constexpr int n = 15;
    static constexpr Real node[8] = {
        Real(0.991455371120812639206854697526329L),
        Real(0.949107912342758524526189684047851L),
        Real(0.864864423359769072789712788640926L),
        Real(0.741531185599394439863864773280788L),
        Real(0.586087235467691130294144838258730L),
        Real(0.405845151377397166906606412076961L),
        Real(0.207784955007898467600689403773245L),
        Real(0.0L)};
    static constexpr Real wk[8] = {
        Real(0.022935322010529224963732008058970L),
        Real(0.063092092629978553290700663189204L),
        Real(0.104790010322250183839876322541518L),
        Real(0.140653259715525918745189590510238L),
        Real(0.169004726639267902826583426598550L),
        Real(0.190350578064785409913256402421014L),
        Real(0.204432940075298892414161999234649L),
        Real(0.209482141084727828012999174891714L)};
    // Gauss weights attach to node[1], node[3], node[5], node[7].
    static constexpr Real wg[4] = {
        Real(0.129484966168869693270611432679082L),
        Real(0.279705391489276667901467771423780L),
        Real(0.381830050505118944950369775488975L),
        Real(0.417959183673469387755102040816327L)};
};

template <typename Real, typename F>
void gk15_panel(const F& f, Real a, Real b, std::complex<Real>& k15,
                Real& err) {
    using C = std::complex<Real>;
    using R = GK15<Real>;
    const Real mid = (a + b) / 2;
    const Real hw = (b - a) / 2;
    C fc = f(mid);
    C sk = R::wk[7] * fc;
    C sg = R::wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const Real dx = hw * R::node[i];
        const C fsum = f(mid - dx) + f(mid + dx);
        sk += R::wk[i] * fsum;
        if (i % 2 == 1) sg += R::wg[i / 2] * fsum;
    }
    k15 = sk * hw;
    const C g7 = sg * hw;
    const Real diff = std::abs(k15 - g7);
    // QUADPACK-style sharpened estimate, floored by the raw rule difference
    // scaled down (the G7 error dominates the difference).
    Real sharp = Real(200) * diff;
    sharp *= std::sqrt(sharp);
    err = std::max(sharp, diff * Real(1e-4));
}

// Plain adaptive driver usable at any precision; used by the double-facing
// wrappers and by the long-double Rindler rate oracle.
template <typename Real, typename F>
IntegralResult adaptive_gk(const F& f, Real a, Real b, Real rel_tol,
                           Real abs_tol, int max_subdivisions) {
    using C = std::complex<Real>;
    struct Seg {
        Real a, b;
        C val;
        Real err;
    };
    std::vector<Seg> segs;
    std::vector<char> live;
    segs.reserve(256);
    auto push = [&](Real x0, Real x1) {
        C v;
        Real e;
        gk15_panel<Real>(f, x0, x1, v, e);
        segs.push_back({x0, x1, v, e});
        live.push_back(1);
    };

    // Worst-first, ties broken by creation order: fully deterministic.
    struct Worse {
        const std::vector<Seg>* s;
        bool operator()(std::size_t i, std::size_t j) const {
            const Real ei = (*s)[i].err;
            const Real ej = (*s)[j].err;
            if (ei != ej) return ei < ej;
            return i > j;
        }
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, Worse> heap{
        Worse{&segs}};

    push(a, b);
    heap.push(0);

    long evals = 15;
    int splits = 0;
    bool converged = false;
    C total = segs[0].val;
    Real toterr = segs[0].err;

    while (true) {
        const Real target = std::max(abs_tol, rel_tol * std::abs(total));
        if (toterr <= target) {
            converged = true;
            break;
        }
        if (splits >= max_subdivisions || heap.empty()) break;
        const std::size_t idx = heap.top();
        heap.pop();
        const Seg seg = segs[idx];
        const Real width = seg.b - seg.a;
        const Real floor_w =
            std::numeric_limits<Real>::epsilon() * Real(64) *
            std::max(Real(1), std::max(std::abs(seg.a), std::abs(seg.b)));
        if (width <= floor_w) continue;  // cannot refine further
        live[idx] = 0;
        total -= seg.val;
        toterr -= seg.err;
        const Real m = (seg.a + seg.b) / 2;
        push(seg.a, m);
        heap.push(segs.size() - 1);
        push(m, seg.b);
        heap.push(segs.size() - 1);
        total += segs[segs.size() - 2].val + segs[segs.size() - 1].val;
        toterr += segs[segs.size() - 2].err + segs[segs.size() - 1].err;
        evals += 30;
        ++splits;
    }

    // Recompute the final sums in creation order to shed incremental drift.
    total = C{};
    toterr = Real(0);
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (live[i]) {
            total += segs[i].val;
            toterr += segs[i].err;
        }
    }

    IntegralResult r;
    r.value = Complex(static_cast<double>(total.real()),
                      static_cast<double>(total.imag()));
    r.error = static_cast<double>(toterr);
    r.evaluations = evals;
    r.converged = converged;
    return r;
}

}  // namespace detail

}  // namespace harvest::quad
