#include "harvest/quadrature.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace harvest::quad {

void QuadratureSettings::validate() const {
    if (!(rel_tol > 0)) throw InvalidInputError("quadrature: rel_tol must be > 0");
    if (!(abs_tol >= 0)) throw InvalidInputError("quadrature: abs_tol must be >= 0");
    if (max_subdivisions < 1)
        throw InvalidInputError("quadrature: max_subdivisions must be >= 1");
    if (extrapolation_orders < 3)
        throw InvalidInputError("quadrature: extrapolation_orders must be >= 3");
    if (!(regulator_base > 0) || !(regulator_ratio > 0) || regulator_ratio >= 1)
        throw InvalidInputError("quadrature: regulator ladder must be a decreasing geometric progression");
}

IntegralResult integrate_1d(const std::function<Complex(double)>& f, double a,
                            double b, const QuadratureSettings& s) {
    s.validate();
    if (!(a <= b)) throw InvalidInputError("integrate_1d: requires a <= b");
    IntegralResult r = detail::adaptive_gk<double>(f, a, b, s.rel_tol, s.abs_tol,
                                                   s.max_subdivisions);
    if (!r.converged) {
        std::ostringstream msg;
        msg << "integrate_1d: no convergence after " << s.max_subdivisions
            << " subdivisions (err=" << r.error << ")";
        throw ConvergenceError(msg.str(), r.value, r.error);
    }
    return r;
}

namespace {

struct Box {
    double ax, bx, ay, by;
    Complex val;
    double err;
};

// Tensor (G7,K15) x (G7,K15) panel on a box.
template <typename F>
void gk15_box(const F& f, const Box& dom, Complex& k, double& err) {
    using R = detail::GK15<double>;
    double xs[15], ys[15], wkx[15], wgx[15];
    const double mx = 0.5 * (dom.ax + dom.bx), hx = 0.5 * (dom.bx - dom.ax);
    const double my = 0.5 * (dom.ay + dom.by), hy = 0.5 * (dom.by - dom.ay);
    for (int i = 0; i < 7; ++i) {
        xs[i] = mx - hx * R::node[i];
        xs[14 - i] = mx + hx * R::node[i];
        ys[i] = my - hy * R::node[i];
        ys[14 - i] = my + hy * R::node[i];
        wkx[i] = wkx[14 - i] = R::wk[i];
        wgx[i] = wgx[14 - i] = (i % 2 == 1) ? R::wg[i / 2] : 0.0;
    }
    xs[7] = mx;
    ys[7] = my;
    wkx[7] = R::wk[7];
    wgx[7] = R::wg[3];

    Complex kk{}, gg{};
    for (int i = 0; i < 15; ++i) {
        Complex row_k{}, row_g{};
        for (int j = 0; j < 15; ++j) {
            const Complex v = f(xs[i], ys[j]);
            row_k += wkx[j] * v;
            row_g += wgx[j] * v;
        }
        kk += wkx[i] * row_k;
        gg += wgx[i] * row_g;
    }
    k = kk * (hx * hy);
    const Complex g2 = gg * (hx * hy);
    const double diff = std::abs(k - g2);
    double sharp = 200.0 * diff;
    sharp *= std::sqrt(sharp);
    err = std::max(sharp, diff * 1e-4);
}

}  // namespace

IntegralResult integrate_2d(const std::function<Complex(double, double)>& f,
                            double ax, double bx, double ay, double by,
                            const QuadratureSettings& s) {
    s.validate();
    if (!(ax <= bx) || !(ay <= by))
        throw InvalidInputError("integrate_2d: degenerate rectangle");

    std::vector<Box> boxes;
    std::vector<char> live;
    boxes.reserve(512);
    long evals = 0;
    auto push = [&](double x0, double x1, double y0, double y1) {
        Box b{x0, x1, y0, y1, {}, 0.0};
        gk15_box(f, b, b.val, b.err);
        boxes.push_back(b);
        live.push_back(1);
        evals += 225;
    };

    struct Worse {
        const std::vector<Box>* s;
        bool operator()(std::size_t i, std::size_t j) const {
            const double ei = (*s)[i].err, ej = (*s)[j].err;
            if (ei != ej) return ei < ej;
            return i > j;
        }
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, Worse> heap{
        Worse{&boxes}};

    push(ax, bx, ay, by);
    heap.push(0);
    Complex total = boxes[0].val;
    double toterr = boxes[0].err;
    int splits = 0;
    bool converged = false;

    while (true) {
        const double target = std::max(s.abs_tol, s.rel_tol * std::abs(total));
        if (toterr <= target) {
            converged = true;
            break;
        }
        if (splits >= s.max_subdivisions || heap.empty()) break;
        const std::size_t idx = heap.top();
        heap.pop();
        const Box box = boxes[idx];
        const double wx = box.bx - box.ax, wy = box.by - box.ay;
        const double floor_w =
            std::numeric_limits<double>::epsilon() * 64.0 *
            std::max({1.0, std::abs(box.ax), std::abs(box.bx), std::abs(box.ay),
                      std::abs(box.by)});
        if (std::max(wx, wy) <= floor_w) continue;
        live[idx] = 0;
        total -= box.val;
        toterr -= box.err;
        if (wx >= wy) {
            const double m = 0.5 * (box.ax + box.bx);
            push(box.ax, m, box.ay, box.by);
            heap.push(boxes.size() - 1);
            push(m, box.bx, box.ay, box.by);
            heap.push(boxes.size() - 1);
        } else {
            const double m = 0.5 * (box.ay + box.by);
            push(box.ax, box.bx, box.ay, m);
            heap.push(boxes.size() - 1);
            push(box.ax, box.bx, m, box.by);
            heap.push(boxes.size() - 1);
        }
        total += boxes[boxes.size() - 2].val + boxes[boxes.size() - 1].val;
        toterr += boxes[boxes.size() - 2].err + boxes[boxes.size() - 1].err;
        ++splits;
    }

    total = Complex{};
    toterr = 0.0;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        if (live[i]) {
            total += boxes[i].val;
            toterr += boxes[i].err;
        }
    }

    IntegralResult r{total, toterr, evals, converged};
    if (!r.converged) {
        std::ostringstream msg;
        msg << "integrate_2d: no convergence after " << s.max_subdivisions
            << " box splits (err=" << r.error << ")";
        throw ConvergenceError(msg.str(), r.value, r.error);
    }
    return r;
}

namespace {

// Wynn epsilon table over complex partial sums. Returns the best accelerated
// estimate for the sequence seen so far.
class WynnEpsilon {
public:
    void add(Complex s) {
        std::vector<Complex> next(row_.size() + 1);
        next[0] = s;
        for (std::size_t k = 1; k < next.size(); ++k) {
            const Complex denom = next[k - 1] - row_[k - 1];
            const Complex two_back = (k >= 2) ? row_[k - 2] : Complex{};
            if (std::abs(denom) < 1e-300) {
                next.resize(k);
                break;
            }
            next[k] = two_back + 1.0 / denom;
        }
        row_ = std::move(next);
        // best estimates live in the even columns; take the highest even one
        const std::size_t top = (row_.size() - 1) - ((row_.size() - 1) % 2);
        prev_best_ = best_;
        best_ = row_[top];
        have_prev_ = have_best_;
        have_best_ = true;
    }
    bool settled(double tol) const {
        return have_prev_ && std::abs(best_ - prev_best_) <= tol;
    }
    Complex best() const { return best_; }
    double change() const {
        return have_prev_ ? std::abs(best_ - prev_best_)
                          : std::numeric_limits<double>::infinity();
    }

private:
    std::vector<Complex> row_;  // latest anti-diagonal of the eps table
    Complex best_{}, prev_best_{};
    bool have_best_ = false, have_prev_ = false;
};

}  // namespace

IntegralResult integrate_semi_infinite(const std::function<Complex(double)>& f,
                                       double a, double cell,
                                       const QuadratureSettings& s) {
    s.validate();
    if (!(cell > 0)) throw InvalidInputError("integrate_semi_infinite: cell must be > 0");

    QuadratureSettings inner = s;
    inner.abs_tol = s.abs_tol * 0.05;

    const bool accel = s.tail_strategy == TailStrategy::Accelerated;
    const int max_cells = accel ? 4096 : 200000;

    Complex sum{};
    double cell_err = 0.0;
    WynnEpsilon eps;
    int quiet = 0;
    long evals = 0;

    for (int k = 0; k < max_cells; ++k) {
        const double x0 = a + k * cell;
        const double x1 = x0 + cell;
        const IntegralResult ck = integrate_1d(f, x0, x1, inner);
        sum += ck.value;
        cell_err += ck.error;
        evals += ck.evaluations;

        const double tol = std::max(s.abs_tol, s.rel_tol * std::abs(sum));
        if (accel) {
            eps.add(sum);
            if (k >= 6 && eps.settled(tol)) {
                if (++quiet >= 2) {
                    return {eps.best(), eps.change() + cell_err, evals, true};
                }
            } else {
                quiet = 0;
            }
        } else {
            if (std::abs(ck.value) <= 0.5 * tol) {
                if (++quiet >= 3) return {sum, cell_err, evals, true};
            } else {
                quiet = 0;
            }
        }
    }
    const Complex best = accel ? eps.best() : sum;
    throw ConvergenceError("integrate_semi_infinite: tail did not settle", best,
                           cell_err);
}

ExtrapolationResult extrapolate_regulator(
    std::span<const std::pair<double, Complex>> values) {
    const std::size_t n = values.size();
    if (n < 3)
        throw InvalidInputError(
            "extrapolate_regulator: need >= 3 regulator rungs");
    for (std::size_t i = 0; i + 2 < n; ++i) {
        const double r1 = values[i + 1].first / values[i].first;
        const double r2 = values[i + 2].first / values[i + 1].first;
        if (!(values[i].first > 0) || !(r1 > 0) || !(r1 < 1) ||
            std::abs(r1 - r2) > 0.1 * r1)
            throw InvalidInputError(
                "extrapolate_regulator: rungs must form a decreasing geometric "
                "progression");
    }

    // Neville tableau evaluated at eps = 0; track the diagonal corrections.
    std::vector<Complex> t(n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = values[i].first;
        t[i] = values[i].second;
    }
    std::vector<double> corrections;
    Complex diag_prev = t[0];
    for (std::size_t lev = 1; lev < n; ++lev) {
        for (std::size_t i = 0; i + lev < n; ++i) {
            t[i] = ((0.0 - x[i + lev]) * t[i] - (0.0 - x[i]) * t[i + 1]) /
                   (x[i] - x[i + lev]);
        }
        corrections.push_back(std::abs(t[0] - diag_prev));
        diag_prev = t[0];
    }

    ExtrapolationResult r;
    r.value = t[0];
    r.error = corrections.empty() ? 0.0 : corrections.back();
    r.reliable = true;
    if (corrections.size() >= 2) {
        const double last = corrections[corrections.size() - 1];
        const double prev = corrections[corrections.size() - 2];
        if (last > prev * 1.5 && last > 1e-15 * std::abs(r.value))
            r.reliable = false;
    }
    return r;
}

}  // namespace harvest::quad
