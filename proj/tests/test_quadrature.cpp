#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <numbers>
#include <vector>

#include "harvest/quadrature.hpp"

using namespace harvest;
using quad::Complex;
using quad::QuadratureSettings;

namespace {

const double kPi = std::numbers::pi;

struct Case {
    const char* name;
    std::function<Complex(double)> f;
    double a, b;
    Complex truth;
};

// Antiderivative of t^n / (t - z)^2 along the real axis (z off the axis):
// substitute u = t - z and expand (u + z)^n.
Complex poly_over_pole_antideriv(int n, Complex z, double t) {
    const Complex u = t - z;
    Complex sum = 0.0;
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) binom = binom * double(n - k + 1) / double(k);
        const Complex c = binom * std::pow(z, double(n - k));
        if (k == 1)
            sum += c * std::log(u);
        else
            sum += c * std::pow(u, double(k - 1)) / double(k - 1);
    }
    return sum;
}

}  // namespace

TEST_CASE("closed-form regression corpus: values and error bounds") {
    QuadratureSettings s;
    std::vector<Case> corpus = {
        {"x^2 on [0,1]", [](double x) { return Complex(x * x, 0); }, 0, 1,
         Complex(1.0 / 3.0, 0)},
        {"const", [](double) { return Complex(2.5, 0); }, -1, 3, Complex(10, 0)},
        {"x^7", [](double x) { return Complex(std::pow(x, 7), 0); }, 0, 2,
         Complex(32.0, 0)},
        {"sin", [](double x) { return Complex(std::sin(x), 0); }, 0, kPi,
         Complex(2, 0)},
        {"cos(10x)", [](double x) { return Complex(std::cos(10 * x), 0); }, 0, 1,
         Complex(std::sin(10.0) / 10.0, 0)},
        {"exp", [](double x) { return Complex(std::exp(x), 0); }, 0, 1,
         Complex(std::exp(1.0) - 1.0, 0)},
        {"exp(-x^2)", [](double x) { return Complex(std::exp(-x * x), 0); }, -6,
         6, Complex(std::sqrt(kPi) * std::erf(6.0), 0)},
        {"1/(1+x^2)", [](double x) { return Complex(1.0 / (1.0 + x * x), 0); },
         -5, 5, Complex(2 * std::atan(5.0), 0)},
        {"sqrt-free cusp x|x|", [](double x) { return Complex(x * std::abs(x), 0); },
         -1, 2, Complex((8.0 - 1.0) / 3.0 * 1.0, 0)},
        {"x sin(20x)",
         [](double x) { return Complex(x * std::sin(20 * x), 0); }, 0, 2,
         Complex(std::sin(40.0) / 400.0 - 2 * std::cos(40.0) / 20.0, 0)},
        {"log-smooth exp(ix)",
         [](double x) { return std::exp(Complex(0, x)); }, 0, 3,
         (std::exp(Complex(0, 3)) - 1.0) / Complex(0, 1)},
        {"e^{ix} x^2",
         [](double x) { return x * x * std::exp(Complex(0, x)); }, -1, 1,
         // int x^2 e^{ix} = (x^2 - 2) sin x + 2 x cos x + i(-x^2 cos x + 2x sin x - 2 cos x) eval
         Complex(2.0 * ((1.0 - 2.0) * std::sin(1.0) + 2 * std::cos(1.0)) -
                     0.0,
                 0.0)},
        {"cosh", [](double x) { return Complex(std::cosh(x), 0); }, -2, 2,
         Complex(2 * std::sinh(2.0), 0)},
        {"gauss peak",
         [](double x) { return Complex(std::exp(-100 * x * x), 0); }, -1, 1,
         Complex(std::sqrt(kPi) / 10.0 * std::erf(10.0), 0)},
        {"poly5",
         [](double x) {
             return Complex(1 + x * (2 + x * (3 + x * (4 + x * 5))), 0);
         },
         0, 1, Complex(1 + 1.0 + 1.0 + 1.0 + 1.0, 0)},
        {"1/x on [1,e]", [](double x) { return Complex(1.0 / x, 0); }, 1,
         std::exp(1.0), Complex(1.0, 0)},
        {"x e^x", [](double x) { return Complex(x * std::exp(x), 0); }, 0, 1,
         Complex(1.0, 0)},
        {"sin^2", [](double x) { return Complex(std::sin(x) * std::sin(x), 0); },
         0, 2 * kPi, Complex(kPi, 0)},
        {"steep tanh",
         [](double x) { return Complex(std::tanh(50 * x), 0); }, -1, 1,
         Complex(0.0, 0)},
        {"shifted gauss",
         [](double x) { return Complex(std::exp(-(x - 3) * (x - 3) / 2), 0); },
         0, 6, Complex(std::sqrt(2 * kPi) * std::erf(3.0 / std::sqrt(2.0)), 0)},
        {"osc decay",
         [](double x) { return Complex(std::exp(-x) * std::sin(5 * x), 0); }, 0,
         30, Complex(5.0 / 26.0 * (1 - std::exp(-30.0) * (std::cos(150.0) + 0.2 * std::sin(150.0))), 0)},
    };

    int checked = 0;
    for (const auto& c : corpus) {
        CAPTURE(c.name);
        const auto r = quad::integrate_1d(c.f, c.a, c.b, s);
        const double true_err = std::abs(r.value - c.truth);
        CHECK(true_err <=
              std::max(s.abs_tol, s.rel_tol * std::abs(c.truth)) * 10);
        CHECK(true_err <= r.error + 1e-14 * std::abs(c.truth) + 1e-15);
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("regulated double pole against the analytic antiderivative") {
    QuadratureSettings s;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const Complex z(0.0, eps);
        // smooth compact test function (1 - t^2)^2 = 1 - 2 t^2 + t^4
        auto f = [&](double t) {
            const double w = (1 - t * t) * (1 - t * t);
            return w / ((t - z) * (t - z));
        };
        const Complex truth =
            (poly_over_pole_antideriv(0, z, 1.0) -
             poly_over_pole_antideriv(0, z, -1.0)) -
            2.0 * (poly_over_pole_antideriv(2, z, 1.0) -
                   poly_over_pole_antideriv(2, z, -1.0)) +
            (poly_over_pole_antideriv(4, z, 1.0) -
             poly_over_pole_antideriv(4, z, -1.0));
        const auto r = quad::integrate_1d(f, -1.0, 1.0, s);
        CAPTURE(eps);
        CHECK(std::abs(r.value - truth) <= 1e-8 * std::abs(truth));
    }
}

TEST_CASE("semi-infinite tails") {
    QuadratureSettings s;
    SUBCASE("exp(-x) sin(x) with accelerated tail -> 1/2") {
        auto f = [](double x) { return Complex(std::exp(-x) * std::sin(x), 0); };
        const auto r = quad::integrate_semi_infinite(f, 0.0, kPi, s);
        CHECK(std::abs(r.value.real() - 0.5) < 1e-9);
        CHECK(std::abs(r.value.imag()) < 1e-12);
    }
    SUBCASE("conditionally convergent sin(x)/x -> pi/2 needs acceleration") {
        auto f = [](double x) {
            return Complex(x == 0.0 ? 1.0 : std::sin(x) / x, 0);
        };
        s.tail_strategy = quad::TailStrategy::Accelerated;
        const auto r = quad::integrate_semi_infinite(f, 0.0, kPi, s);
        CHECK(std::abs(r.value.real() - kPi / 2) < 1e-8);
    }
    SUBCASE("partition strategy handles absolutely convergent tails") {
        s.tail_strategy = quad::TailStrategy::PartitionAtZeros;
        auto f = [](double x) {
            return Complex(std::exp(-0.5 * x) * std::cos(3 * x), 0);
        };
        const auto r = quad::integrate_semi_infinite(f, 0.0, kPi / 3, s);
        // int_0^inf e^{-ax} cos(bx) = a/(a^2+b^2)
        CHECK(std::abs(r.value.real() - 0.5 / (0.25 + 9.0)) < 1e-9);
    }
}

TEST_CASE("2-D quadrature") {
    QuadratureSettings s;
    SUBCASE("x*y over the unit square") {
        auto f = [](double x, double y) { return Complex(x * y, 0); };
        const auto r = quad::integrate_2d(f, 0, 1, 0, 1, s);
        CHECK(std::abs(r.value.real() - 0.25) < 1e-12);
    }
    SUBCASE("separable product equals the product of 1-D results") {
        auto fx = [](double x) { return Complex(std::exp(-x) * x, 0); };
        auto fy = [](double y) { return Complex(std::cos(2 * y), 0); };
        auto f = [&](double x, double y) { return fx(x) * fy(y); };
        const auto r2 = quad::integrate_2d(f, 0, 2, -1, 1, s);
        const auto rx = quad::integrate_1d(fx, 0, 2, s);
        const auto ry = quad::integrate_1d(fy, -1, 1, s);
        CHECK(std::abs(r2.value - rx.value * ry.value) < 1e-12);
    }
    SUBCASE("oscillatory complex phase") {
        auto f = [](double x, double y) {
            return std::exp(Complex(0, 3 * (y - x)));
        };
        // |int e^{i3(y-x)}|^2 over [0,1]^2 = |(e^{i3}-1)/(3i)|^2
        const Complex one_d = (std::exp(Complex(0, 3)) - 1.0) / Complex(0, 3);
        const auto r = quad::integrate_2d(f, 0, 1, 0, 1, s);
        CHECK(std::abs(r.value - std::conj(one_d) * one_d) < 1e-11);
    }
    SUBCASE("regulated diagonal ridge") {
        const double eps = 1e-2;
        auto f = [&](double x, double y) {
            const Complex d(x - y, -eps);
            return 1.0 / (d * d);
        };
        // with u = x - y: int (1-|u|) / (u - i eps)^2 du over [-1,1]
        const Complex z(0, eps);
        auto anti0 = [&](double t) { return poly_over_pole_antideriv(0, z, t); };
        auto anti1 = [&](double t) { return poly_over_pole_antideriv(1, z, t); };
        const Complex truth = (anti0(1.0) - anti0(-1.0)) -
                              ((anti1(1.0) - anti1(0.0)) -
                               (anti1(0.0) - anti1(-1.0)));
        const auto r = quad::integrate_2d(f, 0, 1, 0, 1, s);
        CHECK(std::abs(r.value - truth) < 1e-7 * std::abs(truth));
    }
}

TEST_CASE("non-convergence carries the best estimate") {
    QuadratureSettings s;
    s.max_subdivisions = 3;
    auto f = [](double x) { return Complex(std::sin(100 * x) * x, 0); };
    CHECK_THROWS_AS((void)quad::integrate_1d(f, 0.0, 20.0, s),
                    ConvergenceError);
    try {
        (void)quad::integrate_1d(f, 0.0, 20.0, s);
    } catch (const ConvergenceError& e) {
        CHECK(std::isfinite(e.best_estimate.real()));
        CHECK(e.error_estimate > 0);
    }
}

TEST_CASE("regulator extrapolation") {
    SUBCASE("f(eps) = 1 + eps") {
        std::vector<std::pair<double, Complex>> v{
            {0.1, Complex(1.1, 0)}, {0.05, Complex(1.05, 0)},
            {0.025, Complex(1.025, 0)}};
        const auto r = quad::extrapolate_regulator(v);
        CHECK(std::abs(r.value.real() - 1.0) < 1e-12);
        CHECK(r.reliable);
    }
    SUBCASE("exact quadratic 1 + 3 eps - 2 eps^2") {
        auto f = [](double e) { return 1.0 + 3 * e - 2 * e * e; };
        std::vector<std::pair<double, Complex>> v;
        for (double e : {0.1, 0.05, 0.025}) v.emplace_back(e, Complex(f(e), 0));
        const auto r = quad::extrapolate_regulator(v);
        CHECK(std::abs(r.value.real() - 1.0) < 1e-10);
    }
    SUBCASE("complex values") {
        auto f = [](double e) { return Complex(2.0 - e, 0.5 + e * e); };
        std::vector<std::pair<double, Complex>> v;
        for (double e : {0.2, 0.1, 0.05, 0.025}) v.emplace_back(e, f(e));
        const auto r = quad::extrapolate_regulator(v);
        CHECK(std::abs(r.value - Complex(2.0, 0.5)) < 1e-10);
    }
    SUBCASE("needs three rungs in geometric progression") {
        std::vector<std::pair<double, Complex>> two{{0.1, 1.0}, {0.05, 1.0}};
        CHECK_THROWS_AS((void)quad::extrapolate_regulator(two),
                        InvalidInputError);
        std::vector<std::pair<double, Complex>> bad{
            {0.1, 1.0}, {0.09, 1.0}, {0.02, 1.0}};
        CHECK_THROWS_AS((void)quad::extrapolate_regulator(bad),
                        InvalidInputError);
    }
    SUBCASE("non-monotone residuals flag the result") {
        std::vector<std::pair<double, Complex>> v{{0.1, Complex(1.0, 0)},
                                                  {0.05, Complex(1.2, 0)},
                                                  {0.025, Complex(0.7, 0)},
                                                  {0.0125, Complex(1.9, 0)}};
        const auto r = quad::extrapolate_regulator(v);
        CHECK_FALSE(r.reliable);
    }
}

TEST_CASE("determinism: identical inputs give bit-identical results") {
    QuadratureSettings s;
    auto f = [](double x) {
        return Complex(std::sin(13 * x) / (1 + x * x), std::cos(7 * x));
    };
    const auto r1 = quad::integrate_1d(f, 0.0, 10.0, s);
    const auto r2 = quad::integrate_1d(f, 0.0, 10.0, s);
    CHECK(std::memcmp(&r1.value, &r2.value, sizeof r1.value) == 0);
    CHECK(r1.error == r2.error);

    auto g = [](double x, double y) {
        return Complex(std::sin(5 * x + 3 * y), x * y);
    };
    const auto q1 = quad::integrate_2d(g, 0, 2, 0, 1, s);
    const auto q2 = quad::integrate_2d(g, 0, 2, 0, 1, s);
    CHECK(std::memcmp(&q1.value, &q2.value, sizeof q1.value) == 0);
}
