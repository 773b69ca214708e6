#include "harvest/correlators.hpp"

#include <cmath>
#include <numbers>

namespace harvest::correlators {

namespace {
constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;
}

Complex wightman_static(double dt, double r, double eps_reg) {
    if (r < 0) throw InvalidInputError("wightman_static: r must be >= 0");
    if (!(eps_reg > 0))
        throw InvalidInputError("wightman_static: regulator must be > 0");
    const Complex z(dt, -eps_reg);
    return -1.0 / (kFourPiSq * (z * z - r * r));
}

Complex wightman_rindler_same(double dtau, double L, double eps_reg) {
    if (!(L > 0)) throw InvalidInputError("wightman_rindler_same: L must be > 0");
    if (!(eps_reg > 0))
        throw InvalidInputError("wightman_rindler_same: regulator must be > 0");
    const Complex s = std::sinh(Complex(dtau, -eps_reg) / L);
    return -1.0 / (kFourPiSq * L * L * s * s);
}

Complex wightman_rindler_cross(double sigma, double L, double eps_reg) {
    if (!(L > 0))
        throw InvalidInputError("wightman_rindler_cross: L must be > 0");
    if (!(eps_reg > 0))
        throw InvalidInputError("wightman_rindler_cross: regulator must be > 0");
    const Complex c = std::cosh(Complex(sigma, -eps_reg) / L);
    return 1.0 / (kFourPiSq * L * L * c * c);
}

double frequency_kernel_static(double omega, double L) {
    if (omega < 0)
        throw InvalidInputError("frequency_kernel_static: omega must be >= 0");
    if (L < 0) throw InvalidInputError("frequency_kernel_static: L must be >= 0");
    if (L == 0.0) return omega;
    const double x = omega * L;
    if (std::abs(x) < 1e-4) {
        // omega * sinc(omega L), series for the small-argument ratio
        return omega * (1.0 - x * x / 6.0 * (1.0 - x * x / 20.0));
    }
    return std::sin(x) / L;
}

SpacetimePoint rindler_trajectory_point(double tau, double L, bool right_wedge) {
    if (!(L > 0))
        throw InvalidInputError("rindler_trajectory_point: L must be > 0");
    const double a = 2.0 * tau / L;
    SpacetimePoint p;
    p.t = 0.5 * L * std::sinh(a);
    p.x = (right_wedge ? 0.5 : -0.5) * L * std::cosh(a);
    return p;
}

}  // namespace harvest::correlators
