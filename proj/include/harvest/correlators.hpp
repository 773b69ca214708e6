#pragma once

#include <complex>

#include "harvest/errors.hpp"

namespace harvest::correlators {

using Complex = std::complex<double>;

// Geometry of the detector pair: separation L along x, transverse
// coordinates identical. The Rindler pair rides the mirror hyperbolas in the
// complementary wedges with acceleration a = 2/L.
enum class GeometryKind { StaticPair, RindlerPair };

struct WightmanKernel {
    GeometryKind kind = GeometryKind::StaticPair;
    double separation = 1.0;  // L
    double regulator = 1e-3;  // i-epsilon scale
    void validate() const {
        if (!(separation > 0))
            throw InvalidInputError("wightman: separation must be > 0");
        if (!(regulator > 0))
            throw InvalidInputError("wightman: regulator must be > 0");
    }
};

// Massless 3+1D vacuum Wightman function, first argument earlier on the
// *left* operator: D+(dt, r) = -(1/4pi^2) / ((dt - i eps)^2 - r^2).
Complex wightman_static(double dt, double r, double eps_reg);

// On one Rindler trajectory, dtau = tau_left - tau_right:
//   D+ = -1 / (4 pi^2 L^2 sinh^2((dtau - i eps)/L))
Complex wightman_rindler_same(double dtau, double L, double eps_reg);

// Across the two trajectories, sigma = tau_A + tau_B:
//   D+ = +1 / (4 pi^2 L^2 cosh^2((sigma - i eps)/L))
Complex wightman_rindler_cross(double sigma, double L, double eps_reg);

// Spectral kernel of the angular mode integral: sin(omega L)/L for the
// cross-correlator, reducing to the same-point density omega as L -> 0
// (L == 0 selects the same-point kernel exactly).
double frequency_kernel_static(double omega, double L);

// Eq.-of-motion trajectories x = -+(L/2) cosh(2 tau / L), t = (L/2) sinh(2
// tau / L); left wedge holds atom A.
struct SpacetimePoint {
    double t = 0.0;
    double x = 0.0;
};
SpacetimePoint rindler_trajectory_point(double tau, double L, bool right_wedge);

}  // namespace harvest::correlators
