#pragma once

#include <complex>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "harvest/quadrature.hpp"

namespace harvest::windows {

enum class Shape { CosineSquared, Gaussian, Tabulated };

// Uniform-grid (t, value) samples for a Tabulated window.
struct TabulatedProfile {
    std::vector<double> times;
    std::vector<double> values;
    double spacing() const { return times[1] - times[0]; }
};

// Interaction window eps(t) = amplitude * shape(t - center). Shapes peak at 1
// so the coupling strength factors out; all shapes are compactly supported on
// [center - duration/2, center + duration/2] (the Gaussian is truncated at
// five sigma, duration = 10 sigma, and shifted back to zero at the edges).
struct WindowFunction {
    Shape shape = Shape::CosineSquared;
    double duration = 1.0;
    double center = 0.0;
    double amplitude = 1.0;
    std::shared_ptr<const TabulatedProfile> table;

    double support_min() const { return center - 0.5 * duration; }
    double support_max() const { return center + 0.5 * duration; }
    void validate() const;
};

double window_eval(const WindowFunction& w, double t);

// Fourier transform with the convention
//   eps_tilde(omega) = int eps(t) exp(+i omega t) dt.
// CosineSquared and Tabulated shapes use closed forms (removable
// singularities handled by series); the Gaussian falls back to quadrature.
std::complex<double> window_spectrum(const WindowFunction& w, double omega);

// The defining integral evaluated by adaptive quadrature; the independent
// check of the closed forms.
std::complex<double> window_spectrum_numeric(const WindowFunction& w,
                                             double omega,
                                             const quad::QuadratureSettings& s);

// int eps(t)^2 dt; closed form for CosineSquared and Tabulated, quadrature
// for the Gaussian.
double window_norm_squared(const WindowFunction& w);

// Two-column text (t, eps) on a uniform grid; linear interpolation between
// samples. Values scale by `amplitude` on evaluation.
WindowFunction load_tabulated_window(const std::filesystem::path& file,
                                     double amplitude = 1.0);
WindowFunction parse_tabulated_window(const std::string& text,
                                      double amplitude = 1.0);

struct WindowSpectrum {
    WindowFunction source;
    static constexpr const char* convention =
        "eps_tilde(omega) = int eps(t) exp(+i omega t) dt";
    std::complex<double> operator()(double omega) const {
        return window_spectrum(source, omega);
    }
};

}  // namespace harvest::windows
