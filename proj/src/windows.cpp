#include "harvest/windows.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace harvest::windows {

namespace {

constexpr double kPi = std::numbers::pi;

// Gaussian truncation: support is [-5 sigma, 5 sigma], shifted so the shape
// is continuous (zero) at the edges and rescaled back to peak 1.
constexpr double kGaussEdge = 3.7266531720786709e-06;  // exp(-12.5)

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

double shape_eval(const WindowFunction& w, double t) {
    const double u = t - w.center;
    const double half = 0.5 * w.duration;
    switch (w.shape) {
        case Shape::CosineSquared: {
            if (std::abs(u) >= half) return 0.0;
            const double c = std::cos(kPi * u / w.duration);
            return c * c;
        }
        case Shape::Gaussian: {
            if (std::abs(u) >= half) return 0.0;
            const double sigma = w.duration / 10.0;
            const double g = std::exp(-0.5 * (u / sigma) * (u / sigma));
            return (g - kGaussEdge) / (1.0 - kGaussEdge);
        }
        case Shape::Tabulated: {
            const auto& tab = *w.table;
            if (t < tab.times.front() || t > tab.times.back())
                throw DomainError("tabulated window queried outside its table domain");
            const double h = tab.spacing();
            const auto n = tab.times.size();
            auto k = static_cast<std::size_t>((t - tab.times.front()) / h);
            if (k >= n - 1) k = n - 2;
            const double s = (t - tab.times[k]) / h;
            return tab.values[k] + s * (tab.values[k + 1] - tab.values[k]);
        }
    }
    return 0.0;
}

// FT of one linear segment: int_0^h (a + b s) exp(i w (t0 + s)) ds.
std::complex<double> segment_transform(double t0, double h, double a, double b,
                                       double omega) {
    const std::complex<double> phase(std::cos(omega * t0), std::sin(omega * t0));
    const double x = omega * h;
    std::complex<double> e0, e1;
    if (std::abs(x) < 1e-4) {
        const std::complex<double> ix(0.0, x);
        e0 = h * (1.0 + ix / 2.0 + ix * ix / 6.0 + ix * ix * ix / 24.0);
        e1 = h * h *
             (0.5 + ix / 3.0 + ix * ix / 8.0 + ix * ix * ix / 30.0);
    } else {
        const std::complex<double> eix(std::cos(x), std::sin(x));
        const std::complex<double> iw(0.0, omega);
        e0 = (eix - 1.0) / iw;
        e1 = (h * eix) / iw - (eix - 1.0) / (iw * iw);
    }
    return phase * (a * e0 + b * e1);
}

}  // namespace

void WindowFunction::validate() const {
    if (!(duration > 0)) throw InvalidInputError("window: duration must be > 0");
    if (!(amplitude > 0)) throw InvalidInputError("window: amplitude must be > 0");
    if (shape == Shape::Tabulated) {
        if (!table || table->times.size() < 2)
            throw InvalidInputError("window: tabulated shape needs >= 2 samples");
        const double h = table->spacing();
        if (!(h > 0)) throw InvalidInputError("window: table grid must increase");
        for (std::size_t i = 1; i < table->times.size(); ++i) {
            const double d = table->times[i] - table->times[i - 1];
            if (std::abs(d - h) > 1e-6 * h)
                throw InvalidInputError("window: table grid must be uniform");
        }
        for (double v : table->values)
            if (v < 0)
                throw InvalidInputError("window: tabulated values must be >= 0");
    }
}

double window_eval(const WindowFunction& w, double t) {
    return w.amplitude * shape_eval(w, t);
}

std::complex<double> window_spectrum(const WindowFunction& w, double omega) {
    switch (w.shape) {
        case Shape::CosineSquared: {
            // int cos^2(pi t / T) e^{i w t} dt over [-T/2, T/2]
            //   = T pi^2 sin(x) / (2 x (pi^2 - x^2)),  x = w T / 2,
            // with removable singularities at x = 0 and x = +-pi.
            const double x = 0.5 * omega * w.duration;
            const double ax = std::abs(x);
            double mag;
            if (std::abs(ax - kPi) < 1e-4) {
                mag = w.duration * kPi * kPi * sinc(ax - kPi) /
                      (2.0 * ax * (kPi + ax));
            } else {
                mag = w.duration * kPi * kPi * sinc(x) /
                      (2.0 * (kPi * kPi - x * x));
            }
            const std::complex<double> phase(std::cos(omega * w.center),
                                             std::sin(omega * w.center));
            return w.amplitude * mag * phase;
        }
        case Shape::Gaussian: {
            quad::QuadratureSettings s;
            s.rel_tol = 1e-12;
            s.abs_tol = 1e-16;
            return window_spectrum_numeric(w, omega, s);
        }
        case Shape::Tabulated: {
            const auto& tab = *w.table;
            const double h = tab.spacing();
            std::complex<double> sum{};
            for (std::size_t k = 0; k + 1 < tab.times.size(); ++k) {
                const double b = (tab.values[k + 1] - tab.values[k]) / h;
                sum += segment_transform(tab.times[k], h, tab.values[k], b,
                                         omega);
            }
            return w.amplitude * sum;
        }
    }
    return {};
}

std::complex<double> window_spectrum_numeric(const WindowFunction& w,
                                             double omega,
                                             const quad::QuadratureSettings& s) {
    const double a = w.support_min(), b = w.support_max();
    return quad::integrate_1d(
               [&](double t) {
                   const double e = window_eval(w, t);
                   return std::complex<double>(e * std::cos(omega * t),
                                               e * std::sin(omega * t));
               },
               a, b, s)
        .value;
}

double window_norm_squared(const WindowFunction& w) {
    const double lam2 = w.amplitude * w.amplitude;
    switch (w.shape) {
        case Shape::CosineSquared:
            // int cos^4(pi t / T) dt over the support = 3T/8
            return lam2 * 3.0 * w.duration / 8.0;
        case Shape::Gaussian: {
            quad::QuadratureSettings s;
            s.rel_tol = 1e-12;
            return quad::integrate_1d(
                       [&](double t) {
                           const double e = window_eval(w, t);
                           return std::complex<double>(e * e, 0.0);
                       },
                       w.support_min(), w.support_max(), s)
                .value.real();
        }
        case Shape::Tabulated: {
            // the square of the linear interpolant integrates exactly
            const auto& tab = *w.table;
            const double h = tab.spacing();
            double sum = 0.0;
            for (std::size_t k = 0; k + 1 < tab.times.size(); ++k) {
                const double v0 = tab.values[k], v1 = tab.values[k + 1];
                sum += h * (v0 * v0 + v0 * v1 + v1 * v1) / 3.0;
            }
            return lam2 * sum;
        }
    }
    return 0.0;
}

WindowFunction parse_tabulated_window(const std::string& text,
                                      double amplitude) {
    auto tab = std::make_shared<TabulatedProfile>();
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream row(line);
        double t, v;
        if (!(row >> t >> v))
            throw InvalidInputError("tabulated window: expected two columns (t, eps)");
        tab->times.push_back(t);
        tab->values.push_back(v);
    }
    if (tab->times.size() < 2)
        throw InvalidInputError("tabulated window: need at least two rows");

    WindowFunction w;
    w.shape = Shape::Tabulated;
    w.table = tab;
    w.duration = tab->times.back() - tab->times.front();
    w.center = 0.5 * (tab->times.back() + tab->times.front());
    w.amplitude = amplitude;
    w.validate();
    return w;
}

WindowFunction load_tabulated_window(const std::filesystem::path& file,
                                     double amplitude) {
    std::ifstream in(file);
    if (!in)
        throw InvalidInputError("tabulated window: cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tabulated_window(buf.str(), amplitude);
}

}  // namespace harvest::windows
