#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace harvest {

// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed configuration, file, or argument.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

// Evaluation requested outside a function's domain (e.g. tabulated window
// queried past its table) or a quantity that is undefined for the inputs.
class DomainError : public Error {
public:
    using Error::Error;
};

// harvesting_ratio with vanishing emission norms.
class UndefinedRatioError : public DomainError {
public:
    using DomainError::DomainError;
};

// Adaptive quadrature failed to meet its tolerance; carries the best estimate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, std::complex<double> best, double err)
        : Error(msg), best_estimate(best), error_estimate(err) {}
    std::complex<double> best_estimate{};
    double error_estimate = 0.0;
};

// Time-domain and frequency-domain amplitude paths disagree beyond the
// combined error budget.
class CrossValidationError : public Error {
public:
    using Error::Error;
};

// State assembly outside the perturbative regime (non-PSD matrix, excitation
// weight too large, or coupling above the configured policy bound).
class PerturbativeRegimeError : public Error {
public:
    using Error::Error;
};

// Distillation requested on a PPT (separable, hence non-distillable) state.
class NotDistillableError : public Error {
public:
    using Error::Error;
};

// Local filter annihilated the state (success probability below floor).
class FilteredToNothingError : public Error {
public:
    using Error::Error;
};

// Sweep aborted because more than half of the grid points failed.
class SweepError : public Error {
public:
    using Error::Error;
};

}  // namespace harvest
