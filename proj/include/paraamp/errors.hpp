#pragma once

#include <stdexcept>
#include <string>

namespace paraamp {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input outside the model's domain of validity.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Inconsistent or incomplete user configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Quadrature, root finding or optimisation failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Two algebraically equivalent evaluation routes disagree.
class ConsistencyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Pump strength at or above the parametric threshold |xi| = kappa/2.
class ThresholdError : public NumericalError {
public:
    ThresholdError(const std::string& what, double pump_ratio)
        : NumericalError(what), pump_ratio_(pump_ratio) {}

    /// |xi| / (kappa/2) at the offending point.
    [[nodiscard]] double pump_ratio() const noexcept { return pump_ratio_; }

private:
    double pump_ratio_;
};

}  // namespace paraamp
