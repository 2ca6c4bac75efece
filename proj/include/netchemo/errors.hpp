#pragma once

#include <stdexcept>

namespace netchemo {

/// Failures of the numerical core (as opposed to bad input documents).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// dt * lambda / h exceeded 1 on some arc.
class CflViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A factorization or linear solve failed.
class SolverBreakdown : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Run configuration documents that cannot be interpreted.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace netchemo
