#pragma once

#include <stdexcept>
#include <string>

namespace dshell {

// Argument outside the mathematical or physical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Result not representable in double precision (use the scaled variant).
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// Argument outside the window in which a series is accurate.
class AccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Energy too close to the gap edge |E| = M for the Bessel arguments.
class DegenerateKappaError : public DomainError {
public:
    using DomainError::DomainError;
};

// An iterative method (root refinement, quadrature, ODE integration) gave up.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid construction parameters for a value type.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace dshell
