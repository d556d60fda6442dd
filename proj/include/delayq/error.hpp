#pragma once

#include <stdexcept>
#include <string>

namespace delayq {

/// Base of every error raised by the library. The CLI maps these to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Matrix dimension outside the supported range.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Pivot fell below the singularity threshold during elimination.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// A floating-point quantity underflowed/overflowed with no stable fallback,
/// or an integrator produced a state that violates a model invariant.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Requested moment combination is not attainable by the family.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Iterative solver did not reach tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Operation requires a stability regime the inputs do not produce.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// Invalid run or sweep configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Trajectory too short for the requested analysis window.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Input text could not be parsed (distribution literal, number lists).
/// The CLI maps this to exit code 2.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace delayq
