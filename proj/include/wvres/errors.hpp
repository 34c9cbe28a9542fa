#pragma once

#include <stdexcept>
#include <string>

namespace wvres {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inadmissible distortion angle, grid or other input parameter.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A function was evaluated outside its declared domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Query outside a representable branch (e.g. kappa off its band).
class RangeError : public Error {
public:
    using Error::Error;
};

/// Dense eigensolver failed to converge.
class SolverError : public Error {
public:
    using Error::Error;
};

/// An eigenvalue sits too close to a quadrature contour.
class ContourError : public Error {
public:
    using Error::Error;
};

/// Singular linear system inside a resolvent evaluation.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// Eigenvalue trajectories could not be linked across the epsilon schedule.
class GatingError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (CLI level).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace wvres
