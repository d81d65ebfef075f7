#pragma once

#include <stdexcept>
#include <string>

namespace raddiff {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or configuration inequality does not hold.
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a function (e.g. 1+θ̃ <= 0, negative frequency).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Density or temperature positivity lost on the grid.
class PositivityError : public Error {
public:
    using Error::Error;
};

/// Grid cannot resolve a requested frequency band.
class ResolutionError : public Error {
public:
    ResolutionError(const std::string& what, int required_n)
        : Error(what), required_n_(required_n) {}
    int required_n() const noexcept { return required_n_; }

private:
    int required_n_;
};

/// Iterative method or quadrature failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// A computed quantity contradicts a structural property of the model.
class ModelInconsistency : public Error {
public:
    using Error::Error;
};

/// Overflow, NaN or a failed self-check inside a numerical kernel.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

}  // namespace raddiff
