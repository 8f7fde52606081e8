#pragma once

#include <stdexcept>
#include <string>

namespace hypharm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "error"; }
};

/// A point, grid or argument lies outside the domain where the operation is defined.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// Floating-point overflow or loss of the interior near a model boundary.
class NumericalError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "numerical"; }
};

/// A stated precondition of an operation does not hold for the given inputs.
class PreconditionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "precondition"; }
};

/// Zero of a quadratic differential where the foliation is singular.
class SingularityError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "singularity"; }
};

/// Iterative procedure stopped without meeting its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "convergence"; }
};

}  // namespace hypharm
