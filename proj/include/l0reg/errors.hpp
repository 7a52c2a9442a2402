#pragma once

#include <stdexcept>
#include <string>

namespace l0reg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vector or matrix dimensions do not fit together.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// An argument is outside its admissible range.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold for the input.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The operation is not available for this model or transform.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Support enumeration would exceed the configured budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// A linear-algebra or iterative solve failed.
class SolverError : public Error {
public:
    using Error::Error;
};

/// An iterative solve hit its iteration cap. Carries the best objective seen.
class ConvergenceError : public SolverError {
public:
    ConvergenceError(const std::string& what, double best_value)
        : SolverError(what), best_value_(best_value) {}

    double best_value() const noexcept { return best_value_; }

private:
    double best_value_;
};

} // namespace l0reg
