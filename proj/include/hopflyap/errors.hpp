#pragma once

#include <stdexcept>
#include <string>

namespace hopflyap {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the domain where an operation is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

// LU pivot fell below the singularity threshold.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, double pivot)
        : Error(what), pivot_(pivot) {}
    double pivot() const noexcept { return pivot_; }

private:
    double pivot_;
};

// An iteration hit its cap before meeting its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_iterate, double residual)
        : Error(what), last_iterate_(last_iterate), residual_(residual) {}
    double last_iterate() const noexcept { return last_iterate_; }
    double residual() const noexcept { return residual_; }

private:
    double last_iterate_;
    double residual_;
};

// Matrix does not have the rank structure an operation expects.
class StructureError : public Error {
public:
    using Error::Error;
};

// Two routes that must agree do not.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double time_reached)
        : Error(what), time_reached_(time_reached) {}
    double time_reached() const noexcept { return time_reached_; }

private:
    double time_reached_;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

}  // namespace hopflyap
