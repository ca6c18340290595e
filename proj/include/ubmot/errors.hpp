#pragma once

#include <stdexcept>
#include <string>

namespace ubmot {

// Bad arguments: maps to CLI exit code 2.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Too much cancellation or drift for the requested accuracy: exit code 3.
class StabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative method ran out of iterations (Newton, adaptive quadrature).
class ConvergenceError : public StabilityError {
public:
    ConvergenceError(const std::string& what, double residual)
        : StabilityError(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace ubmot
