#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace pbrlab {

/// Compact number for error messages.
inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// Failure categories. The CLI maps each to an exit code.

/// Malformed or non-normalized input.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameter outside the domain where the construction is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Two or more eigenvalues closer than the configured gap.
class DegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative routine failed (no convergence, no bracket).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Couplings do not satisfy cos(alpha + theta) = 0.
class ConstraintError : public std::runtime_error {
public:
    ConstraintError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// An internal consistency check that should never fire.
class LogicError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace pbrlab
