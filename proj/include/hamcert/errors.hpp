#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hamcert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Argument lies outside the domain of a kernel or grid.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Malformed kernel, grid-function or config file.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Iteration hit its budget (or produced non-finite values). Carries the
/// best iterate seen so callers can report diagnostics.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, std::vector<double> best, int iterations, double best_residual)
        : Error(what), best_(std::move(best)), iterations_(iterations), best_residual_(best_residual) {}

    const std::vector<double>& best_iterate() const noexcept { return best_; }
    int iterations() const noexcept { return iterations_; }
    double best_residual() const noexcept { return best_residual_; }

private:
    std::vector<double> best_;
    int iterations_;
    double best_residual_;
};

class SingularJacobian : public Error {
public:
    SingularJacobian(const std::string& what, double rcond) : Error(what), rcond_(rcond) {}
    /// Reciprocal condition estimate of the offending Jacobian.
    double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

}  // namespace hamcert
