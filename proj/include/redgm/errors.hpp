#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace redgm {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unresolvable input data (edge lists, label tables, subset
/// files, config files, CSV matrices). Carries the 1-based line number when
/// the failure is tied to a specific line, 0 otherwise.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line ? msg + " (line " + std::to_string(line) + ")" : msg), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// An iterative solve did not reach its tolerance, or the operator violated
/// the assumptions of the deflation (degenerate/complex leading eigenvalue,
/// leading eigenvalue numerically at 1). Carries the last iterate so callers
/// can inspect or restart.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double residual, std::int64_t iterations,
                     std::vector<double> last_iterate = {})
        : Error(msg), residual_(residual), iterations_(iterations),
          last_iterate_(std::move(last_iterate)) {}

    double residual() const { return residual_; }
    std::int64_t iterations() const { return iterations_; }
    const std::vector<double>& last_iterate() const { return last_iterate_; }

private:
    double residual_;
    std::int64_t iterations_;
    std::vector<double> last_iterate_;
};

/// An internal cross-check failed (e.g. column sums of an assembled matrix
/// drifting past tolerance). Signals an upstream convergence or logic problem
/// rather than bad user input.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// A validation run (oracle command) found a measured deviation above its
/// threshold.
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace redgm
