#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wavelag {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arguments outside an operation's domain (negative order, size mismatch, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A lower-triangular operator with a zero diagonal.
class SingularOperator : public Error {
public:
    using Error::Error;
};

/// Power iteration hit its iteration cap. Carries the last iterate so callers
/// can still inspect or reuse the estimate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double estimate, std::vector<double> iterate)
        : Error(what), estimate_(estimate), iterate_(std::move(iterate)) {}

    double estimate() const noexcept { return estimate_; }
    const std::vector<double>& iterate() const noexcept { return iterate_; }

private:
    double estimate_;
    std::vector<double> iterate_;
};

/// Missing, unreadable or malformed files.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace wavelag
