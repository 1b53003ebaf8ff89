#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fdsketch {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad parameters (k = 0, eps <= 0, mismatched shapes or sketch parameters).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// NaN or Inf reached an operation that only admits finite values.
class NonFiniteInput : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// An iterative factorization ran out of sweeps.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Malformed row stream or sketch file. line() is 1-based, 0 when not applicable.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace fdsketch
