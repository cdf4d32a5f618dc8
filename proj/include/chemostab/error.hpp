#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chemostab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or malformed configuration input.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A precondition of a numerical routine does not hold.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The time integrator produced a non-finite or negative value.
class SolverError : public Error {
public:
    SolverError(const std::string& what, std::size_t step)
        : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace chemostab
