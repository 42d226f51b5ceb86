#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace margconv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation was violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A shape or grid function reaches into the L/8 padding band of the grid.
class MarginError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// A mollification scale is too small to be resolved on the lattice.
class ResolutionError : public PreconditionError {
public:
    ResolutionError(const std::string& what, double min_epsilon)
        : PreconditionError(what), min_epsilon_(min_epsilon) {}
    double min_epsilon() const noexcept { return min_epsilon_; }

private:
    double min_epsilon_;
};

/// The O(N^4) direct oracle was asked to run above its size guard.
class CostGuardError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Malformed input file (PGM, JSON sidecar, shape document).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Experiment configuration failed validation; carries every violation found.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace margconv
