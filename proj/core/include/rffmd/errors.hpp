#pragma once

#include <stdexcept>
#include <string>

namespace rffmd {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent input (config values, file contents, sizes).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed configuration; the CLI maps this to exit code 2.
class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ParseError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Numerical failures; the CLI maps all of these to exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

/// The regularized Gram matrix could not be factorized.
class SingularSystem : public NumericError {
public:
    using NumericError::NumericError;
};

/// An objective evaluated to inf/nan, usually because the step size is too large.
class NonFiniteLoss : public NumericError {
public:
    using NumericError::NumericError;
};

/// A Langevin or Verlet state left the finite range.
class NonFiniteState : public NumericError {
public:
    using NumericError::NumericError;
};

class GridTooCoarse : public NumericError {
public:
    using NumericError::NumericError;
};

/// Two correlation curves were compared on different tau grids.
class GridMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Wraps an error raised inside replica `replica` of a replicated task.
class ReplicaError : public Error {
public:
    ReplicaError(int replica, const std::string& what, bool numeric)
        : Error("replica " + std::to_string(replica) + ": " + what),
          replica_(replica),
          numeric_(numeric) {}

    int replica() const noexcept { return replica_; }
    bool numeric() const noexcept { return numeric_; }

private:
    int replica_;
    bool numeric_;
};

} // namespace rffmd
