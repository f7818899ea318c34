#pragma once

#include <stdexcept>
#include <string>

namespace nasalgan {

/// Bad or missing input data: unreadable files, malformed annotations,
/// inconsistent shapes handed in from outside.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value (NaN/Inf loss, gradient, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated an API precondition (dimension mismatch, bad argument).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace nasalgan
