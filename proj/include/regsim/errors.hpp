#pragma once

#include <stdexcept>
#include <string>

namespace regsim {

/// Bad input: a precondition, range or format check failed.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a statistics window holds fewer than two samples.
class EmptyWindowError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// The numerics could not continue (unrecoverable state, failed eigensolve).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace regsim
