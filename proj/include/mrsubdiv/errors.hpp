#pragma once

#include <stdexcept>
#include <string>

namespace mrsubdiv {

/// Numerical precondition failures (degenerate masks, indefinite systems).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller-side mistakes: malformed masks, undersized windows or grids.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NoUnitEigenvector : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotPositiveDefinite : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotConsistent : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InvalidMask : public InputError {
public:
    using InputError::InputError;
};

class WindowTooSmall : public InputError {
public:
    using InputError::InputError;
};

class QuadratureUnderResolved : public InputError {
public:
    using InputError::InputError;
};

} // namespace mrsubdiv
