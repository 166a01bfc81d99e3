#pragma once

#include <stdexcept>
#include <string>

namespace sevseg {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a schema or a domain invariant (bad class id, inverted box, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A box with zero height or width where a ratio is required.
class DegenerateBoxError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// File system or codec failure.
class IoError : public Error {
public:
    using Error::Error;
};

/// Image augmentation failed (e.g. JPEG round trip could not be performed).
class AugmentError : public Error {
public:
    using Error::Error;
};

/// Synthetic layout does not fit the requested canvas.
class LayoutError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace sevseg
