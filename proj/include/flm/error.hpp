#pragma once

#include <stdexcept>
#include <string>

namespace flm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two Hilbert points (or a point and a basis) do not share grids / scalar dimension.
class ConformabilityError : public Error {
public:
    using Error::Error;
};

/// Precondition on sizes or parameter ranges violated.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Every coordinate of the cross-score vector has (numerically) zero variance.
class DegenerateDataError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A matrix that should be PSD is indefinite beyond tolerance, or similar.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Malformed input files, flags or configuration.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace flm
