#pragma once

#include <stdexcept>
#include <string>

namespace wavebench {

// Root of every error raised by the library. The CLI maps the concrete
// subclasses onto its exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Series lengths that do not line up (n != k*m, basis size mismatch, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

// Inputs outside the domain of an operation (non-finite data, zero
// denominators, malformed files).
class DomainError : public Error {
public:
    using Error::Error;
};

// Invalid parameters or configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Singular or ill-conditioned linear systems, failed factorizations.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace wavebench
