#pragma once

#include <stdexcept>
#include <string>

namespace realcalc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands have incompatible or malformed shapes.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// An argument is outside the domain of the operation (empty list, k = 0, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A matrix required to be anti-hermitian is not, within tolerance.
class NotAntiHermitianError : public Error {
public:
    using Error::Error;
};

/// Input is well formed but outside what the operation supports (e.g. dim g != 1).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Degenerate data: zero representation, zero metric, vanishing anchor.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Data that cannot be a metric of the requested kind.
class InvalidMetricError : public Error {
public:
    using Error::Error;
};

/// The metric is not invertible.
class SingularMetricError : public Error {
public:
    using Error::Error;
};

/// No Levi-Civita connection exists for the given data.
class NoLeviCivitaError : public Error {
public:
    using Error::Error;
};

/// Input must be in canonical (diagonal, descending) form first.
class NonCanonicalError : public Error {
public:
    using Error::Error;
};

/// A request exceeds the configured resource bounds.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Malformed JSON or a document that does not follow the expected schema.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace realcalc
