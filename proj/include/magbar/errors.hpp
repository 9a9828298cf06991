#pragma once

#include <stdexcept>
#include <string>

namespace magbar {

// Base class for every error raised by the library. The CLI maps the
// concrete type to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Requested setup cannot be honoured (grid too coarse, level too high).
class ConfigurationError : public Error {
public:
    using Error::Error;
};

// An iteration failed to converge or produced inconsistent output.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Grid or sample resolution is insufficient for the requested quantity.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// A property guaranteed by theory failed on computed data.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

// Request exceeds a hard capability limit of an algorithm.
class CapabilityError : public Error {
public:
    using Error::Error;
};

// Caller broke a documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace magbar
