#pragma once

#include <stdexcept>
#include <string>

namespace hnnso {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operand dimensions do not line up.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// An argument or configuration value is outside its allowed range.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed: divergence, no convergence, singular system.
class NumericError : public Error {
public:
    using Error::Error;
};

/// An API contract was violated (e.g. a backward pass fed a foreign cache).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A file could not be read, written, or decoded.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed content in an input file; message carries the location.
class ParseError : public IoError {
public:
    using IoError::IoError;
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : IoError(path + ":" + std::to_string(line) + ": " + what) {}
};

}  // namespace hnnso
