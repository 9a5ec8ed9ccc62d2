#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace taco {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A domain invariant or precondition was violated.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

/// An input file is syntactically or structurally malformed. Messages carry
/// the offending line number or element index.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Configuration file is invalid or contains unknown keys.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A translation or judge backend failed. When the failure is attributable
/// to a single request, `index` holds its position in the submitted batch.
class BackendError : public Error {
public:
    explicit BackendError(const std::string& what,
                          std::optional<std::size_t> index = std::nullopt)
        : Error(what), index(index) {}

    std::optional<std::size_t> index;
};

/// The judge's raw output did not contain a parseable rating.
class UnparsedVerdictError : public Error {
public:
    UnparsedVerdictError(const std::string& what, std::string raw_text)
        : Error(what), raw(std::move(raw_text)) {}

    std::string raw;
};

} // namespace taco
