#pragma once

#include <stdexcept>
#include <string>

namespace wifiaudit {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violated one of its documented invariants (length, charset, schema).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A capture file could not be decoded (bad magic, truncation, unsupported link type).
class FormatError : public Error {
public:
    using Error::Error;
};

/// An operation is missing required configuration (e.g. no SSID and no override).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace wifiaudit
