#pragma once

#include <stdexcept>
#include <string>

namespace cochange {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user-supplied configuration or arguments.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A persisted artifact could not be read: malformed content, wrong
/// schema, or unsupported format version.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Input data violates a precondition of the requested operation.
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace cochange
