#pragma once

#include <stdexcept>
#include <string>

namespace homeokit {

/// Vector/matrix length mismatch.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation was invoked outside its precondition (e.g. ticking a dead state).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// File read/write failure; the message carries the offending path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace homeokit
