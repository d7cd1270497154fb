#pragma once
#include <stdexcept>
#include <string>

namespace paretune {

// Argument and domain violations use std::invalid_argument / std::domain_error.
// The classes below map onto CLI exit codes: IoError 1, ConfigError 2,
// DataError 3, NumericalError 4.

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable input or unwritable output path.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace paretune
