#pragma once

#include <stdexcept>
#include <string>

namespace plp {

// Invalid parameters, budgets, or grid setups requested by the caller.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite samples, malformed files, failed preconditions on data content.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched shapes: grids, lengths, component counts.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace plp
