#pragma once

#include <stdexcept>
#include <string>

namespace seqnca {

/// Malformed or inconsistent configuration (config files, search spaces,
/// out-of-range hyperparameters).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unreadable or malformed input data files.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Training produced NaN or runaway parameters.
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unreadable, malformed or incompatible checkpoint files.
struct CheckpointError : std::runtime_error {
    explicit CheckpointError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Model parameters and data disagree on dimensions.
struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace seqnca
