#pragma once

#include <stdexcept>
#include <string>

namespace pas {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid or inconsistent instance description (bad config file, bad field,
/// violated model invariant at load time).
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Structural mismatch between objects (wrong matrix shapes), as opposed to a
/// violated model constraint.
struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// A patient could not be placed: no free bed and no transfer budget left.
struct InfeasibleError : Error {
    explicit InfeasibleError(const std::string& what) : Error(what) {}
};

/// Instance exceeds a size cap (state enumeration, pmf support, ...).
struct SizeCapError : Error {
    explicit SizeCapError(const std::string& what) : Error(what) {}
};

} // namespace pas
