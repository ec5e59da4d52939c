#pragma once

#include <stdexcept>
#include <string>

namespace dirhelm {

/// Invalid shape, discretization or run parameters.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of a function (e.g. H(z) at z <= 0).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A segment pair whose geometry is undefined (coincident centers).
struct DegeneratePairError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Mismatched sizes between a plan and the vectors it is applied to.
struct DimensionError : std::length_error {
    using std::length_error::length_error;
};

/// Broken internal invariant (missing spectral buffer, corrupt plan file, ...).
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace dirhelm
