#pragma once

#include <stdexcept>
#include <string>

namespace spinchaos {

/// Invalid arguments: bad sector, chain too short, out-of-range index.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computation failed to produce a usable result (solver non-convergence,
/// degenerate ensemble, failed fit, missing plateau).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad run configuration (CLI flags or config file).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spinchaos
