#pragma once

#include <stdexcept>
#include <string>

namespace lagnet {

/// Bad input: malformed files, out-of-range parameters, violated preconditions.
/// Maps to process exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: non-convergence, singular systems, non-finite results.
/// Maps to process exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lagnet
