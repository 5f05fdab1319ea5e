#pragma once

#include <stdexcept>
#include <string>

namespace itc {

// Invalid inputs are reported with std::invalid_argument. The types below
// cover the failure modes that are not caller mistakes.

/// Asked for a collective state with more atomic excitations than atoms.
class DegenerateSubspaceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A basis or matrix would exceed the configured size cap.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver did not reach its tolerance.
class NumericFailure : public std::runtime_error {
public:
    NumericFailure(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace itc
