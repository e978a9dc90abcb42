#pragma once

#include <stdexcept>
#include <string>

namespace opfree {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Matrix (numerically) singular: smallest singular value below threshold.
struct SingularMatrix : Error {
    using Error::Error;
};

/// Probe violates the radius rule or half-plane membership of a transform domain.
struct DomainViolation : Error {
    using Error::Error;
};

/// Fixed-point iteration failed to reach tolerance within the iteration cap.
struct NoConvergence : Error {
    using Error::Error;
};

/// Steinitz instance violates its preconditions (sum, caps).
struct InfeasibleInput : Error {
    using Error::Error;
};

/// Operands with incompatible dimensions or truncation orders.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// Bad configuration, file contents, or argument values.
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace opfree
