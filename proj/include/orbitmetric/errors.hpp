#pragma once

#include <stdexcept>
#include <string>

namespace orbitmetric {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input or precondition violations. The CLI maps these to exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};

struct UnsupportedAction : ValidationError {
    using ValidationError::ValidationError;
};

struct InvalidParameter : ValidationError {
    using ValidationError::ValidationError;
};

struct NotSphereMap : ValidationError {
    using ValidationError::ValidationError;
};

struct MissingBounds : ValidationError {
    using ValidationError::ValidationError;
};

struct DomainViolation : ValidationError {
    using ValidationError::ValidationError;
};

struct DegeneratePoints : ValidationError {
    using ValidationError::ValidationError;
};

struct NotFree : ValidationError {
    using ValidationError::ValidationError;
};

struct UnsupportedDimension : ValidationError {
    using ValidationError::ValidationError;
};

struct WindowTooSmall : ValidationError {
    using ValidationError::ValidationError;
};

struct EmptyDataset : ValidationError {
    using ValidationError::ValidationError;
};

struct InvalidK : ValidationError {
    using ValidationError::ValidationError;
};

struct NotMonotone : ValidationError {
    using ValidationError::ValidationError;
};

struct InvalidCertificate : ValidationError {
    using ValidationError::ValidationError;
};

struct DegeneratePair : ValidationError {
    using ValidationError::ValidationError;
};

/// Numerical failures of iterative solvers. The CLI maps these to exit code 3.
struct SolverError : Error {
    using Error::Error;
};

struct SolverDivergence : SolverError {
    using SolverError::SolverError;
};

struct InfeasibleNumerics : SolverError {
    using SolverError::SolverError;
};

struct EigenFailure : SolverError {
    using SolverError::SolverError;
};

}  // namespace orbitmetric
