#pragma once

#include <stdexcept>

namespace degroot {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NegativeEntry : Error { using Error::Error; };
struct RowSumViolation : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct EmptyVector : Error { using Error::Error; };

struct NotStronglyConnected : Error { using Error::Error; };
struct GenerationFailure : Error { using Error::Error; };

struct InvalidLambda : Error { using Error::Error; };
struct InvalidTargets : Error { using Error::Error; };
struct RangeTooSmall : Error { using Error::Error; };

struct NoConvergence : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };

struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace degroot
