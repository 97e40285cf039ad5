#pragma once

#include <stdexcept>
#include <string>

namespace smp {

/// Base class of every error thrown by the toolkit.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MismatchedSpaceError : Error { using Error::Error; };
struct OverflowError : Error { using Error::Error; };
struct UnboundedFunctionError : Error { using Error::Error; };
struct TruncationTooLooseError : Error { using Error::Error; };
struct CompositionUnavailableError : Error { using Error::Error; };
struct NegativeFunctionError : Error { using Error::Error; };
struct NotMonotoneError : Error { using Error::Error; };
struct OrderTooHighError : Error { using Error::Error; };
struct KernelUnavailableError : Error { using Error::Error; };
struct DepthExceededError : Error { using Error::Error; };
struct NotFiberConstantError : Error { using Error::Error; };
struct NotInCatalogueError : Error { using Error::Error; };
struct OutOfDomainError : Error { using Error::Error; };
struct SideConditionViolatedError : Error { using Error::Error; };
struct UnsupportedSpaceError : Error { using Error::Error; };
struct TooManyCensoredError : Error { using Error::Error; };
struct InsufficientSamplesError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace smp
