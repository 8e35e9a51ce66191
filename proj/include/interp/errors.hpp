#pragma once

#include <stdexcept>
#include <string>

namespace interp {

/// Base class for all numerical/contract failures raised by this library.
/// Configuration mistakes (bad sizes, non-finite input) throw
/// std::invalid_argument instead.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Linear programming
struct InfeasibleError : Error { using Error::Error; };
struct UnboundedError : Error { using Error::Error; };

// Geometry
struct DegenerateSimplex : Error { using Error::Error; };
struct DegenerateConfiguration : Error { using Error::Error; };

// Neighbors
struct EmptyDataset : Error { using Error::Error; };
struct KTooLarge : Error { using Error::Error; };

// Estimators
struct NonPositiveArgument : Error { using Error::Error; };

// Synthetic problems
struct OutsideDomain : Error { using Error::Error; };

// Graph SSL
struct SingularSystem : Error { using Error::Error; };
struct NegativeKappa : Error { using Error::Error; };
struct NoLabels : Error { using Error::Error; };

// Harness
struct SingularKernelMatrix : Error { using Error::Error; };
struct NonMonotoneLabels : Error { using Error::Error; };
struct NonPositiveValue : Error { using Error::Error; };

/// Internal safety valve: iteration caps, unexpected loss of precision.
struct NumericalError : Error { using Error::Error; };

}  // namespace interp
