// Exception taxonomy for the library. Callers can catch the base Error or
// react per kind; every message names the offending block or quantity.
#pragma once

#include <stdexcept>

namespace lftid {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input matrices do not conform to the declared shapes.
struct DimensionMismatch : Error { using Error::Error; };

// A requested dense product or allocation is unreasonably large.
struct SizeError : Error { using Error::Error; };

// A decomposition or solve produced unusable output.
struct NumericalError : Error { using Error::Error; };

// The state matrix and the interpolation matrix share an eigenvalue, so the
// defining linear equation of the interpolation solution is singular.
struct SharedEigenvalue : Error { using Error::Error; };

// I - P(theta) D_zv failed the invertibility test.
struct IllPosed : Error { using Error::Error; };

// Transfer function evaluated at an eigenvalue of A(theta).
struct SingularResolvent : Error { using Error::Error; };

// A special-case test was invoked on a plant that violates its
// structural applicability condition.
struct InapplicableCase : Error { using Error::Error; };

// The state dimension is smaller than the interpolation order. Handling
// that case requires a block-diagonal reduction of the interpolation
// matrix, which this toolkit deliberately does not implement.
struct DimensionOrder : Error { using Error::Error; };

// NaN or Inf appeared in iterates.
struct NonFinite : Error { using Error::Error; };

// Malformed configuration document.
struct ParseError : Error { using Error::Error; };

}  // namespace lftid
