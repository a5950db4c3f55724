#pragma once

#include <stdexcept>
#include <string>

namespace graphkdv {

struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a linear operator that must be inverted has a detected kernel.
struct SingularOperator : NumericalError {
    using NumericalError::NumericalError;
};

/// The 3x3 vertex system of the resolvent is (numerically) singular.
struct SingularSystem : NumericalError {
    using NumericalError::NumericalError;
};

struct AccuracyError : NumericalError {
    using NumericalError::NumericalError;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidArgument(msg);
}

}  // namespace graphkdv
