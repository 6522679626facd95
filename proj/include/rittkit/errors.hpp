#ifndef RITTKIT_ERRORS_HPP
#define RITTKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rittkit {

// Shape/carrier mismatches between values that must agree.
struct structural_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bad user-facing parameters (grid sizes, angles out of range, ...).
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Tensor-leg dimension guard exceeded.
struct guard_error : std::length_error {
    using std::length_error::length_error;
};

// Violated mathematical precondition (non-symmetric square input, spectrum
// outside the required region, singular I+T, ...).
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Eigensolver non-convergence and friends.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace rittkit

#endif
