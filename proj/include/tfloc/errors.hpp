#pragma once

#include <stdexcept>

namespace tfloc {

// Thrown when an iterative method (root finding, quadrature refinement,
// multiplier solve) fails to reach its tolerance within the iteration cap.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tfloc
