#pragma once

#include <string>
#include <vector>

#include "kschur/harness.hpp"

namespace kschur::cli {

// Eigenvalues of every window in the complex plane, one colour per method,
// with the unit circle for reference.
std::string eigenvalue_scatter_svg(const std::vector<WindowMetrics>& metrics);

// Log-scale max reconstruction error and relative consistency residual per
// step, with a horizontal line at floor_level.
std::string error_curves_svg(const std::vector<WindowMetrics>& metrics, double floor_level);

}  // namespace kschur::cli
