#pragma once

#include "dendrite/accessory.hpp"

#include <vector>

namespace dendrite {

/// Orthographic projection onto the span of `basis` (one row per target axis).
/// Headings are recomputed from the projected directions; arc lengths,
/// s values and channels are kept. Rows must be orthonormal to 1e-9.
DecoratedTree project(const DecoratedTree& decorated, const std::vector<std::vector<double>>& basis);

/// The first `target_dim` standard axes of a `source_dim` space.
std::vector<std::vector<double>> leading_axes(int source_dim, int target_dim);

} // namespace dendrite
