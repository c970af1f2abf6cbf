#pragma once

#include "dendrite/accessory.hpp"

#include <map>
#include <string>

namespace dendrite {

struct SvgOptions {
    double stroke_width = 0.01;
    std::string stroke = "#000000";
    /// Fraction of the bounding radius added around the drawing.
    double margin = 0.05;
};

/// One <path> per edge in BranchId order, y pointing up. `style_map` binds an
/// accessory channel to an attribute (`stroke-width`, `stroke-opacity`,
/// `stroke`, ...); each edge takes the channel's mean over its samples.
/// A three-component channel bound to `stroke` becomes rgb() with components in [0, 1].
std::string to_svg(const DecoratedTree& decorated, const std::map<std::string, std::string>& style_map = {},
                   const SvgOptions& options = {});

} // namespace dendrite
