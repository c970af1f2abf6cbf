#pragma once

#include "dendrite/accessory.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dendrite {

struct TubeParams {
    int radial_segments = 8;
    /// Channel the radius is read from (component 0), times radius_scale.
    std::string radius_source = "width";
    /// `width` is a diameter, hence one half.
    double radius_scale = 0.5;
    /// Constant radius used when set, or when the channel is missing.
    std::optional<double> radius;
    bool cap_ends = true;
};

/// Triangles emitted for one edge whose polyline has `samples` distinct points.
std::size_t tube_triangle_count(std::size_t samples, int radial_segments, bool cap_ends);

/// Binary STL of a tube swept along every edge with parallel-transported
/// frames: 80-byte header, little-endian uint32 count, 50 bytes per triangle.
std::vector<std::uint8_t> to_stl(const DecoratedTree& decorated, const TubeParams& params = {});

} // namespace dendrite
