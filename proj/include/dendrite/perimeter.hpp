#pragma once

#include "dendrite/accessory.hpp"

#include <array>
#include <vector>

namespace dendrite {

using Polygon = std::vector<std::array<double, 2>>;

/// Turns branches away from (gain > 0) or towards (gain < 0) a closed polygon:
/// rate = -gain * exp(-d / falloff) * sign(cross(t, q - p)), where q is the
/// perimeter point nearest to p and t the unit tangent.
class PerimeterSteering : public Steering {
public:
    /// Throws DegenerateError unless the polygon is simple with non-zero area.
    PerimeterSteering(Polygon polygon, double gain, double falloff, std::shared_ptr<const Steering> inner = {});

    double turn_rate(std::span<const double> position, std::span<const double> heading) const override;

    /// Euclidean distance from p to the perimeter.
    double distance(std::span<const double> p) const;

    const Polygon& polygon() const noexcept { return polygon_; }

private:
    std::array<double, 2> nearest(std::span<const double> p) const;

    Polygon polygon_;
    double gain_;
    double falloff_;
    std::shared_ptr<const Steering> inner_;
};

/// Polygon with the closing duplicate vertex removed, validated.
Polygon validate_polygon(Polygon polygon);

/// Adds perimeter steering to a 2D tree and records the distance to the
/// perimeter as the absolute channel `perimeter_distance`.
EnhancedTree perimeter_feedback(const EnhancedTree& enhanced, Polygon perimeter, double gain, double falloff);

} // namespace dendrite
