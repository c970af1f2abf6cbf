#include "dendrite/perimeter.hpp"

#include "dendrite/error.hpp"

#include <cmath>

namespace dendrite {

namespace {

double cross(double ax, double ay, double bx, double by) {
    return ax * by - ay * bx;
}

int orient(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c) {
    const double v = cross(b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1]);
    return (v > 0.0) - (v < 0.0);
}

bool on_segment(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& p) {
    return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= p[1] &&
           p[1] <= std::max(a[1], b[1]);
}

bool segments_intersect(const std::array<double, 2>& a, const std::array<double, 2>& b, const std::array<double, 2>& c,
                        const std::array<double, 2>& d) {
    const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4)
        return true;
    return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
           (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
}

} // namespace

Polygon validate_polygon(Polygon poly) {
    if (poly.size() > 1 && poly.front() == poly.back())
        poly.pop_back();
    if (poly.size() < 3)
        throw DegenerateError("perimeter needs at least three distinct vertices");
    for (const auto& p : poly)
        if (!std::isfinite(p[0]) || !std::isfinite(p[1]))
            throw DegenerateError("perimeter vertex is not finite");
    double area = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        area += cross(p[0], p[1], q[0], q[1]);
    }
    if (area == 0.0)
        throw DegenerateError("perimeter encloses no area");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1))
                continue;
            if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
                throw DegenerateError("perimeter is self-intersecting (edges " + std::to_string(i) + " and " +
                                      std::to_string(j) + ")");
        }
    return poly;
}

PerimeterSteering::PerimeterSteering(Polygon polygon, double gain, double falloff, std::shared_ptr<const Steering> inner)
    : polygon_(validate_polygon(std::move(polygon))), gain_(gain), falloff_(falloff), inner_(std::move(inner)) {
    if (!(falloff > 0.0) || !std::isfinite(falloff))
        throw DomainError("falloff must be positive");
    if (!std::isfinite(gain))
        throw DomainError("gain must be finite");
}

std::array<double, 2> PerimeterSteering::nearest(std::span<const double> p) const {
    std::array<double, 2> best{};
    double best_d2 = INFINITY;
    const std::size_t n = polygon_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = polygon_[i];
        const auto& b = polygon_[(i + 1) % n];
        const double ex = b[0] - a[0], ey = b[1] - a[1];
        const double len2 = ex * ex + ey * ey;
        double t = len2 > 0.0 ? ((p[0] - a[0]) * ex + (p[1] - a[1]) * ey) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const std::array<double, 2> q{a[0] + t * ex, a[1] + t * ey};
        const double d2 = (q[0] - p[0]) * (q[0] - p[0]) + (q[1] - p[1]) * (q[1] - p[1]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = q;
        }
    }
    return best;
}

double PerimeterSteering::distance(std::span<const double> p) const {
    const auto q = nearest(p);
    return std::hypot(q[0] - p[0], q[1] - p[1]);
}

double PerimeterSteering::turn_rate(std::span<const double> position, std::span<const double> heading) const {
    double rate = inner_ ? inner_->turn_rate(position, heading) : 0.0;
    if (gain_ == 0.0)
        return rate;
    const auto q = nearest(position);
    const double dx = q[0] - position[0], dy = q[1] - position[1];
    const double side = cross(std::cos(heading[0]), std::sin(heading[0]), dx, dy);
    const double sign = (side > 0.0) - (side < 0.0);
    return rate - gain_ * std::exp(-std::hypot(dx, dy) / falloff_) * sign;
}

EnhancedTree perimeter_feedback(const EnhancedTree& enhanced, Polygon perimeter, double gain, double falloff) {
    if (enhanced.empty())
        throw DomainError("perimeter feedback needs a tree");
    if (enhanced.spec->coords.dim() != 2)
        throw DimensionError("perimeter feedback is defined for 2D trees");
    auto steering = std::make_shared<PerimeterSteering>(std::move(perimeter), gain, falloff, enhanced.spec->steering);
    EnhancedTree out = enhanced;
    out.spec->steering = steering;
    out.accessories.add(AccessoryFn{"perimeter_distance",
                                    AccessoryKind::absolute,
                                    {[steering](const SampleContext& c) { return steering->distance(c.position); }},
                                    {},
                                    "length"});
    return out;
}

} // namespace dendrite
