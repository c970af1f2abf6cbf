#pragma once

#include "dendrite/grid.hpp"
#include "dendrite/scalar_fn.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dendrite {

/// Position plus accumulated heading angles (azimuth first, then polar angles).
struct Pose {
    std::vector<double> position;
    std::vector<double> heading;

    int dim() const noexcept { return static_cast<int>(position.size()); }

    static Pose origin(int dim);
    static Pose at(std::vector<double> position, std::vector<double> heading);
};

/// Radial and angular derivative coordinate functions sampled on a uniform grid.
///
/// Radial values are lengths per unit s and must be non-negative; angular values
/// are radians per unit s. A path in n dimensions has n - 1 angular channels.
class DerivativeCoords {
public:
    DerivativeCoords(SGrid grid, std::vector<double> radial, std::vector<std::vector<double>> angular);
    DerivativeCoords(SGrid grid, const ScalarFn& radial, const std::vector<ScalarFn>& angular);

    int dim() const noexcept { return static_cast<int>(angular_.size()) + 1; }
    const SGrid& grid() const noexcept { return grid_; }
    const std::vector<double>& radial() const noexcept { return radial_; }
    const std::vector<double>& angular(std::size_t axis) const { return angular_.at(axis); }
    const std::vector<std::vector<double>>& angular_all() const noexcept { return angular_; }

private:
    void validate() const;

    SGrid grid_;
    std::vector<double> radial_;
    std::vector<std::vector<double>> angular_;
};

/// Sampled path: one point, heading and cumulative arc length per grid sample.
class PathPolyline {
public:
    PathPolyline(int dim, SGrid grid);

    int dim() const noexcept { return dim_; }
    const SGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return cum_arc_.size(); }

    std::span<const double> point(std::size_t k) const {
        return {points_.data() + k * dim_, static_cast<std::size_t>(dim_)};
    }
    std::span<const double> heading(std::size_t k) const {
        return {headings_.data() + k * (dim_ - 1), static_cast<std::size_t>(dim_ - 1)};
    }
    double cum_arc(std::size_t k) const { return cum_arc_[k]; }

    std::span<double> point_mut(std::size_t k) { return {points_.data() + k * dim_, static_cast<std::size_t>(dim_)}; }
    std::span<double> heading_mut(std::size_t k) {
        return {headings_.data() + k * (dim_ - 1), static_cast<std::size_t>(dim_ - 1)};
    }
    double& cum_arc_mut(std::size_t k) { return cum_arc_[k]; }

    const std::vector<double>& flat_points() const noexcept { return points_; }
    const std::vector<double>& flat_headings() const noexcept { return headings_; }
    const std::vector<double>& cum_arcs() const noexcept { return cum_arc_; }

    Pose pose(std::size_t k) const;

private:
    int dim_;
    SGrid grid_;
    std::vector<double> points_;
    std::vector<double> headings_;
    std::vector<double> cum_arc_;
};

/// Position-dependent correction of the first angular rate, in radians per unit s.
class Steering {
public:
    virtual ~Steering() = default;
    virtual double turn_rate(std::span<const double> position, std::span<const double> heading) const = 0;
};

/// Unit direction of a heading: (cos, sin) in 2D, the spherical form
/// (cos a0 sin a1, sin a0 sin a1, cos a1) in 3D, and the hyperspherical
/// chain dir_n = (sin(a_{n-2}) * dir_{n-1}, cos(a_{n-2})) beyond.
void unit_direction(std::span<const double> heading, std::span<double> out);

/// Inverse of unit_direction for a non-zero vector. Angles come back in principal
/// ranges (azimuth in (-pi, pi], polar angles in [0, pi]).
std::vector<double> heading_of(std::span<const double> direction);

/// Steps [first, last) of a grid, integrated from `start`.
struct IntegrationRange {
    std::size_t first = 0;
    std::size_t last = 0;
    /// Cumulative arc length already travelled at `first`.
    double start_arc = 0.0;
    /// Per-axis multipliers applied to the angular rates; empty means all +1.
    std::span<const double> multipliers{};
    const Steering* steering = nullptr;
};

/// Left-endpoint Riemann accumulation. For each step k the heading advances by
/// angular(s_k) * ds before the position advances by radial(s_k) * ds along the
/// new heading.
PathPolyline integrate_range(const DerivativeCoords& coords, const Pose& start, const IntegrationRange& range);

/// Whole-domain path integration.
PathPolyline integrate_path(const DerivativeCoords& coords, const Pose& start);

struct DerivedPath {
    DerivativeCoords coords;
    /// Pose from which integrate_path reproduces the samples.
    Pose start;
};

/// Converts Cartesian samples (2D or 3D) into derivative coordinates using
/// forward differences, so that integrate_path(result.coords, result.start)
/// is the exact discrete inverse.
DerivedPath derive_coords(const std::vector<std::vector<double>>& samples, const SGrid& grid, int dim);

/// Riemann sum of the radial coordinate over [s1, s2].
double arc_length(const DerivativeCoords& coords, double s1, double s2);

/// Riemann sum of one angular coordinate over [s1, s2].
double turn_angle(const DerivativeCoords& coords, double s1, double s2, std::size_t axis = 0);

/// Moves the coordinates to a new step while keeping every integral over
/// intervals common to both grids unchanged (isolated impulses stay impulses).
DerivativeCoords resample(const DerivativeCoords& coords, double new_delta_s);

/// Same, for one channel.
std::vector<double> resample_channel(const std::vector<double>& values, const SGrid& from, const SGrid& to);

} // namespace dendrite
