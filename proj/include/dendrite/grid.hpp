#pragma once

#include <cstddef>

namespace dendrite {

/// Uniform sampling of the path parameter s.
///
/// The grid is stored as (s_min, delta_s, count); s_max is derived as
/// s_min + (count - 1) * delta_s so that two grids built from the same
/// triple always agree bit-for-bit on every sample position.
class SGrid {
public:
    /// count = round((s_max - s_min) / delta_s) + 1. Throws DomainError when
    /// delta_s <= 0, s_max <= s_min or the grid would have fewer than 2 samples.
    SGrid(double s_min, double s_max, double delta_s);

    static SGrid from_count(double s_min, double delta_s, std::size_t count);

    double s_min() const noexcept { return s_min_; }
    double s_max() const noexcept { return at(count_ - 1); }
    double delta_s() const noexcept { return delta_s_; }
    std::size_t count() const noexcept { return count_; }

    double at(std::size_t k) const noexcept { return s_min_ + static_cast<double>(k) * delta_s_; }

    /// True when s lies in [s_min, s_max] allowing half a step of slack at each end.
    bool contains(double s) const noexcept;

    /// Nearest sample index. Throws DomainError when s is outside the grid.
    std::size_t index_of(double s) const;

    bool operator==(const SGrid&) const = default;

private:
    SGrid() = default;

    double s_min_ = 0.0;
    double delta_s_ = 1.0;
    std::size_t count_ = 2;
};

} // namespace dendrite
