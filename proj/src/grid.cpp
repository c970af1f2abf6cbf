#include "dendrite/grid.hpp"

#include "dendrite/error.hpp"

#include <cmath>
#include <string>

namespace dendrite {

SGrid::SGrid(double s_min, double s_max, double delta_s) {
    if (!std::isfinite(s_min) || !std::isfinite(s_max) || !std::isfinite(delta_s))
        throw DomainError("grid bounds and step must be finite");
    if (!(delta_s > 0.0))
        throw DomainError("grid step must be positive");
    if (!(s_max > s_min))
        throw DomainError("grid requires s_max > s_min");
    const double steps = std::round((s_max - s_min) / delta_s);
    if (steps < 1.0)
        throw DomainError("grid must contain at least two samples");
    s_min_ = s_min;
    delta_s_ = delta_s;
    count_ = static_cast<std::size_t>(steps) + 1;
}

SGrid SGrid::from_count(double s_min, double delta_s, std::size_t count) {
    if (!std::isfinite(s_min) || !std::isfinite(delta_s) || !(delta_s > 0.0))
        throw DomainError("grid step must be positive and finite");
    if (count < 2)
        throw DomainError("grid must contain at least two samples");
    SGrid g;
    g.s_min_ = s_min;
    g.delta_s_ = delta_s;
    g.count_ = count;
    return g;
}

bool SGrid::contains(double s) const noexcept {
    const double slack = 0.5 * delta_s_;
    return s >= s_min_ - slack && s <= s_max() + slack;
}

std::size_t SGrid::index_of(double s) const {
    if (!std::isfinite(s) || !contains(s))
        throw DomainError("s = " + std::to_string(s) + " is outside the grid [" +
                          std::to_string(s_min_) + ", " + std::to_string(s_max()) + "]");
    const double k = std::round((s - s_min_) / delta_s_);
    if (k <= 0.0)
        return 0;
    const auto idx = static_cast<std::size_t>(k);
    return idx >= count_ ? count_ - 1 : idx;
}

} // namespace dendrite
