#include "dendrite/curve.hpp"

#include "dendrite/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dendrite {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x))
            return false;
    return true;
}

} // namespace

Pose Pose::origin(int dim) {
    if (dim < 2)
        throw DimensionError("pose dimension must be at least 2");
    return Pose{std::vector<double>(dim, 0.0), std::vector<double>(dim - 1, 0.0)};
}

Pose Pose::at(std::vector<double> position, std::vector<double> heading) {
    if (position.size() < 2 || heading.size() + 1 != position.size())
        throw DimensionError("pose needs dim >= 2 positions and dim - 1 heading angles");
    if (!all_finite(position) || !all_finite(heading))
        throw DomainError("pose position and heading must be finite");
    return Pose{std::move(position), std::move(heading)};
}

// --- DerivativeCoords ------------------------------------------------------

DerivativeCoords::DerivativeCoords(SGrid grid, std::vector<double> radial, std::vector<std::vector<double>> angular)
    : grid_(grid), radial_(std::move(radial)), angular_(std::move(angular)) {
    validate();
}

DerivativeCoords::DerivativeCoords(SGrid grid, const ScalarFn& radial, const std::vector<ScalarFn>& angular)
    : grid_(grid), radial_(radial.sample(grid)) {
    angular_.reserve(angular.size());
    for (const auto& fn : angular)
        angular_.push_back(fn.sample(grid));
    validate();
}

void DerivativeCoords::validate() const {
    if (angular_.empty())
        throw DimensionError("derivative coordinates need at least one angular channel (dim >= 2)");
    const std::size_t n = grid_.count();
    if (radial_.size() != n)
        throw DomainError("radial channel has " + std::to_string(radial_.size()) + " samples, grid has " +
                          std::to_string(n));
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(radial_[k]))
            throw NonFiniteError("radial coordinate is not finite", k);
        if (radial_[k] < 0.0)
            throw DomainError("radial coordinate must be non-negative (s = " + std::to_string(grid_.at(k)) + ")");
    }
    for (std::size_t a = 0; a < angular_.size(); ++a) {
        if (angular_[a].size() != n)
            throw DomainError("angular channel " + std::to_string(a) + " has the wrong number of samples");
        for (std::size_t k = 0; k < n; ++k)
            if (!std::isfinite(angular_[a][k]))
                throw NonFiniteError("angular coordinate " + std::to_string(a) + " is not finite", k);
    }
}

// --- PathPolyline -----------------------------------------------------------

PathPolyline::PathPolyline(int dim, SGrid grid)
    : dim_(dim), grid_(grid), points_(grid.count() * dim, 0.0), headings_(grid.count() * (dim - 1), 0.0),
      cum_arc_(grid.count(), 0.0) {
    if (dim < 2)
        throw DimensionError("polyline dimension must be at least 2");
}

Pose PathPolyline::pose(std::size_t k) const {
    auto p = point(k);
    auto h = heading(k);
    return Pose{{p.begin(), p.end()}, {h.begin(), h.end()}};
}

// --- direction chain ---------------------------------------------------------

void unit_direction(std::span<const double> heading, std::span<double> out) {
    const std::size_t n = out.size();
    out[0] = std::cos(heading[0]);
    out[1] = std::sin(heading[0]);
    for (std::size_t d = 2; d < n; ++d) {
        const double polar = heading[d - 1];
        const double sp = std::sin(polar);
        for (std::size_t i = 0; i < d; ++i)
            out[i] *= sp;
        out[d] = std::cos(polar);
    }
}

std::vector<double> heading_of(std::span<const double> direction) {
    const std::size_t n = direction.size();
    if (n < 2)
        throw DimensionError("direction must have at least two components");
    std::vector<double> h(n - 1, 0.0);
    std::vector<double> rest(direction.begin(), direction.end());
    for (std::size_t d = n - 1; d >= 2; --d) {
        double norm = 0.0;
        for (std::size_t i = 0; i <= d; ++i)
            norm += rest[i] * rest[i];
        norm = std::sqrt(norm);
        if (norm == 0.0)
            throw DegenerateError("cannot take the heading of a zero vector");
        const double c = std::clamp(rest[d] / norm, -1.0, 1.0);
        h[d - 1] = std::acos(c);
    }
    // At a pole the azimuth is undefined and falls back to zero.
    h[0] = (rest[0] == 0.0 && rest[1] == 0.0) ? 0.0 : std::atan2(rest[1], rest[0]);
    return h;
}

// --- integration -------------------------------------------------------------

PathPolyline integrate_range(const DerivativeCoords& coords, const Pose& start, const IntegrationRange& range) {
    const int dim = coords.dim();
    if (start.dim() != dim || static_cast<int>(start.heading.size()) != dim - 1)
        throw DimensionError("start pose has dimension " + std::to_string(start.dim()) +
                             " but the coordinates have dimension " + std::to_string(dim));
    const SGrid& grid = coords.grid();
    if (range.last <= range.first || range.last >= grid.count())
        throw DomainError("integration range [" + std::to_string(range.first) + ", " + std::to_string(range.last) +
                          "] is empty or outside the grid");
    if (!range.multipliers.empty() && range.multipliers.size() != static_cast<std::size_t>(dim - 1))
        throw DimensionError("one multiplier per angular axis is required");
    if (range.steering && dim != 2)
        throw DimensionError("steering is only defined for 2D paths");

    const double ds = grid.delta_s();
    PathPolyline out(dim, SGrid::from_count(grid.at(range.first), ds, range.last - range.first + 1));

    std::vector<double> pos = start.position;
    std::vector<double> head = start.heading;
    std::vector<double> dir(dim);
    std::vector<double> rate_scale(dim - 1, ds);
    for (std::size_t a = 0; a < rate_scale.size(); ++a)
        if (!range.multipliers.empty())
            rate_scale[a] = range.multipliers[a] * ds;

    const auto& radial = coords.radial();
    const auto& angular = coords.angular_all();
    double arc = range.start_arc;

    auto store = [&](std::size_t j) {
        auto p = out.point_mut(j);
        std::copy(pos.begin(), pos.end(), p.begin());
        auto h = out.heading_mut(j);
        std::copy(head.begin(), head.end(), h.begin());
        out.cum_arc_mut(j) = arc;
    };
    store(0);

    if (dim == 2) {
        double x = pos[0], y = pos[1], phi = head[0];
        const auto& ang = angular[0];
        for (std::size_t k = range.first; k < range.last; ++k) {
            double turn = ang[k] * rate_scale[0];
            if (range.steering) {
                const double hp[1] = {phi};
                const double pp[2] = {x, y};
                turn += range.steering->turn_rate(pp, hp) * ds;
            }
            phi += turn;
            const double step = radial[k] * ds;
            x += step * std::cos(phi);
            y += step * std::sin(phi);
            arc += step;
            if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(phi))
                throw NonFiniteError("path integration produced a non-finite point", k);
            const std::size_t j = k - range.first + 1;
            auto p = out.point_mut(j);
            p[0] = x;
            p[1] = y;
            out.heading_mut(j)[0] = phi;
            out.cum_arc_mut(j) = arc;
        }
        return out;
    }

    for (std::size_t k = range.first; k < range.last; ++k) {
        for (std::size_t a = 0; a < head.size(); ++a)
            head[a] += angular[a][k] * rate_scale[a];
        unit_direction(head, dir);
        const double step = radial[k] * ds;
        for (int i = 0; i < dim; ++i)
            pos[i] += step * dir[i];
        arc += step;
        if (!all_finite(pos) || !all_finite(head))
            throw NonFiniteError("path integration produced a non-finite point", k);
        store(k - range.first + 1);
    }
    return out;
}

PathPolyline integrate_path(const DerivativeCoords& coords, const Pose& start) {
    IntegrationRange range;
    range.first = 0;
    range.last = coords.grid().count() - 1;
    return integrate_range(coords, start, range);
}

// --- inverse ------------------------------------------------------------------

DerivedPath derive_coords(const std::vector<std::vector<double>>& samples, const SGrid& grid, int dim) {
    if (dim != 2 && dim != 3)
        throw DimensionError("derive_coords supports dim 2 and 3 only (got " + std::to_string(dim) + ")");
    const std::size_t n = grid.count();
    if (samples.size() != n)
        throw DomainError("expected " + std::to_string(n) + " samples, got " + std::to_string(samples.size()));
    for (std::size_t k = 0; k < n; ++k) {
        if (samples[k].size() != static_cast<std::size_t>(dim))
            throw DimensionError("sample " + std::to_string(k) + " does not have " + std::to_string(dim) +
                                 " components");
        if (!all_finite(samples[k]))
            throw NonFiniteError("sample is not finite", k);
    }

    const double ds = grid.delta_s();
    std::vector<double> radial(n, 0.0);
    std::vector<std::vector<double>> angular(dim - 1, std::vector<double>(n, 0.0));
    std::vector<double> prev_heading;
    std::vector<double> first_heading;
    std::vector<double> d(dim);

    for (std::size_t k = 0; k + 1 < n; ++k) {
        double norm2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            d[i] = samples[k + 1][i] - samples[k][i];
            norm2 += d[i] * d[i];
        }
        const double norm = std::sqrt(norm2);
        if (norm == 0.0)
            throw DegenerateError("zero velocity between samples " + std::to_string(k) + " and " +
                                  std::to_string(k + 1) + "; the direction angle is undefined there");
        std::vector<double> h(dim - 1);
        const bool on_axis = d[0] == 0.0 && d[1] == 0.0;
        h[0] = on_axis ? (prev_heading.empty() ? 0.0 : prev_heading[0]) : std::atan2(d[1], d[0]);
        if (dim == 3)
            h[1] = std::acos(std::clamp(d[2] / norm, -1.0, 1.0));
        if (!prev_heading.empty()) {
            // Pick the branch of the azimuth closest to the previous one.
            h[0] = prev_heading[0] + std::remainder(h[0] - prev_heading[0], kTwoPi);
            for (int a = 0; a < dim - 1; ++a)
                angular[a][k] = (h[a] - prev_heading[a]) / ds;
        } else {
            first_heading = h;
        }
        radial[k] = norm / ds;
        prev_heading = std::move(h);
    }
    radial[n - 1] = radial[n - 2];

    Pose start{samples.front(), first_heading};
    return DerivedPath{DerivativeCoords(grid, std::move(radial), std::move(angular)), std::move(start)};
}

// --- integrals ------------------------------------------------------------------

namespace {

std::pair<std::size_t, std::size_t> index_range(const SGrid& grid, double s1, double s2) {
    if (!(s1 <= s2))
        throw DomainError("integration bounds must satisfy s1 <= s2");
    return {grid.index_of(s1), grid.index_of(s2)};
}

double riemann(const std::vector<double>& v, std::size_t i1, std::size_t i2, double ds) {
    double sum = 0.0;
    for (std::size_t k = i1; k < i2; ++k)
        sum += v[k];
    return sum * ds;
}

} // namespace

double arc_length(const DerivativeCoords& coords, double s1, double s2) {
    auto [i1, i2] = index_range(coords.grid(), s1, s2);
    return riemann(coords.radial(), i1, i2, coords.grid().delta_s());
}

double turn_angle(const DerivativeCoords& coords, double s1, double s2, std::size_t axis) {
    if (axis >= static_cast<std::size_t>(coords.dim() - 1))
        throw DimensionError("angular axis " + std::to_string(axis) + " does not exist");
    auto [i1, i2] = index_range(coords.grid(), s1, s2);
    return riemann(coords.angular(axis), i1, i2, coords.grid().delta_s());
}

// --- resampling ------------------------------------------------------------------

std::vector<double> resample_channel(const std::vector<double>& values, const SGrid& from, const SGrid& to) {
    const std::size_t n = from.count();
    if (values.size() != n)
        throw DomainError("channel length does not match its grid");
    const double h = from.delta_s();
    const double h_new = to.delta_s();

    // Isolated non-zero samples are impulses: they carry a finite integral on a
    // single step and must stay concentrated on one sample of the new grid.
    std::vector<double> smooth = values;
    std::vector<std::pair<double, double>> impulses; // (s, integral)
    for (std::size_t k = 0; k < n; ++k) {
        if (values[k] == 0.0)
            continue;
        const bool left_zero = k == 0 || values[k - 1] == 0.0;
        const bool right_zero = k + 1 == n || values[k + 1] == 0.0;
        if (left_zero && right_zero && n > 2) {
            impulses.emplace_back(from.at(k), values[k] * h);
            smooth[k] = 0.0;
        }
    }

    // The smooth part is the step function v_k on [s_k, s_k + h); its primitive
    // F is piecewise linear and cell averages of the new grid preserve it.
    std::vector<double> prefix(n, 0.0);
    for (std::size_t k = 1; k < n; ++k)
        prefix[k] = prefix[k - 1] + smooth[k - 1] * h;
    auto primitive = [&](double s) {
        const double x = (s - from.s_min()) / h;
        if (x <= 0.0)
            return smooth[0] * (s - from.s_min());
        const double cells = static_cast<double>(n - 1);
        if (x >= cells)
            return prefix[n - 1] + smooth[n - 2] * (s - from.at(n - 1));
        const auto k = static_cast<std::size_t>(std::floor(x));
        return prefix[k] + smooth[k] * (s - from.at(k));
    };

    const std::size_t m = to.count();
    std::vector<double> out(m, 0.0);
    for (std::size_t j = 0; j + 1 < m; ++j)
        out[j] = (primitive(to.at(j) + h_new) - primitive(to.at(j))) / h_new;
    // The last sample is never integrated; carry the nearest old value.
    {
        const double x = std::round((to.at(m - 1) - from.s_min()) / h);
        const std::size_t k = x <= 0.0 ? 0 : std::min(static_cast<std::size_t>(x), n - 1);
        out[m - 1] = smooth[k];
    }
    for (const auto& [s, integral] : impulses) {
        const double x = std::round((s - to.s_min()) / h_new);
        const std::size_t j = x <= 0.0 ? 0 : std::min(static_cast<std::size_t>(x), m - 1);
        out[j] += integral / h_new;
    }
    return out;
}

DerivativeCoords resample(const DerivativeCoords& coords, double new_delta_s) {
    if (!(new_delta_s > 0.0) || !std::isfinite(new_delta_s))
        throw DomainError("new step must be positive");
    const SGrid& from = coords.grid();
    const double span = from.s_max() - from.s_min();
    const double steps = std::round(span / new_delta_s);
    if (steps < 1.0)
        throw DomainError("resampled grid would have fewer than two points");
    const SGrid to = SGrid::from_count(from.s_min(), new_delta_s, static_cast<std::size_t>(steps) + 1);

    std::vector<double> radial = resample_channel(coords.radial(), from, to);
    for (double& r : radial)
        if (r < 0.0)
            r = 0.0; // rounding in the cell averages of a non-negative function
    std::vector<std::vector<double>> angular;
    for (const auto& ch : coords.angular_all())
        angular.push_back(resample_channel(ch, from, to));
    return DerivativeCoords(to, std::move(radial), std::move(angular));
}

} // namespace dendrite
