#include "dendrite/analysis.hpp"

#include "dendrite/error.hpp"
#include "tree_plan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_set>

namespace dendrite {

std::string_view to_string(Classification c) {
    switch (c) {
    case Classification::exact_fractal:
        return "exact_fractal";
    case Classification::quasi_fractal:
        return "quasi_fractal";
    case Classification::non_fractal:
        return "non_fractal";
    }
    return "non_fractal";
}

namespace {

struct Unit {
    std::size_t first;
    std::size_t length;
};

struct Structure {
    std::vector<Unit> units;
    std::size_t period = 0;
};

bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

// Branch intervals grouped into repeating units. When no repetition is found,
// every interval is its own unit and period stays 0.
Structure find_units(const TreeSpec& spec) {
    const std::size_t last = spec.coords.grid().count() - 1;
    std::vector<std::size_t> bounds;
    for (std::size_t k : spec.fork_indices())
        if (k < last)
            bounds.push_back(k);
    if (bounds.size() < 3)
        throw PreconditionError("self-similarity needs at least three branch points, found " +
                                std::to_string(bounds.size()));
    bounds.push_back(last);
    std::vector<std::size_t> lens;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
        lens.push_back(bounds[i + 1] - bounds[i]);

    auto periodic = [&](std::size_t p, std::size_t count) {
        for (std::size_t i = 0; i + p < count; ++i)
            if (lens[i] != lens[i + p])
                return false;
        return true;
    };

    Structure st;
    // A short final interval is a cut-off tip, not part of the pattern.
    for (std::size_t count : {lens.size(), lens.size() - 1}) {
        for (std::size_t p = 1; 2 * p <= count; ++p)
            if (periodic(p, count)) {
                st.period = p;
                break;
            }
        if (st.period) {
            for (std::size_t j = 0; (j + 1) * st.period <= count; ++j)
                st.units.push_back(Unit{bounds[j * st.period], bounds[(j + 1) * st.period] - bounds[j * st.period]});
            return st;
        }
    }
    for (std::size_t i = 0; i < lens.size(); ++i)
        st.units.push_back(Unit{bounds[i], lens[i]});
    return st;
}

// Pointwise ratio b / a over the common offsets; nullopt when it is not constant.
std::optional<double> unit_ratio(const std::vector<double>& v, const Unit& a, const Unit& b, double zero, double tol) {
    std::optional<double> ratio;
    const std::size_t n = std::min(a.length, b.length);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = v[a.first + j];
        const double y = v[b.first + j];
        const bool zx = std::abs(x) <= zero;
        const bool zy = std::abs(y) <= zero;
        if (zx && zy)
            continue;
        if (zx != zy)
            return std::nullopt;
        const double r = y / x;
        if (!ratio)
            ratio = r;
        else if (!close(*ratio, r, tol))
            return std::nullopt;
    }
    return ratio;
}

bool units_equal(const std::vector<double>& v, const Unit& a, const Unit& b, double scale, double tol) {
    const std::size_t n = std::min(a.length, b.length);
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(v[a.first + j] - v[b.first + j]) > tol * scale)
            return false;
    return true;
}

double radial_sum(const TreeSpec& spec, std::size_t first, std::size_t end) {
    const auto& r = spec.coords.radial();
    double sum = 0.0;
    for (std::size_t k = first; k < end; ++k)
        sum += r[k];
    return sum * spec.coords.grid().delta_s();
}

} // namespace

SimilarityReport classify_self_similarity(const TreeSpec& spec, double tolerance) {
    if (!(tolerance > 0.0))
        throw DomainError("tolerance must be positive");
    const Structure st = find_units(spec);
    SimilarityReport rep;
    rep.tolerance_used = tolerance;
    rep.period = st.period;
    rep.equidistant_met = st.period > 0;

    const auto& radial = spec.coords.radial();
    const double zero = tolerance * max_abs(radial);
    bool rho_ok = st.units.size() >= 2;
    std::vector<double> ratios;
    for (std::size_t k = 0; rho_ok && k + 1 < st.units.size(); ++k) {
        auto r = unit_ratio(radial, st.units[k], st.units[k + 1], zero, tolerance);
        if (!r || !(*r > 0.0))
            rho_ok = false;
        else
            ratios.push_back(*r);
    }
    bool same_ratio = rho_ok && !ratios.empty();
    for (double r : ratios)
        same_ratio = same_ratio && close(r, ratios.front(), tolerance);
    if (same_ratio)
        rep.rho = ratios.front();
    // With repeating units the scaling must also be the same from unit to unit.
    rep.rho_condition_met = rho_ok && (rep.equidistant_met ? same_ratio : true);

    bool phi_ok = true;
    for (const auto& channel : spec.coords.angular_all()) {
        const double scale = max_abs(channel);
        for (std::size_t k = 0; phi_ok && k + 1 < st.units.size(); ++k)
            phi_ok = units_equal(channel, st.units[k], st.units[k + 1], scale, tolerance);
    }
    rep.phi_condition_met = phi_ok;

    const bool rho_in_range = rep.rho && *rep.rho > 0.0 && *rep.rho < 1.0;
    if (rep.rho_condition_met && rep.phi_condition_met && rep.equidistant_met && rho_in_range)
        rep.classification = Classification::exact_fractal;
    else if (rep.rho_condition_met != rep.phi_condition_met)
        rep.classification = Classification::quasi_fractal;
    else
        rep.classification = Classification::non_fractal;
    return rep;
}

BoundReport bound_report(const TreeSpec& spec) {
    const auto plan = detail::make_plan(spec);
    const std::size_t end = plan.index.empty() ? plan.last : plan.stop.back();
    BoundReport rep;
    rep.evaluated_length = radial_sum(spec, 0, end);
    rep.radius = rep.evaluated_length;
    rep.truncated = end < plan.last;

    if (spec.fork_indices().size() < 3)
        return rep;
    const SimilarityReport sim = classify_self_similarity(spec);
    if (sim.classification != Classification::exact_fractal)
        return rep;

    // The limit tree continues the unit pattern forever: add the geometric tail
    // of the last complete unit.
    const Structure st = find_units(spec);
    const Unit* tail_unit = nullptr;
    for (const auto& u : st.units)
        if (u.first + u.length <= end)
            tail_unit = &u;
    if (!tail_unit)
        return rep;
    const double rho = *sim.rho;
    const double base = radial_sum(spec, 0, tail_unit->first + tail_unit->length);
    const double last_len = radial_sum(spec, tail_unit->first, tail_unit->first + tail_unit->length);
    rep.radius = std::max(rep.evaluated_length, base + last_len * rho / (1.0 - rho));
    rep.rho = rho;
    rep.extrapolated = true;
    rep.truncated = true;
    return rep;
}

double bounding_radius(const TreeSpec& spec) {
    return bound_report(spec).radius;
}

// --- canopies -----------------------------------------------------------------------

namespace {

std::vector<double> vec2(std::span<const double> to, std::span<const double> from) {
    return {to[0] - from[0], to[1] - from[1]};
}

double norm2(const std::vector<double>& v) {
    return std::hypot(v[0], v[1]);
}

std::span<const double> parent_position(const EvaluatedTree& t, const BranchId& id) {
    if (id.digits.size() == 1)
        return t.fork_origin();
    BranchId parent{std::vector<int>(id.digits.begin(), id.digits.end() - 1)};
    const EvaluatedNode* n = t.find(parent);
    if (!n)
        throw TopologyError("node " + parent.str() + " is missing");
    return n->position();
}

std::size_t fork_depth(const EvaluatedTree& t) {
    return t.max_generation();
}

double bisector(const EvaluatedTree& t) {
    const auto origin = t.fork_origin();
    double sx = 0.0, sy = 0.0, total = 0.0;
    for (const auto& n : t.nodes) {
        if (n.id.generation() != 1)
            continue;
        auto v = vec2(n.position(), origin);
        const double len = norm2(v);
        if (len == 0.0)
            continue;
        sx += v[0] / len;
        sy += v[1] / len;
        total += 1.0;
    }
    if (std::hypot(sx, sy) <= 1e-12 * std::max(total, 1.0))
        return t.fork_origin_heading()[0];
    return std::atan2(sy, sx);
}

} // namespace

double canopy_scale(const EvaluatedTree& a, const EvaluatedTree& b) {
    if (fork_depth(a) < 2 || fork_depth(b) < 2)
        throw PreconditionError("canopy scale needs trees with at least two generations");
    const BranchId first{{0}};
    const EvaluatedNode* na = a.find(first);
    const EvaluatedNode* nb = b.find(first);
    if (!na || !nb)
        throw TopologyError("both trees need a node [0]");
    double da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < na->pose.position.size(); ++i) {
        da += std::pow(na->pose.position[i] - a.fork_origin()[i], 2);
        db += std::pow(nb->pose.position[i] - b.fork_origin()[i], 2);
    }
    da = std::sqrt(da);
    db = std::sqrt(db);
    if (da == 0.0 || db == 0.0)
        throw DegenerateError("first branch has zero length; the canopy scale is undefined");
    return da / db;
}

EquivalenceReport compare_canopies(const EvaluatedTree& a, const EvaluatedTree& b, int generations) {
    if (a.dim != 2 || b.dim != 2)
        throw DimensionError("canopy comparison is implemented for 2D trees");
    if (generations < 2)
        throw PreconditionError("compare at least two generations");
    const auto gens = static_cast<std::size_t>(generations);
    if (fork_depth(a) < gens || fork_depth(b) < gens)
        throw PreconditionError("trees have fewer than " + std::to_string(generations) + " generations");

    std::vector<const EvaluatedNode*> na, nb;
    for (const auto& n : a.nodes)
        if (n.id.generation() >= 1 && n.id.generation() <= gens)
            na.push_back(&n);
    for (const auto& n : b.nodes)
        if (n.id.generation() >= 1 && n.id.generation() <= gens)
            nb.push_back(&n);
    if (na.size() != nb.size())
        throw TopologyError("trees have " + std::to_string(na.size()) + " and " + std::to_string(nb.size()) +
                            " nodes in the compared generations");
    for (std::size_t i = 0; i < na.size(); ++i)
        if (na[i]->id != nb[i]->id)
            throw TopologyError("branch " + na[i]->id.str() + " has no counterpart (found " + nb[i]->id.str() + ")");

    EquivalenceReport rep;
    rep.scale = canopy_scale(a, b);
    rep.rotation = bisector(a) - bisector(b);
    const double c = std::cos(rep.rotation) * rep.scale;
    const double s = std::sin(rep.rotation) * rep.scale;
    rep.per_generation_distance.assign(gens, 0.0);
    for (std::size_t i = 0; i < na.size(); ++i) {
        const BranchId& id = na[i]->id;
        const auto va = vec2(na[i]->position(), parent_position(a, id));
        const auto vb = vec2(nb[i]->position(), parent_position(b, id));
        const double dx = va[0] - (c * vb[0] - s * vb[1]);
        const double dy = va[1] - (s * vb[0] + c * vb[1]);
        double& d = rep.per_generation_distance[id.generation() - 1];
        d = std::max(d, std::hypot(dx, dy));
    }

    const auto& d = rep.per_generation_distance;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, n = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!(d[i] > 0.0))
            continue;
        const double x = static_cast<double>(i);
        const double y = std::log(d[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        n += 1.0;
    }
    const bool all_zero = n == 0.0;
    if (n >= 2.0)
        rep.fitted_rho = std::exp((n * sxy - sx * sy) / (n * sxx - sx * sx));
    bool decreasing = true;
    for (std::size_t i = 1; i < d.size(); ++i)
        decreasing = decreasing && d[i] < d[i - 1];
    rep.converged = all_zero || (decreasing && rep.fitted_rho > 0.0 && rep.fitted_rho < 1.0);
    return rep;
}

EquivalenceReport compare_canopies(const TreeSpec& a, const Pose& start_a, const TreeSpec& b, const Pose& start_b,
                                   int generations, const EvalOptions& options) {
    for (const auto* spec : {&a, &b}) {
        const auto rep = classify_self_similarity(*spec);
        if (rep.classification != Classification::exact_fractal)
            throw PreconditionError(std::string(spec == &a ? "first" : "second") + " tree is " +
                                    std::string(to_string(rep.classification)) + ", not an exact fractal");
    }
    return compare_canopies(evaluate_tree(a, start_a, options), evaluate_tree(b, start_b, options), generations);
}

// --- box counting ---------------------------------------------------------------------

namespace {

struct CellHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& c) const noexcept {
        return std::hash<std::int64_t>{}(c.first * 0x9E3779B97F4A7C15LL ^ c.second);
    }
};

std::size_t count_boxes(const EvaluatedTree& tree, double eps) {
    std::unordered_set<std::pair<std::int64_t, std::int64_t>, CellHash> cells;
    auto mark = [&](double x, double y) {
        cells.emplace(static_cast<std::int64_t>(std::floor(x / eps)), static_cast<std::int64_t>(std::floor(y / eps)));
    };
    mark(tree.root.position[0], tree.root.position[1]);
    const double step = eps / 4.0;
    for (const auto& e : tree.edges) {
        const auto& poly = e.polyline;
        for (std::size_t k = 0; k < poly.size(); ++k) {
            const auto p = poly.point(k);
            mark(p[0], p[1]);
            if (k + 1 == poly.size())
                break;
            const auto q = poly.point(k + 1);
            const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
            const auto pieces = static_cast<std::size_t>(std::ceil(len / step));
            for (std::size_t j = 1; j < pieces; ++j) {
                const double t = static_cast<double>(j) / static_cast<double>(pieces);
                mark(p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]));
            }
        }
    }
    return cells.size();
}

} // namespace

double estimate_box_dimension(const EvaluatedTree& tree, const std::vector<double>& scales) {
    if (tree.dim != 2)
        throw DimensionError("box counting is implemented for 2D trees");
    std::vector<double> eps = scales;
    for (double e : eps)
        if (!(e > 0.0) || !std::isfinite(e))
            throw DomainError("box sizes must be positive");
    std::sort(eps.begin(), eps.end());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
    if (eps.size() < 2)
        throw PreconditionError("box counting needs at least two distinct scales");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(eps.size());
    for (double e : eps) {
        const double x = std::log(1.0 / e);
        const double y = std::log(static_cast<double>(count_boxes(tree, e)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> default_box_scales(const EvaluatedTree& tree, int count) {
    if (tree.dim != 2)
        throw DimensionError("box counting is implemented for 2D trees");
    double lo[2] = {tree.root.position[0], tree.root.position[1]};
    double hi[2] = {lo[0], lo[1]};
    for (const auto& e : tree.edges)
        for (std::size_t k = 0; k < e.polyline.size(); ++k)
            for (int i = 0; i < 2; ++i) {
                lo[i] = std::min(lo[i], e.polyline.point(k)[i]);
                hi[i] = std::max(hi[i], e.polyline.point(k)[i]);
            }
    const double extent = std::max(hi[0] - lo[0], hi[1] - lo[1]);
    if (!(extent > 0.0))
        throw DegenerateError("tree has zero extent");
    std::vector<double> scales;
    double e = extent / 4.0;
    for (int i = 0; i < count; ++i, e /= 2.0)
        scales.push_back(e);
    return scales;
}

} // namespace dendrite
