#include "dendrite/tree.hpp"

#include "dendrite/error.hpp"
#include "tree_plan.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <set>

namespace dendrite {

// --- BranchPointSet ------------------------------------------------------------

BranchPointSet::BranchPointSet(std::vector<double> points, const SGrid& grid) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double p = points[i];
        if (i > 0 && !(p > points[i - 1]))
            throw DomainError("branch points must be strictly increasing");
        const std::size_t k = grid.index_of(p);
        const double snapped = grid.at(k);
        if (std::abs(snapped - p) > 1e-6 * grid.delta_s())
            warnings_.push_back("branch point " + std::to_string(p) + " moved to the nearest sample s = " +
                                std::to_string(snapped));
        if (!indices_.empty() && indices_.back() == k)
            throw DomainError("branch points " + std::to_string(points[i - 1]) + " and " + std::to_string(p) +
                              " snap onto the same sample");
        indices_.push_back(k);
        points_.push_back(snapped);
    }
}

BranchPointSet BranchPointSet::every(double spacing, const SGrid& grid) {
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw DomainError("branch spacing must be positive");
    std::vector<double> pts;
    const double limit = grid.s_max() - 0.5 * grid.delta_s();
    for (std::size_t k = 0;; ++k) {
        const double s = grid.s_min() + static_cast<double>(k) * spacing;
        if (!(s < limit))
            break;
        pts.push_back(s);
    }
    return BranchPointSet(std::move(pts), grid);
}

bool BranchPointSet::contains_index(std::size_t k) const {
    return std::binary_search(indices_.begin(), indices_.end(), k);
}

double fork_multiplier(int digit, int arity) {
    if (arity < 2 || digit < 0 || digit >= arity)
        throw DomainError("invalid fork digit " + std::to_string(digit) + " for arity " + std::to_string(arity));
    return -1.0 + 2.0 * static_cast<double>(digit) / static_cast<double>(arity - 1);
}

// --- TreeSpec -------------------------------------------------------------------

void TreeSpec::validate() const {
    const int dim = coords.dim();
    if (max_generations < 1)
        throw DomainError("max_generations must be at least 1");
    if (forks.arity.empty())
        throw DomainError("fork schedule needs at least one arity");
    for (int a : forks.arity)
        if (a < 2)
            throw DomainError("fork arity must be at least 2 (got " + std::to_string(a) + ")");
    for (int ax : forks.axis)
        if (ax < 0 || ax > dim - 2)
            throw DimensionError("fork axis " + std::to_string(ax) + " is not an angular axis of a " +
                                 std::to_string(dim) + "D tree");
    if (branch_sets.size() > static_cast<std::size_t>(dim - 1))
        throw DimensionError("more branch sets than angular axes");
    for (const auto& set : branch_sets)
        for (std::size_t k : set.indices())
            if (k >= coords.grid().count())
                throw DomainError("branch point outside the coordinate grid");
    if (steering && dim != 2)
        throw DimensionError("steering is only defined for 2D trees");
}

std::vector<std::size_t> TreeSpec::fork_indices() const {
    std::set<std::size_t> all;
    for (const auto& set : branch_sets)
        all.insert(set.indices().begin(), set.indices().end());
    return {all.begin(), all.end()};
}

bool TreeSpec::is_tree() const {
    return std::any_of(branch_sets.begin(), branch_sets.end(), [](const auto& b) { return !b.empty(); });
}

namespace detail {

ForkPlan make_plan(const TreeSpec& spec) {
    spec.validate();
    ForkPlan plan;
    plan.last = spec.coords.grid().count() - 1;
    std::vector<std::size_t> all;
    for (std::size_t k : spec.fork_indices())
        if (k < plan.last)
            all.push_back(k);

    const std::size_t active = std::min<std::size_t>(all.size(), static_cast<std::size_t>(spec.max_generations));
    for (std::size_t g = 0; g < active; ++g) {
        const std::size_t k = all[g];
        plan.index.push_back(k);
        plan.arity.push_back(spec.forks.arity_at(g));
        int axis = -1;
        if (auto explicit_axis = spec.forks.axis_at(g)) {
            axis = *explicit_axis;
        } else {
            for (std::size_t a = 0; a < spec.branch_sets.size(); ++a)
                if (spec.branch_sets[a].contains_index(k)) {
                    axis = static_cast<int>(a);
                    break;
                }
        }
        plan.axis.push_back(axis);
        plan.stop.push_back(g + 1 < all.size() ? all[g + 1] : plan.last);
    }
    if (plan.index.empty()) {
        plan.trunk = true;
        plan.trunk_end = plan.last;
    } else if (plan.index.front() > 0) {
        plan.trunk = true;
        plan.trunk_end = plan.index.front();
    }
    return plan;
}

} // namespace detail

std::size_t expected_node_count(const TreeSpec& spec) {
    const auto plan = detail::make_plan(spec);
    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
    std::size_t total = plan.trunk ? 1 : 0;
    std::size_t width = 1;
    for (int a : plan.arity) {
        width = width > kMax / static_cast<std::size_t>(a) ? kMax : width * static_cast<std::size_t>(a);
        total = total > kMax - width ? kMax : total + width;
    }
    return total;
}

std::size_t total_segments(const TreeSpec& spec) {
    const auto plan = detail::make_plan(spec);
    std::size_t total = plan.trunk ? plan.trunk_end : 0;
    std::size_t width = 1;
    for (std::size_t g = 0; g < plan.index.size(); ++g) {
        width *= static_cast<std::size_t>(plan.arity[g]);
        total += width * (plan.stop[g] - plan.index[g]);
    }
    return total;
}

// --- unit function -----------------------------------------------------------------

UnitValue unit_function(const BranchPointSet& branch_set, const SGrid& grid, double s, int arity) {
    if (arity < 2)
        throw DomainError("arity must be at least 2");
    if (!grid.contains(s))
        throw DomainError("s = " + std::to_string(s) + " is outside the grid");
    const double tol = 1e-9 * std::max(1.0, std::abs(s));
    for (double p : branch_set.points())
        if (std::abs(p - s) <= tol)
            return UnitValue{true, {0.0}};
    UnitValue v;
    for (int j = 0; j < arity; ++j)
        v.multipliers.push_back(fork_multiplier(j, arity));
    return v;
}

// --- BranchId / EvaluatedTree ----------------------------------------------------------

std::string BranchId::str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(digits[i]);
    }
    return out + "]";
}

const EvaluatedNode* EvaluatedTree::find(const BranchId& id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const EvaluatedNode& n, const BranchId& key) { return n.id < key; });
    return it != nodes.end() && it->id == id ? &*it : nullptr;
}

bool EvaluatedTree::has_trunk() const {
    return !nodes.empty() && nodes.front().id.digits.empty();
}

std::span<const double> EvaluatedTree::fork_origin() const {
    return has_trunk() ? nodes.front().pose.position : std::span<const double>(root.position);
}

std::vector<double> EvaluatedTree::fork_origin_heading() const {
    return has_trunk() ? nodes.front().pose.heading : root.heading;
}

std::size_t EvaluatedTree::max_generation() const {
    std::size_t g = 0;
    for (const auto& n : nodes)
        g = std::max(g, n.id.generation());
    return g;
}

// --- evaluation --------------------------------------------------------------------------

namespace {

struct Builder {
    const TreeSpec& spec;
    const detail::ForkPlan& plan;
    std::vector<EvaluatedNode> nodes;
    std::vector<EvaluatedEdge> edges;

    void emit(BranchId parent, bool from_root, BranchId child, PathPolyline poly) {
        const std::size_t end = poly.size() - 1;
        EvaluatedNode node{child, poly.pose(end), poly.grid().s_max(), poly.cum_arc(end)};
        nodes.push_back(std::move(node));
        edges.push_back(EvaluatedEdge{std::move(child), std::move(parent), from_root, std::move(poly)});
    }

    PathPolyline segment(const Pose& start, double arc, std::size_t first, std::size_t last,
                         const std::vector<double>& mult) const {
        IntegrationRange range;
        range.first = first;
        range.last = last;
        range.start_arc = arc;
        range.multipliers = mult;
        range.steering = spec.steering.get();
        return integrate_range(spec.coords, start, range);
    }

    // Branches of fork g leaving `start`; `parent` is the id they hang from.
    void grow(std::size_t g, const Pose& start, double arc, const std::vector<double>& mult, const BranchId& parent,
              bool from_root) {
        const int arity = plan.arity[g];
        for (int digit = 0; digit < arity; ++digit)
            grow_child(g, digit, start, arc, mult, parent, from_root);
    }

    void grow_child(std::size_t g, int digit, const Pose& start, double arc, const std::vector<double>& mult,
                    const BranchId& parent, bool from_root) {
        std::vector<double> child_mult = mult;
        const int axis = plan.axis[g];
        if (axis >= 0)
            child_mult[axis] = fork_multiplier(digit, plan.arity[g]);
        BranchId child = parent;
        child.digits.push_back(digit);
        PathPolyline poly = segment(start, arc, plan.index[g], plan.stop[g], child_mult);
        const std::size_t end = poly.size() - 1;
        Pose end_pose = poly.pose(end);
        const double end_arc = poly.cum_arc(end);
        emit(parent, from_root, child, std::move(poly));
        if (g + 1 < plan.index.size())
            grow(g + 1, end_pose, end_arc, child_mult, child, false);
    }
};

void check_start(const TreeSpec& spec, const Pose& start) {
    if (start.dim() != spec.coords.dim() || start.heading.size() + 1 != start.position.size())
        throw DimensionError("start pose has dimension " + std::to_string(start.dim()) + " but the tree has " +
                             std::to_string(spec.coords.dim()));
}

} // namespace

EvaluatedTree evaluate_tree(const TreeSpec& spec, const Pose& start, const EvalOptions& options) {
    check_start(spec, start);
    const auto plan = detail::make_plan(spec);
    const std::size_t expected = expected_node_count(spec);
    if (expected > options.max_nodes)
        throw CapacityError("tree would have " + std::to_string(expected) + " nodes, above the cap of " +
                            std::to_string(options.max_nodes) + " (raise it or lower the generation count)");

    EvaluatedTree tree;
    tree.dim = spec.coords.dim();
    tree.root = start;
    tree.root_s = spec.coords.grid().s_min();

    Builder b{spec, plan, {}, {}};
    b.nodes.reserve(expected);
    b.edges.reserve(expected);
    const std::vector<double> ones(tree.dim - 1, 1.0);

    Pose fork_pose = start;
    double fork_arc = 0.0;
    bool from_root = true;
    if (plan.trunk) {
        PathPolyline trunk = b.segment(start, 0.0, 0, plan.trunk_end, ones);
        fork_pose = trunk.pose(trunk.size() - 1);
        fork_arc = trunk.cum_arc(trunk.size() - 1);
        b.emit(BranchId{}, true, BranchId{}, std::move(trunk));
        from_root = false;
    }

    if (!plan.index.empty()) {
        if (options.parallel && plan.arity[0] > 1) {
            // Sibling subtrees are independent; results are concatenated in digit
            // order so the output does not depend on scheduling.
            std::vector<std::future<Builder>> parts;
            for (int digit = 0; digit < plan.arity[0]; ++digit)
                parts.push_back(std::async(std::launch::async, [&, digit] {
                    Builder local{spec, plan, {}, {}};
                    local.grow_child(0, digit, fork_pose, fork_arc, ones, BranchId{}, from_root);
                    return local;
                }));
            for (auto& f : parts) {
                Builder part = f.get();
                std::move(part.nodes.begin(), part.nodes.end(), std::back_inserter(b.nodes));
                std::move(part.edges.begin(), part.edges.end(), std::back_inserter(b.edges));
            }
        } else {
            b.grow(0, fork_pose, fork_arc, ones, BranchId{}, from_root);
        }
    }

    tree.nodes = std::move(b.nodes);
    tree.edges = std::move(b.edges);
    for (const auto& n : tree.nodes)
        tree.path_length = std::max(tree.path_length, n.arc);
    return tree;
}

} // namespace dendrite

namespace dendrite {

TreeSpec resample_spec(const TreeSpec& spec, double new_delta_s) {
    TreeSpec out{resample(spec.coords, new_delta_s), {}, spec.forks, spec.max_generations, spec.steering};
    const SGrid& grid = out.coords.grid();
    for (const auto& set : spec.branch_sets) {
        std::vector<double> pts;
        for (double p : set.points())
            if (grid.contains(p))
                pts.push_back(p);
        out.branch_sets.emplace_back(std::move(pts), grid);
    }
    return out;
}

} // namespace dendrite
