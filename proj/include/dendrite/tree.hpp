#pragma once

#include "dendrite/curve.hpp"

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dendrite {

/// Strictly increasing s values at which a tree forks, snapped to grid samples.
class BranchPointSet {
public:
    BranchPointSet() = default;

    /// Points are snapped to the nearest sample. A point that moves records a
    /// warning; points outside the grid or collapsing onto one sample throw.
    BranchPointSet(std::vector<double> points, const SGrid& grid);

    /// s_min, s_min + spacing, ... strictly below s_max.
    static BranchPointSet every(double spacing, const SGrid& grid);

    bool empty() const noexcept { return points_.empty(); }
    std::size_t size() const noexcept { return points_.size(); }
    const std::vector<double>& points() const noexcept { return points_; }
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    bool contains_index(std::size_t k) const;

private:
    std::vector<double> points_;
    std::vector<std::size_t> indices_;
    std::vector<std::string> warnings_;
};

/// Arity and forking axis per generation, cycled when a tree has more
/// generations than entries.
struct ForkSchedule {
    std::vector<int> arity{2};
    /// Empty: the axis is the lowest one whose branch set contains the fork point.
    std::vector<int> axis{};

    int arity_at(std::size_t generation) const { return arity[generation % arity.size()]; }
    std::optional<int> axis_at(std::size_t generation) const {
        if (axis.empty())
            return std::nullopt;
        return axis[generation % axis.size()];
    }
};

/// Multiplier of branch `digit` in an `arity`-way fork: evenly spaced in [-1, +1].
double fork_multiplier(int digit, int arity);

struct TreeSpec {
    DerivativeCoords coords;
    /// branch_sets[a] lists the fork points of angular axis a.
    std::vector<BranchPointSet> branch_sets{};
    ForkSchedule forks{};
    int max_generations = 8;
    std::shared_ptr<const Steering> steering{};

    /// Throws on an invalid combination (arity < 2, bad axis, ...).
    void validate() const;

    /// Sorted union of the branch sets as grid indices.
    std::vector<std::size_t> fork_indices() const;

    bool is_tree() const;
};

/// Path of digits from the root; the root (or trunk) is the empty id.
struct BranchId {
    std::vector<int> digits;

    std::size_t generation() const noexcept { return digits.size(); }
    auto operator<=>(const BranchId&) const = default;
    bool operator==(const BranchId&) const = default;
    std::string str() const;
};

struct EvaluatedNode {
    BranchId id;
    Pose pose;
    double s = 0.0;
    double arc = 0.0;

    std::span<const double> position() const noexcept { return pose.position; }
};

struct EvaluatedEdge {
    BranchId child;
    BranchId parent;
    bool from_root = false;
    PathPolyline polyline;
};

/// Realized tree. One node per branch end (the root itself is kept apart), one
/// edge per branch, both in lexicographic BranchId order.
struct EvaluatedTree {
    int dim = 2;
    Pose root;
    double root_s = 0.0;
    std::vector<EvaluatedNode> nodes;
    std::vector<EvaluatedEdge> edges;
    /// Longest root-to-tip arc length (the evaluated straightest-path length).
    double path_length = 0.0;

    const EvaluatedNode* find(const BranchId& id) const;
    /// Start of the first fork: the root, or the trunk end when there is a trunk.
    std::span<const double> fork_origin() const;
    std::vector<double> fork_origin_heading() const;
    std::size_t max_generation() const;
    bool has_trunk() const;
};

struct EvalOptions {
    std::size_t max_nodes = std::size_t{1} << 20;
    bool parallel = false;
};

/// Either the single value 0 at a branch point, or the set of fork multipliers.
struct UnitValue {
    bool node = false;
    std::vector<double> multipliers;
};

/// Multivalued periodic unit function.
UnitValue unit_function(const BranchPointSet& branch_set, const SGrid& grid, double s, int arity = 2);

/// Expected number of nodes for a spec (trunk included), without evaluating it.
std::size_t expected_node_count(const TreeSpec& spec);

/// Recursive evaluation by derivative-coordinate accumulation.
EvaluatedTree evaluate_tree(const TreeSpec& spec, const Pose& start, const EvalOptions& options = {});

/// Classical translate/rotate/scale matrix pipeline. Same geometry, different
/// arithmetic; serves as oracle and benchmark baseline. dim 2 or 3.
EvaluatedTree evaluate_via_transform_stack(const TreeSpec& spec, const Pose& start, const EvalOptions& options = {});

/// Spec on a new step: coordinates through resample(), branch points snapped
/// to the new grid. Steering and the fork schedule are kept.
TreeSpec resample_spec(const TreeSpec& spec, double new_delta_s);

/// Total number of integration steps a spec evaluates to.
std::size_t total_segments(const TreeSpec& spec);

} // namespace dendrite
