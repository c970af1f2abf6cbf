#pragma once

#include "dendrite/tree.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dendrite {

enum class AccessoryKind { derivative, absolute };

std::string_view to_string(AccessoryKind k);

/// Name of angular channel a: dphi, dpsi, then dang2, dang3, ...
std::string angular_channel_name(std::size_t axis);

/// True for dr and the angular channel names, which mirror the geometry.
bool is_reserved_channel(std::string_view name);

class ChannelTable;

/// Everything an accessory may look at while one sample is evaluated.
struct SampleContext {
    /// Parameter in the accessory's own domain.
    double s = 0.0;
    std::span<const double> position;
    std::span<const double> heading;
    double arc = 0.0;
    const ChannelTable* table = nullptr;
    std::span<const double> values;

    /// First component of a channel at this sample: a declared accessory, or
    /// dr (cumulative arc) / dphi, dpsi, ... (accumulated heading).
    double value(std::string_view name) const;
};

using Evaluator = std::function<double(const SampleContext&)>;

/// A derivative accessory returns its rate per unit s; an absolute one its value.
struct AccessoryFn {
    std::string name;
    AccessoryKind kind = AccessoryKind::absolute;
    /// One evaluator per component (1 for scalar channels, 3 for rgb, ...).
    std::vector<Evaluator> components;
    std::vector<std::string> depends_on{};
    std::string units{};

    std::size_t arity() const noexcept { return components.size(); }

    static AccessoryFn constant(std::string name, AccessoryKind kind, double value, std::string units = {});
    static AccessoryFn of_s(std::string name, AccessoryKind kind, std::function<double(double)> fn,
                            std::string units = {});
};

/// Accessories in declaration order, names unique.
class AccessorySet {
public:
    /// Throws on a duplicate or reserved name.
    void add(AccessoryFn fn);
    const AccessoryFn* find(std::string_view name) const;
    const std::vector<AccessoryFn>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

    /// Evaluation order: dependencies first, declaration order otherwise.
    /// Throws on an undeclared dependency or a cycle.
    std::vector<std::size_t> evaluation_order(int dim) const;

private:
    std::vector<AccessoryFn> entries_;
};

/// Slot layout of the declared channels; reserved names resolve to geometry.
class ChannelTable {
public:
    explicit ChannelTable(const AccessorySet& set);
    std::optional<std::size_t> offset(std::string_view name) const;
    std::size_t width() const noexcept { return width_; }

private:
    std::unordered_map<std::string, std::size_t> offsets_;
    std::size_t width_ = 0;
};

/// Record of a concatenation seam.
struct Junction {
    double s = 0.0;
    /// Continuity constant chosen for the second part, per derivative channel
    /// (including dr and the angular channels).
    std::map<std::string, double> h;
};

struct EnhancedTree {
    /// Absent for the empty tree, the identity of concatenation.
    std::optional<TreeSpec> spec;
    Pose start = Pose::origin(2);
    AccessorySet accessories{};
    /// Integration constant per derivative accessory; missing entries are 0.
    std::map<std::string, double> continuity{};
    std::vector<Junction> junctions{};

    bool empty() const noexcept { return !spec.has_value(); }
    static EnhancedTree identity() { return {}; }
    static EnhancedTree of(TreeSpec spec, Pose start, AccessorySet accessories = {});
};

struct Channel {
    AccessoryKind kind = AccessoryKind::absolute;
    std::size_t arity = 1;
    /// per_edge[e][k * arity + c]: component c at polyline sample k of edge e.
    std::vector<std::vector<double>> per_edge;

    double at(std::size_t edge, std::size_t sample, std::size_t component = 0) const {
        return per_edge[edge][sample * arity + component];
    }
};

struct DecoratedTree {
    EvaluatedTree tree;
    std::map<std::string, Channel> channels;
};

/// Evaluates the tree, then every accessory along each edge. Derivative
/// accessories accumulate from start_values[name] + h along root-to-tip paths.
DecoratedTree evaluate_accessories(const EnhancedTree& enhanced, const std::map<std::string, double>& start_values = {},
                                   const EvalOptions& options = {});

/// Wraps an already evaluated tree (no accessories).
DecoratedTree decorate(EvaluatedTree tree);

struct ConcatOptions {
    /// Resample the second part when the steps differ instead of failing.
    bool allow_resample = false;
};

/// Sequences `second` after `first`: the second grid is shifted to start at the
/// end of the first, branch sets are merged and accessory functions are joined
/// piecewise. Derivative primitives stay continuous; absolute ones may step.
EnhancedTree concatenate(const EnhancedTree& first, const EnhancedTree& second, const ConcatOptions& options = {});

/// Primitive of every derivative channel at the end of the all-(+1) path.
std::map<std::string, double> spine_end_values(const EnhancedTree& enhanced,
                                               const std::map<std::string, double>& start_values = {});

} // namespace dendrite
