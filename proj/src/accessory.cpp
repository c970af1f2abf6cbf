#include "dendrite/accessory.hpp"

#include "dendrite/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dendrite {

std::string_view to_string(AccessoryKind k) {
    return k == AccessoryKind::derivative ? "derivative" : "absolute";
}

std::string angular_channel_name(std::size_t axis) {
    if (axis == 0)
        return "dphi";
    if (axis == 1)
        return "dpsi";
    return "dang" + std::to_string(axis);
}

namespace {

// Angular axis named by a reserved channel, if it is one.
std::optional<std::size_t> angular_axis(std::string_view name) {
    if (name == "dphi")
        return 0;
    if (name == "dpsi")
        return 1;
    if (name.size() > 4 && name.substr(0, 4) == "dang") {
        std::size_t axis = 0;
        for (char c : name.substr(4)) {
            if (c < '0' || c > '9')
                return std::nullopt;
            axis = axis * 10 + static_cast<std::size_t>(c - '0');
        }
        if (axis >= 2)
            return axis;
    }
    return std::nullopt;
}

} // namespace

bool is_reserved_channel(std::string_view name) {
    return name == "dr" || angular_axis(name).has_value();
}

double SampleContext::value(std::string_view name) const {
    if (table)
        if (auto off = table->offset(name))
            return values[*off];
    if (name == "dr")
        return arc;
    if (auto axis = angular_axis(name)) {
        if (*axis >= heading.size())
            throw DimensionError("channel " + std::string(name) + " does not exist in a " +
                                 std::to_string(heading.size() + 1) + "D tree");
        return heading[*axis];
    }
    throw DomainError("unknown accessory '" + std::string(name) + "'");
}

AccessoryFn AccessoryFn::constant(std::string name, AccessoryKind kind, double value, std::string units) {
    return AccessoryFn{std::move(name), kind, {[value](const SampleContext&) { return value; }}, {}, std::move(units)};
}

AccessoryFn AccessoryFn::of_s(std::string name, AccessoryKind kind, std::function<double(double)> fn,
                              std::string units) {
    return AccessoryFn{std::move(name),
                       kind,
                       {[fn = std::move(fn)](const SampleContext& c) { return fn(c.s); }},
                       {},
                       std::move(units)};
}

// --- AccessorySet ---------------------------------------------------------------------

void AccessorySet::add(AccessoryFn fn) {
    if (fn.name.empty())
        throw DomainError("accessory needs a name");
    if (is_reserved_channel(fn.name))
        throw DomainError("'" + fn.name + "' is a reserved coordinate channel");
    if (find(fn.name))
        throw DomainError("accessory '" + fn.name + "' is declared twice");
    if (fn.components.empty())
        throw DomainError("accessory '" + fn.name + "' has no components");
    for (const auto& c : fn.components)
        if (!c)
            throw DomainError("accessory '" + fn.name + "' has an empty evaluator");
    entries_.push_back(std::move(fn));
}

const AccessoryFn* AccessorySet::find(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.name == name)
            return &e;
    return nullptr;
}

std::vector<std::size_t> AccessorySet::evaluation_order(int dim) const {
    const std::size_t n = entries_.size();
    std::vector<std::vector<std::size_t>> users(n);
    std::vector<std::size_t> pending(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::set<std::size_t> deps;
        for (const auto& d : entries_[i].depends_on) {
            if (d == "dr")
                continue;
            if (auto axis = angular_axis(d)) {
                if (*axis + 1 >= static_cast<std::size_t>(dim))
                    throw DimensionError("accessory '" + entries_[i].name + "' reads " + d + ", which a " +
                                         std::to_string(dim) + "D tree does not have");
                continue;
            }
            std::size_t j = 0;
            while (j < n && entries_[j].name != d)
                ++j;
            if (j == n)
                throw DomainError("accessory '" + entries_[i].name + "' depends on undeclared '" + d + "'");
            if (j == i)
                throw DomainError("accessory '" + entries_[i].name + "' depends on itself");
            deps.insert(j);
        }
        pending[i] = deps.size();
        for (std::size_t j : deps)
            users[j].push_back(i);
    }
    std::vector<std::size_t> order;
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (pending[i] == 0)
            ready.insert(i);
    while (!ready.empty()) {
        const std::size_t i = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(i);
        for (std::size_t u : users[i])
            if (--pending[u] == 0)
                ready.insert(u);
    }
    if (order.size() != n) {
        std::string names;
        for (std::size_t i = 0; i < n; ++i)
            if (pending[i] > 0)
                names += (names.empty() ? "" : ", ") + entries_[i].name;
        throw DomainError("accessory dependency cycle among: " + names);
    }
    return order;
}

ChannelTable::ChannelTable(const AccessorySet& set) {
    for (const auto& e : set.entries()) {
        offsets_.emplace(e.name, width_);
        width_ += e.arity();
    }
}

std::optional<std::size_t> ChannelTable::offset(std::string_view name) const {
    auto it = offsets_.find(std::string(name));
    if (it == offsets_.end())
        return std::nullopt;
    return it->second;
}

EnhancedTree EnhancedTree::of(TreeSpec spec, Pose start, AccessorySet accessories) {
    EnhancedTree t;
    t.spec = std::move(spec);
    t.start = std::move(start);
    t.accessories = std::move(accessories);
    return t;
}

// --- evaluation -----------------------------------------------------------------------------

namespace {

struct Layout {
    const AccessorySet& set;
    ChannelTable table;
    std::vector<std::size_t> order;
    std::vector<std::size_t> offsets;

    Layout(const AccessorySet& s, int dim) : set(s), table(s), order(s.evaluation_order(dim)) {
        for (const auto& e : set.entries())
            offsets.push_back(*table.offset(e.name));
    }
};

// Channel rows along one polyline: rows[k * width + slot]. `init` holds the
// values at the first sample of the derivative slots.
std::vector<double> run_polyline(const PathPolyline& poly, const Layout& lay, const std::vector<double>& init) {
    const std::size_t width = lay.table.width();
    const std::size_t n = poly.size();
    const double ds = poly.grid().delta_s();
    std::vector<double> rows(n * width, 0.0);
    std::vector<double> rates(width, 0.0);
    const auto& entries = lay.set.entries();

    for (std::size_t k = 0; k < n; ++k) {
        double* row = rows.data() + k * width;
        SampleContext ctx{poly.grid().at(k), poly.point(k), poly.heading(k), poly.cum_arc(k), &lay.table,
                          std::span<const double>(row, width)};
        for (std::size_t i : lay.order) {
            const auto& e = entries[i];
            if (e.kind != AccessoryKind::derivative)
                continue;
            for (std::size_t c = 0; c < e.arity(); ++c) {
                const std::size_t slot = lay.offsets[i] + c;
                row[slot] = k == 0 ? init[slot] : rows[(k - 1) * width + slot] + rates[slot] * ds;
            }
        }
        for (std::size_t i : lay.order) {
            const auto& e = entries[i];
            if (e.kind != AccessoryKind::absolute)
                continue;
            for (std::size_t c = 0; c < e.arity(); ++c) {
                const double v = e.components[c](ctx);
                if (!std::isfinite(v))
                    throw NonFiniteError("accessory '" + e.name + "' is not finite at s = " + std::to_string(ctx.s),
                                         k);
                row[lay.offsets[i] + c] = v;
            }
        }
        if (k + 1 == n)
            break;
        for (std::size_t i : lay.order) {
            const auto& e = entries[i];
            if (e.kind != AccessoryKind::derivative)
                continue;
            for (std::size_t c = 0; c < e.arity(); ++c) {
                const double r = e.components[c](ctx);
                if (!std::isfinite(r))
                    throw NonFiniteError("rate of accessory '" + e.name + "' is not finite at s = " +
                                             std::to_string(ctx.s),
                                         k);
                rates[lay.offsets[i] + c] = r;
            }
        }
    }
    return rows;
}

std::vector<double> initial_row(const EnhancedTree& t, const Layout& lay,
                                const std::map<std::string, double>& start_values) {
    for (const auto& [name, v] : start_values) {
        (void)v;
        const auto* e = t.accessories.find(name);
        if (!e && !is_reserved_channel(name))
            throw DomainError("start value given for unknown accessory '" + name + "'");
        if (e && e->kind != AccessoryKind::derivative)
            throw DomainError("start value given for absolute accessory '" + name + "'");
    }
    std::vector<double> init(lay.table.width(), 0.0);
    const auto& entries = t.accessories.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].kind != AccessoryKind::derivative)
            continue;
        double v = 0.0;
        if (auto it = start_values.find(entries[i].name); it != start_values.end())
            v += it->second;
        if (auto it = t.continuity.find(entries[i].name); it != t.continuity.end())
            v += it->second;
        for (std::size_t c = 0; c < entries[i].arity(); ++c)
            init[lay.offsets[i] + c] = v;
    }
    return init;
}

const TreeSpec& require_spec(const EnhancedTree& t) {
    if (t.empty())
        throw DomainError("the empty tree has nothing to evaluate");
    return *t.spec;
}

} // namespace

DecoratedTree decorate(EvaluatedTree tree) {
    return DecoratedTree{std::move(tree), {}};
}

DecoratedTree evaluate_accessories(const EnhancedTree& enhanced, const std::map<std::string, double>& start_values,
                                   const EvalOptions& options) {
    const TreeSpec& spec = require_spec(enhanced);
    const Layout lay(enhanced.accessories, spec.coords.dim());
    const std::vector<double> init = initial_row(enhanced, lay, start_values);

    DecoratedTree out{evaluate_tree(spec, enhanced.start, options), {}};
    const auto& entries = enhanced.accessories.entries();
    for (const auto& e : entries)
        out.channels[e.name] = Channel{e.kind, e.arity(), std::vector<std::vector<double>>(out.tree.edges.size())};
    if (entries.empty())
        return out;

    const std::size_t width = lay.table.width();
    std::map<BranchId, std::vector<double>> end_rows;
    for (std::size_t ei = 0; ei < out.tree.edges.size(); ++ei) {
        const auto& edge = out.tree.edges[ei];
        const std::vector<double>* start = &init;
        if (!edge.from_root) {
            auto it = end_rows.find(edge.parent);
            if (it == end_rows.end())
                throw TopologyError("edge " + edge.child.str() + " precedes its parent");
            start = &it->second;
        }
        const auto rows = run_polyline(edge.polyline, lay, *start);
        const std::size_t n = edge.polyline.size();
        end_rows[edge.child] = std::vector<double>(rows.end() - static_cast<std::ptrdiff_t>(width), rows.end());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const std::size_t arity = entries[i].arity();
            auto& values = out.channels[entries[i].name].per_edge[ei];
            values.resize(n * arity);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t c = 0; c < arity; ++c)
                    values[k * arity + c] = rows[k * width + lay.offsets[i] + c];
        }
    }
    return out;
}

std::map<std::string, double> spine_end_values(const EnhancedTree& enhanced,
                                               const std::map<std::string, double>& start_values) {
    const TreeSpec& spec = require_spec(enhanced);
    const int dim = spec.coords.dim();
    const Layout lay(enhanced.accessories, dim);
    const std::vector<double> init = initial_row(enhanced, lay, start_values);

    IntegrationRange range;
    range.last = spec.coords.grid().count() - 1;
    range.steering = spec.steering.get();
    const PathPolyline spine = integrate_range(spec.coords, enhanced.start, range);
    const auto rows = run_polyline(spine, lay, init);
    const std::size_t last = spine.size() - 1;

    std::map<std::string, double> out;
    auto reserved = [&](const std::string& name, double v) {
        auto it = start_values.find(name);
        out[name] = v + (it == start_values.end() ? 0.0 : it->second);
    };
    reserved("dr", spine.cum_arc(last));
    for (int a = 0; a < dim - 1; ++a)
        reserved(angular_channel_name(static_cast<std::size_t>(a)), spine.heading(last)[a]);
    const auto& entries = enhanced.accessories.entries();
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].kind == AccessoryKind::derivative)
            out[entries[i].name] = rows[last * lay.table.width() + lay.offsets[i]];
    return out;
}

// --- concatenation ------------------------------------------------------------------------------

namespace {

std::vector<std::size_t> forks_before_end(const TreeSpec& spec) {
    const std::size_t last = spec.coords.grid().count() - 1;
    std::vector<std::size_t> out;
    for (std::size_t k : spec.fork_indices())
        if (k < last)
            out.push_back(k);
    return out;
}

int auto_axis(const TreeSpec& spec, std::size_t index) {
    for (std::size_t a = 0; a < spec.branch_sets.size(); ++a)
        if (spec.branch_sets[a].contains_index(index))
            return static_cast<int>(a);
    return 0;
}

std::vector<double> join(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.begin(), a.end() - 1);
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Evaluator piecewise(const Evaluator* a, const Evaluator* b, double junction, double half_step, double shift) {
    Evaluator ea = a ? *a : Evaluator{};
    Evaluator eb = b ? *b : Evaluator{};
    return [ea, eb, junction, half_step, shift](const SampleContext& c) {
        if (c.s < junction - half_step)
            return ea ? ea(c) : 0.0;
        if (!eb)
            return 0.0;
        SampleContext local = c;
        local.s = c.s - shift;
        return eb(local);
    };
}

} // namespace

EnhancedTree concatenate(const EnhancedTree& first, const EnhancedTree& second, const ConcatOptions& options) {
    if (first.empty())
        return second;
    if (second.empty())
        return first;
    const TreeSpec& a = *first.spec;
    TreeSpec b = *second.spec;
    const int dim = a.coords.dim();
    if (b.coords.dim() != dim)
        throw DimensionError("cannot concatenate a " + std::to_string(dim) + "D tree with a " +
                             std::to_string(b.coords.dim()) + "D tree");
    if (a.steering && b.steering)
        throw DomainError("both parts carry steering feedback; attach it after concatenation instead");

    const double ds = a.coords.grid().delta_s();
    const SGrid& ga = a.coords.grid();
    if (std::abs(b.coords.grid().delta_s() - ds) > 1e-12 * ds) {
        if (!options.allow_resample)
            throw DomainError("parts use different steps (" + std::to_string(ds) + " and " +
                              std::to_string(b.coords.grid().delta_s()) + "); allow resampling to join them");
        std::vector<BranchPointSet> sets;
        DerivativeCoords rc = resample(b.coords, ds);
        for (const auto& set : b.branch_sets) {
            std::vector<double> pts;
            for (double p : set.points())
                if (rc.grid().contains(p))
                    pts.push_back(p);
            sets.emplace_back(std::move(pts), rc.grid());
        }
        b.coords = std::move(rc);
        b.branch_sets = std::move(sets);
    }
    const SGrid& gb = b.coords.grid();
    const double junction = ga.s_max();
    const double shift = junction - gb.s_min();
    const SGrid grid = SGrid::from_count(ga.s_min(), ds, ga.count() - 1 + gb.count());

    std::vector<std::vector<double>> angular;
    for (int ax = 0; ax < dim - 1; ++ax)
        angular.push_back(join(a.coords.angular(ax), b.coords.angular(ax)));
    TreeSpec spec{DerivativeCoords(grid, join(a.coords.radial(), b.coords.radial()), std::move(angular))};

    // Forks of the first part past its generation limit never happen there, so
    // they are dropped rather than revived by the longer domain.
    auto fa = forks_before_end(a);
    const auto fb = forks_before_end(b);
    const std::size_t ga_gens = std::min(fa.size(), static_cast<std::size_t>(a.max_generations));
    fa.resize(ga_gens);
    const std::size_t sets = std::max(a.branch_sets.size(), b.branch_sets.size());
    for (std::size_t ax = 0; ax < sets; ++ax) {
        std::vector<double> pts;
        if (ax < a.branch_sets.size())
            for (std::size_t k : a.branch_sets[ax].indices())
                if (std::binary_search(fa.begin(), fa.end(), k))
                    pts.push_back(grid.at(k));
        if (ax < b.branch_sets.size())
            for (std::size_t k : b.branch_sets[ax].indices())
                if (k + 1 < gb.count())
                    pts.push_back(grid.at(ga.count() - 1 + k));
        spec.branch_sets.emplace_back(std::move(pts), grid);
    }

    spec.forks.arity.clear();
    for (std::size_t g = 0; g < ga_gens; ++g)
        spec.forks.arity.push_back(a.forks.arity_at(g));
    for (int g = 0; g < b.max_generations; ++g)
        spec.forks.arity.push_back(b.forks.arity_at(static_cast<std::size_t>(g)));
    if (!a.forks.axis.empty() || !b.forks.axis.empty()) {
        for (std::size_t g = 0; g < ga_gens; ++g)
            spec.forks.axis.push_back(a.forks.axis_at(g).value_or(auto_axis(a, fa[g])));
        for (int g = 0; g < b.max_generations; ++g) {
            const auto gg = static_cast<std::size_t>(g);
            spec.forks.axis.push_back(b.forks.axis_at(gg).value_or(gg < fb.size() ? auto_axis(b, fb[gg]) : 0));
        }
    }
    spec.max_generations = static_cast<int>(ga_gens) + b.max_generations;
    spec.steering = a.steering ? a.steering : b.steering;
    spec.validate();

    EnhancedTree out;
    out.start = first.start;
    out.continuity = first.continuity;

    std::vector<std::string> names;
    for (const auto& e : first.accessories.entries())
        names.push_back(e.name);
    for (const auto& e : second.accessories.entries())
        if (!first.accessories.find(e.name))
            names.push_back(e.name);
    const double half = 0.5 * ds;
    for (const auto& name : names) {
        const AccessoryFn* ea = first.accessories.find(name);
        const AccessoryFn* eb = second.accessories.find(name);
        const AccessoryFn& any = ea ? *ea : *eb;
        if (ea && eb && ea->kind != eb->kind)
            throw DomainError("accessory '" + name + "' is " + std::string(to_string(ea->kind)) +
                              " in the first part and " + std::string(to_string(eb->kind)) + " in the second");
        if (ea && eb && ea->arity() != eb->arity())
            throw DomainError("accessory '" + name + "' has different arities in the two parts");
        if (any.kind == AccessoryKind::absolute && !(ea && eb))
            throw DomainError("absolute accessory '" + name + "' is missing from the " +
                              std::string(ea ? "second" : "first") + " part; it has no value there");
        AccessoryFn joined;
        joined.name = name;
        joined.kind = any.kind;
        joined.units = any.units;
        for (const auto* part : {ea, eb})
            if (part)
                for (const auto& d : part->depends_on)
                    if (std::find(joined.depends_on.begin(), joined.depends_on.end(), d) == joined.depends_on.end())
                        joined.depends_on.push_back(d);
        for (std::size_t c = 0; c < any.arity(); ++c)
            joined.components.push_back(piecewise(ea ? &ea->components[c] : nullptr, eb ? &eb->components[c] : nullptr,
                                                  junction, half, shift));
        out.accessories.add(std::move(joined));
    }

    out.junctions = first.junctions;
    Junction seam;
    seam.s = junction;
    seam.h = spine_end_values(first);
    out.junctions.push_back(std::move(seam));
    for (auto j : second.junctions) {
        j.s += shift;
        out.junctions.push_back(std::move(j));
    }
    out.spec = std::move(spec);
    return out;
}

} // namespace dendrite
