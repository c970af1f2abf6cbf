// Matrix-pipeline evaluation. Each step places a unit segment with
// translate * rotate * scale, the rotation itself being a product of
// incremental rotation matrices, so no angle is ever passed to cos/sin twice.

#include "dendrite/error.hpp"
#include "dendrite/tree.hpp"
#include "tree_plan.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dendrite {

namespace {

template <std::size_t N>
using Mat = std::array<std::array<double, N>, N>;

template <std::size_t N>
Mat<N> identity() {
    Mat<N> m{};
    for (std::size_t i = 0; i < N; ++i)
        m[i][i] = 1.0;
    return m;
}

template <std::size_t N>
Mat<N> mul(const Mat<N>& a, const Mat<N>& b) {
    Mat<N> c{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) {
            const double aik = a[i][k];
            if (aik == 0.0)
                continue;
            for (std::size_t j = 0; j < N; ++j)
                c[i][j] += aik * b[k][j];
        }
    return c;
}

// Homogeneous rotations about z (azimuth) and y (polar angle).
template <std::size_t N>
Mat<N> rot_z(double a) {
    Mat<N> m = identity<N>();
    m[0][0] = std::cos(a);
    m[0][1] = -std::sin(a);
    m[1][0] = std::sin(a);
    m[1][1] = std::cos(a);
    return m;
}

Mat<4> rot_y(double a) {
    Mat<4> m = identity<4>();
    m[0][0] = std::cos(a);
    m[0][2] = std::sin(a);
    m[2][0] = -std::sin(a);
    m[2][2] = std::cos(a);
    return m;
}

template <std::size_t N>
Mat<N> translate(std::span<const double> p) {
    Mat<N> m = identity<N>();
    for (std::size_t i = 0; i + 1 < N; ++i)
        m[i][N - 1] = p[i];
    return m;
}

template <std::size_t N>
Mat<N> scale(double s) {
    Mat<N> m = identity<N>();
    for (std::size_t i = 0; i + 1 < N; ++i)
        m[i][i] = s;
    return m;
}

template <std::size_t N>
std::array<double, N> apply(const Mat<N>& m, const std::array<double, N>& v) {
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            out[i] += m[i][j] * v[j];
    return out;
}

// Orientation state: accumulated rotation matrices plus the running angles
// (kept only to report headings).
struct Frame {
    Mat<4> az = identity<4>();
    Mat<4> polar = identity<4>();
    Mat<3> rot2 = identity<3>();
    std::vector<double> angles;
};

Frame frame_from(const std::vector<double>& heading) {
    Frame f;
    f.angles = heading;
    if (heading.size() == 1) {
        f.rot2 = rot_z<3>(heading[0]);
    } else {
        f.az = rot_z<4>(heading[0]);
        f.polar = rot_y(heading[1]);
    }
    return f;
}

PathPolyline stack_segment(const TreeSpec& spec, const Pose& start, const Frame& start_frame, double arc,
                           std::size_t first, std::size_t last, const std::vector<double>& mult, Frame& end_frame) {
    const auto& coords = spec.coords;
    const int dim = coords.dim();
    const double ds = coords.grid().delta_s();
    PathPolyline out(dim, SGrid::from_count(coords.grid().at(first), ds, last - first + 1));
    Frame f = start_frame;
    std::vector<double> pos = start.position;

    auto store = [&](std::size_t j) {
        std::copy(pos.begin(), pos.end(), out.point_mut(j).begin());
        std::copy(f.angles.begin(), f.angles.end(), out.heading_mut(j).begin());
        out.cum_arc_mut(j) = arc;
    };
    store(0);

    for (std::size_t k = first; k < last; ++k) {
        const double len = coords.radial()[k] * ds;
        if (dim == 2) {
            double turn = mult[0] * coords.angular(0)[k] * ds;
            if (spec.steering) {
                const double heading[1] = {std::atan2(f.rot2[1][0], f.rot2[0][0])};
                turn += spec.steering->turn_rate(pos, heading) * ds;
            }
            f.rot2 = mul(f.rot2, rot_z<3>(turn));
            f.angles[0] += turn;
            const Mat<3> m = mul(mul(translate<3>(pos), f.rot2), scale<3>(len));
            const auto p = apply(m, {1.0, 0.0, 1.0});
            pos[0] = p[0];
            pos[1] = p[1];
        } else {
            const double dphi = mult[0] * coords.angular(0)[k] * ds;
            const double dpsi = mult[1] * coords.angular(1)[k] * ds;
            f.az = mul(f.az, rot_z<4>(dphi));
            f.polar = mul(f.polar, rot_y(dpsi));
            f.angles[0] += dphi;
            f.angles[1] += dpsi;
            const Mat<4> m = mul(mul(mul(translate<4>(pos), f.az), f.polar), scale<4>(len));
            const auto p = apply(m, {0.0, 0.0, 1.0, 1.0});
            pos[0] = p[0];
            pos[1] = p[1];
            pos[2] = p[2];
        }
        arc += len;
        for (double v : pos)
            if (!std::isfinite(v))
                throw NonFiniteError("transform stack produced a non-finite point", k);
        store(k - first + 1);
    }
    end_frame = f;
    return out;
}

struct Pending {
    std::size_t g;
    int digit;
    Pose start;
    Frame frame;
    double arc;
    std::vector<double> mult;
    BranchId parent;
    bool from_root;
};

} // namespace

EvaluatedTree evaluate_via_transform_stack(const TreeSpec& spec, const Pose& start, const EvalOptions& options) {
    const int dim = spec.coords.dim();
    if (dim != 2 && dim != 3)
        throw DimensionError("the transform stack supports 2D and 3D trees only (got " + std::to_string(dim) + "D)");
    if (start.dim() != dim || static_cast<int>(start.heading.size()) != dim - 1)
        throw DimensionError("start pose does not match the tree dimension");
    const auto plan = detail::make_plan(spec);
    const std::size_t expected = expected_node_count(spec);
    if (expected > options.max_nodes)
        throw CapacityError("tree would have " + std::to_string(expected) + " nodes, above the cap of " +
                            std::to_string(options.max_nodes));

    EvaluatedTree tree;
    tree.dim = dim;
    tree.root = start;
    tree.root_s = spec.coords.grid().s_min();

    auto emit = [&](const BranchId& parent, bool from_root, const BranchId& child, PathPolyline poly) {
        const std::size_t end = poly.size() - 1;
        tree.nodes.push_back(EvaluatedNode{child, poly.pose(end), poly.grid().s_max(), poly.cum_arc(end)});
        tree.edges.push_back(EvaluatedEdge{child, parent, from_root, std::move(poly)});
    };

    const std::vector<double> ones(dim - 1, 1.0);
    Pose fork_pose = start;
    Frame fork_frame = frame_from(start.heading);
    double fork_arc = 0.0;
    bool from_root = true;
    if (plan.trunk) {
        Frame end;
        PathPolyline trunk = stack_segment(spec, start, fork_frame, 0.0, 0, plan.trunk_end, ones, end);
        fork_pose = trunk.pose(trunk.size() - 1);
        fork_arc = trunk.cum_arc(trunk.size() - 1);
        fork_frame = end;
        emit(BranchId{}, true, BranchId{}, std::move(trunk));
        from_root = false;
    }

    std::vector<Pending> stack;
    auto push_fork = [&](std::size_t g, const Pose& pose, const Frame& frame, double arc, const std::vector<double>& mult,
                         const BranchId& parent, bool root_edge) {
        for (int digit = plan.arity[g] - 1; digit >= 0; --digit)
            stack.push_back(Pending{g, digit, pose, frame, arc, mult, parent, root_edge});
    };
    if (!plan.index.empty())
        push_fork(0, fork_pose, fork_frame, fork_arc, ones, BranchId{}, from_root);

    while (!stack.empty()) {
        Pending p = std::move(stack.back());
        stack.pop_back();
        std::vector<double> mult = p.mult;
        if (plan.axis[p.g] >= 0)
            mult[plan.axis[p.g]] = fork_multiplier(p.digit, plan.arity[p.g]);
        BranchId child = p.parent;
        child.digits.push_back(p.digit);
        Frame end;
        PathPolyline poly = stack_segment(spec, p.start, p.frame, p.arc, plan.index[p.g], plan.stop[p.g], mult, end);
        const Pose end_pose = poly.pose(poly.size() - 1);
        const double end_arc = poly.cum_arc(poly.size() - 1);
        emit(p.parent, p.from_root, child, std::move(poly));
        if (p.g + 1 < plan.index.size())
            push_fork(p.g + 1, end_pose, end, end_arc, mult, child, false);
    }

    // The stack already pops in preorder; sorting keeps the contract explicit.
    std::vector<std::size_t> order(tree.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return tree.nodes[a].id < tree.nodes[b].id; });
    std::vector<EvaluatedNode> nodes;
    std::vector<EvaluatedEdge> edges;
    nodes.reserve(order.size());
    edges.reserve(order.size());
    for (std::size_t i : order) {
        nodes.push_back(std::move(tree.nodes[i]));
        edges.push_back(std::move(tree.edges[i]));
    }
    tree.nodes = std::move(nodes);
    tree.edges = std::move(edges);
    for (const auto& n : tree.nodes)
        tree.path_length = std::max(tree.path_length, n.arc);
    return tree;
}

} // namespace dendrite
