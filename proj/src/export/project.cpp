#include "dendrite/export/project.hpp"

#include "dendrite/error.hpp"

#include <cmath>

namespace dendrite {

namespace {

void check_basis(const std::vector<std::vector<double>>& basis, int source_dim) {
    if (basis.size() < 2 || basis.size() > 3)
        throw DimensionError("projection target must be 2D or 3D");
    for (const auto& row : basis)
        if (row.size() != static_cast<std::size_t>(source_dim))
            throw DimensionError("basis rows need " + std::to_string(source_dim) + " columns");
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            double g = 0.0;
            for (int c = 0; c < source_dim; ++c)
                g += basis[i][c] * basis[j][c];
            if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-9)
                throw DomainError("projection basis is not orthonormal (row " + std::to_string(i) + " . row " +
                                  std::to_string(j) + " = " + std::to_string(g) + ")");
        }
}

std::vector<double> map_point(const std::vector<std::vector<double>>& basis, std::span<const double> p) {
    std::vector<double> out(basis.size(), 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t c = 0; c < p.size(); ++c)
            out[i] += basis[i][c] * p[c];
    return out;
}

std::vector<double> project_heading(const std::vector<std::vector<double>>& basis, std::span<const double> heading) {
    std::vector<double> dir(heading.size() + 1);
    unit_direction(heading, dir);
    const auto q = map_point(basis, dir);
    double n = 0.0;
    for (double x : q)
        n += x * x;
    // A direction orthogonal to the view keeps a zero heading.
    if (n < 1e-24)
        return std::vector<double>(basis.size() - 1, 0.0);
    return heading_of(q);
}

Pose project_pose(const std::vector<std::vector<double>>& basis, const Pose& p) {
    return Pose::at(map_point(basis, p.position), project_heading(basis, p.heading));
}

} // namespace

DecoratedTree project(const DecoratedTree& decorated, const std::vector<std::vector<double>>& basis) {
    const EvaluatedTree& src = decorated.tree;
    check_basis(basis, src.dim);
    const int dim = static_cast<int>(basis.size());

    DecoratedTree out;
    out.channels = decorated.channels;
    EvaluatedTree& t = out.tree;
    t.dim = dim;
    t.root = project_pose(basis, src.root);
    t.root_s = src.root_s;
    t.path_length = src.path_length;
    for (const auto& n : src.nodes)
        t.nodes.push_back(EvaluatedNode{n.id, project_pose(basis, n.pose), n.s, n.arc});
    for (const auto& e : src.edges) {
        PathPolyline poly(dim, e.polyline.grid());
        for (std::size_t k = 0; k < e.polyline.size(); ++k) {
            const auto p = map_point(basis, e.polyline.point(k));
            std::copy(p.begin(), p.end(), poly.point_mut(k).begin());
            const auto h = project_heading(basis, e.polyline.heading(k));
            std::copy(h.begin(), h.end(), poly.heading_mut(k).begin());
            poly.cum_arc_mut(k) = e.polyline.cum_arc(k);
        }
        t.edges.push_back(EvaluatedEdge{e.child, e.parent, e.from_root, std::move(poly)});
    }
    return out;
}

std::vector<std::vector<double>> leading_axes(int source_dim, int target_dim) {
    if (target_dim > source_dim)
        throw DimensionError("cannot project " + std::to_string(source_dim) + "D onto " + std::to_string(target_dim) +
                             " axes");
    std::vector<std::vector<double>> rows(target_dim, std::vector<double>(source_dim, 0.0));
    for (int i = 0; i < target_dim; ++i)
        rows[i][i] = 1.0;
    return rows;
}

} // namespace dendrite
