#include "dendrite/export/stl.hpp"

#include "dendrite/error.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <numbers>

namespace dendrite {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 mul(const Vec3& a, double k) { return {a[0] * k, a[1] * k, a[2] * k}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 unit(const Vec3& a) { return mul(a, 1.0 / norm(a)); }

class Writer {
public:
    Writer() {
        const char header[] = "dendrite binary STL";
        bytes_.assign(84, 0);
        std::copy(header, header + sizeof header - 1, bytes_.begin());
    }

    void triangle(const Vec3& a, const Vec3& b, const Vec3& c) {
        const Vec3 n = cross(sub(b, a), sub(c, a));
        const double len = norm(n);
        if (!(len > 0.0) || !std::isfinite(len))
            throw DegenerateError("tube mesh produced a zero-area triangle; the radius is too small for the path");
        put(mul(n, 1.0 / len));
        put(a);
        put(b);
        put(c);
        bytes_.push_back(0);
        bytes_.push_back(0);
        ++count_;
    }

    std::vector<std::uint8_t> finish() && {
        for (int i = 0; i < 4; ++i)
            bytes_[80 + i] = static_cast<std::uint8_t>(count_ >> (8 * i));
        return std::move(bytes_);
    }

private:
    void put(const Vec3& v) {
        for (double x : v) {
            const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(x));
            for (int i = 0; i < 4; ++i)
                bytes_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
        }
    }

    std::vector<std::uint8_t> bytes_;
    std::uint32_t count_ = 0;
};

// Any unit vector perpendicular to t.
Vec3 perpendicular(const Vec3& t) {
    std::size_t axis = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(t[i]) < std::abs(t[axis]))
            axis = i;
    Vec3 e{0.0, 0.0, 0.0};
    e[axis] = 1.0;
    return unit(cross(t, e));
}

void sweep(Writer& out, const std::vector<Vec3>& pts, const std::vector<double>& radii, const TubeParams& params) {
    const std::size_t n = pts.size();
    const int m = params.radial_segments;

    std::vector<Vec3> seg(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k)
        seg[k] = unit(sub(pts[k + 1], pts[k]));
    std::vector<Vec3> tangent(n);
    tangent[0] = seg[0];
    tangent[n - 1] = seg[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const Vec3 sum = add(seg[k - 1], seg[k]);
        tangent[k] = norm(sum) > 1e-12 ? unit(sum) : seg[k];
    }

    // Double-reflection rotation-minimizing frames.
    std::vector<Vec3> normal(n);
    normal[0] = perpendicular(tangent[0]);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const Vec3 v1 = sub(pts[k + 1], pts[k]);
        const double c1 = dot(v1, v1);
        const Vec3 rl = sub(normal[k], mul(v1, 2.0 / c1 * dot(v1, normal[k])));
        const Vec3 tl = sub(tangent[k], mul(v1, 2.0 / c1 * dot(v1, tangent[k])));
        const Vec3 v2 = sub(tangent[k + 1], tl);
        const double c2 = dot(v2, v2);
        Vec3 r = c2 > 1e-24 ? sub(rl, mul(v2, 2.0 / c2 * dot(v2, rl))) : rl;
        r = sub(r, mul(tangent[k + 1], dot(r, tangent[k + 1])));
        normal[k + 1] = norm(r) > 1e-12 ? unit(r) : perpendicular(tangent[k + 1]);
    }

    std::vector<std::vector<Vec3>> rings(n, std::vector<Vec3>(m));
    for (std::size_t k = 0; k < n; ++k) {
        const Vec3 u = normal[k];
        const Vec3 v = cross(tangent[k], u);
        for (int j = 0; j < m; ++j) {
            const double th = 2.0 * std::numbers::pi * j / m;
            rings[k][j] = add(pts[k], add(mul(u, radii[k] * std::cos(th)), mul(v, radii[k] * std::sin(th))));
        }
    }

    for (std::size_t k = 0; k + 1 < n; ++k)
        for (int j = 0; j < m; ++j) {
            const int jn = (j + 1) % m;
            const Vec3& a = rings[k][j];
            const Vec3& b = rings[k][jn];
            const Vec3& c = rings[k + 1][j];
            const Vec3& d = rings[k + 1][jn];
            out.triangle(a, b, c);
            out.triangle(b, d, c);
        }
    if (params.cap_ends) {
        const auto& first = rings.front();
        const auto& last = rings.back();
        for (int j = 1; j + 1 < m; ++j) {
            out.triangle(first[0], first[j + 1], first[j]);
            out.triangle(last[0], last[j], last[j + 1]);
        }
    }
}

} // namespace

std::size_t tube_triangle_count(std::size_t samples, int radial_segments, bool cap_ends) {
    const auto m = static_cast<std::size_t>(radial_segments);
    return (samples - 1) * m * 2 + (cap_ends ? 2 * (m - 2) : 0);
}

std::vector<std::uint8_t> to_stl(const DecoratedTree& decorated, const TubeParams& params) {
    const EvaluatedTree& tree = decorated.tree;
    if (tree.dim != 3)
        throw DimensionError("STL export needs a 3D tree, got " + std::to_string(tree.dim) + "D; project it first");
    if (params.radial_segments < 3)
        throw DomainError("a tube needs at least 3 radial segments");
    const Channel* channel = nullptr;
    if (!params.radius) {
        auto it = decorated.channels.find(params.radius_source);
        if (it == decorated.channels.end())
            throw DomainError("no radius: channel '" + params.radius_source + "' is missing and no constant radius was given");
        channel = &it->second;
    }

    Writer out;
    for (std::size_t ei = 0; ei < tree.edges.size(); ++ei) {
        const auto& poly = tree.edges[ei].polyline;
        std::vector<Vec3> pts;
        std::vector<double> radii;
        for (std::size_t k = 0; k < poly.size(); ++k) {
            const auto p = poly.point(k);
            const Vec3 q{p[0], p[1], p[2]};
            const double r = channel ? channel->at(ei, k) * params.radius_scale : *params.radius;
            if (!(r > 0.0) || !std::isfinite(r))
                throw DomainError("tube radius must be positive, got " + std::to_string(r) + " on edge " +
                                  tree.edges[ei].child.str() + " at sample " + std::to_string(k));
            // Zero-length steps (dr = 0 between impulses) collapse onto one ring.
            if (!pts.empty() && norm(sub(q, pts.back())) <= 1e-12 * std::max(1.0, norm(q)))
                continue;
            pts.push_back(q);
            radii.push_back(r);
        }
        if (pts.size() < 2)
            throw DegenerateError("edge " + tree.edges[ei].child.str() + " has zero length; cannot sweep a tube");
        sweep(out, pts, radii, params);
    }
    return std::move(out).finish();
}

} // namespace dendrite
