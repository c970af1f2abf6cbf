#include "dendrite/error.hpp"
#include "dendrite/export.hpp"
#include "dendrite/presets.hpp"

#include <doctest.h>

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>

using namespace dendrite;
using doctest::Approx;

namespace {

DecoratedTree small_tree(int generations = 3) {
    FractalParams p;
    p.generations = generations;
    p.samples_per_branch = 16;
    AccessorySet set;
    set.add(AccessoryFn::of_s("width", AccessoryKind::absolute, [](double s) { return 0.1 * std::pow(0.5, s); }));
    set.add(AccessoryFn::constant("age", AccessoryKind::derivative, 1.0));
    set.add(AccessoryFn{"color",
                        AccessoryKind::absolute,
                        {[](const SampleContext&) { return 1.0; }, [](const SampleContext&) { return 0.5; },
                         [](const SampleContext&) { return 0.0; }}});
    return evaluate_accessories(EnhancedTree::of(smooth_fractal(p), fractal_start(p), std::move(set)));
}

TreeSpec spatial_spec(int generations) {
    const SGrid g(0.0, generations, 1.0 / 16);
    const std::vector<double> r(g.count(), 0.3);
    TreeSpec spec{DerivativeCoords(g, std::vector<double>(g.count(), 1.0), {r, r})};
    spec.branch_sets = {BranchPointSet::every(1.0, g)};
    return spec;
}

const Pose kTilted = Pose::at({0, 0, 0}, {0.0, std::numbers::pi / 3});

DecoratedTree spatial_tree(int generations) {
    AccessorySet set;
    set.add(AccessoryFn::of_s("width", AccessoryKind::absolute, [](double s) { return 0.1 * std::pow(0.5, s); }));
    return evaluate_accessories(EnhancedTree::of(spatial_spec(generations), kTilted, std::move(set)));
}

float read_f32(const std::vector<std::uint8_t>& b, std::size_t at) {
    std::uint32_t u = 0;
    for (int i = 0; i < 4; ++i)
        u |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
    return std::bit_cast<float>(u);
}

std::uint32_t read_u32(const std::vector<std::uint8_t>& b, std::size_t at) {
    std::uint32_t u = 0;
    for (int i = 0; i < 4; ++i)
        u |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
    return u;
}

} // namespace

TEST_CASE("svg has one path per edge and applies style bindings") {
    const DecoratedTree d = small_tree();
    const std::string svg = to_svg(d, {{"width", "stroke-width"}, {"color", "stroke"}});
    CHECK(svg.find("<svg xmlns") != std::string::npos);
    std::size_t paths = 0;
    for (std::size_t at = svg.find("<path"); at != std::string::npos; at = svg.find("<path", at + 1))
        ++paths;
    CHECK(paths == d.tree.edges.size());
    CHECK(svg.find("id=\"b-0-1\"") != std::string::npos);
    CHECK(svg.find("rgb(255,128,0)") != std::string::npos);
    CHECK(to_svg(d) == to_svg(d));
    CHECK_THROWS_AS(to_svg(d, {{"missing", "stroke-width"}}), DomainError);
}

TEST_CASE("svg refuses non-planar trees") {
    FractalParams p;
    p.generations = 2;
    const DecoratedTree flat = decorate(evaluate_tree(smooth_fractal(p), fractal_start(p)));
    const DecoratedTree space = project(flat, {{1, 0}, {0, 1}});
    CHECK_NOTHROW(to_svg(space));
    CHECK_THROWS_AS(to_svg(spatial_tree(2)), DimensionError);
}

TEST_CASE("stl layout, counts and unit normals") {
    const DecoratedTree d = spatial_tree(2);
    CHECK_THROWS_AS(to_stl(small_tree(2)), DimensionError);
    TubeParams params;
    params.radial_segments = 6;
    const auto bytes = to_stl(d, params);
    REQUIRE(bytes.size() >= 84);
    const std::uint32_t n = read_u32(bytes, 80);
    CHECK(bytes.size() == 84 + 50 * std::size_t{n});
    std::size_t expected = 0;
    for (const auto& e : d.tree.edges)
        expected += tube_triangle_count(e.polyline.size(), 6, true);
    CHECK(n == expected);
    for (std::uint32_t t = 0; t < n; ++t) {
        const std::size_t at = 84 + 50 * std::size_t{t};
        const double nx = read_f32(bytes, at), ny = read_f32(bytes, at + 4), nz = read_f32(bytes, at + 8);
        CHECK(std::sqrt(nx * nx + ny * ny + nz * nz) == Approx(1.0).epsilon(1e-5));
    }
    CHECK(tube_triangle_count(17, 8, true) == 16 * 8 * 2 + 2 * 6);
    CHECK(tube_triangle_count(17, 8, false) == 16 * 8 * 2);
    params.radial_segments = 2;
    CHECK_THROWS_AS(to_stl(d, params), DomainError);
}

TEST_CASE("stl radius falls back to a constant") {
    const DecoratedTree bare = decorate(evaluate_tree(spatial_spec(1), Pose::origin(3)));
    CHECK_THROWS_AS(to_stl(bare), DomainError);
    TubeParams params;
    params.radius = 0.02;
    const auto bytes = to_stl(bare, params);
    // Nothing comes closer to the root than the first ring.
    double nearest = 1.0;
    for (std::uint32_t t = 0; t < read_u32(bytes, 80); ++t)
        for (std::size_t v = 0; v < 3; ++v) {
            const std::size_t at = 84 + 50 * std::size_t{t} + 12 + 12 * v;
            const double x = read_f32(bytes, at), y = read_f32(bytes, at + 4), z = read_f32(bytes, at + 8);
            nearest = std::min(nearest, std::sqrt(x * x + y * y + z * z));
        }
    CHECK(nearest == Approx(0.02).epsilon(1e-5));
}

TEST_CASE("json round trip keeps geometry and channels") {
    const DecoratedTree d = small_tree();
    const std::string text = to_json(d);
    const auto j = nlohmann::json::parse(text);
    CHECK(j.at("version") == kJsonSchemaVersion);
    CHECK(j.at("nodes").size() == d.tree.nodes.size());
    CHECK(j.at("accessories").at("color").at("arity") == 3);

    const DecoratedTree back = from_json(text);
    CHECK(back.tree.dim == d.tree.dim);
    REQUIRE(back.tree.nodes.size() == d.tree.nodes.size());
    for (std::size_t i = 0; i < d.tree.nodes.size(); ++i) {
        CHECK(back.tree.nodes[i].id == d.tree.nodes[i].id);
        CHECK(back.tree.nodes[i].pose.position == d.tree.nodes[i].pose.position);
    }
    CHECK(back.tree.edges[3].polyline.flat_points() == d.tree.edges[3].polyline.flat_points());
    CHECK(back.channels.at("age").per_edge == d.channels.at("age").per_edge);
    CHECK(to_json(back) == text);
}

TEST_CASE("json rejects malformed documents") {
    CHECK_THROWS_AS(from_json("not json"), FormatError);
    CHECK_THROWS_AS(from_json("{}"), FormatError);
    auto j = nlohmann::json::parse(to_json(small_tree(1)));
    j["version"] = 99;
    CHECK_THROWS_AS(from_json(j.dump()), FormatError);
    j = nlohmann::json::parse(to_json(small_tree(1)));
    j["edges"][0]["points"] = nlohmann::json::array({1.0});
    CHECK_THROWS_AS(from_json(j.dump()), FormatError);
}

TEST_CASE("projection onto leading axes") {
    const DecoratedTree d = spatial_tree(2);
    const DecoratedTree flat = project(d, leading_axes(3, 2));
    CHECK(flat.tree.dim == 2);
    for (std::size_t i = 0; i < d.tree.nodes.size(); ++i) {
        CHECK(flat.tree.nodes[i].pose.position[0] == d.tree.nodes[i].pose.position[0]);
        CHECK(flat.tree.nodes[i].pose.position[1] == d.tree.nodes[i].pose.position[1]);
        CHECK(flat.tree.nodes[i].arc == d.tree.nodes[i].arc);
    }
    CHECK(leading_axes(4, 3) == std::vector<std::vector<double>>{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}});
    CHECK_THROWS_AS(project(d, {{1, 0, 0}, {1, 0, 0}}), DomainError);
    CHECK_THROWS_AS(project(d, {{1, 0}, {0, 1}}), DimensionError);
    CHECK_THROWS_AS(leading_axes(2, 3), DimensionError);
}
