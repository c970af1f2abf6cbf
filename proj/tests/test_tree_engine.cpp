#include "dendrite/error.hpp"
#include "dendrite/presets.hpp"
#include "dendrite/tree.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace dendrite;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

TreeSpec plain(const SGrid& g, double dr, std::vector<double> rates) {
    std::vector<std::vector<double>> ang;
    for (double r : rates)
        ang.emplace_back(g.count(), r);
    return TreeSpec{DerivativeCoords(g, std::vector<double>(g.count(), dr), std::move(ang))};
}

double max_node_difference(const EvaluatedTree& a, const EvaluatedTree& b) {
    REQUIRE(a.nodes.size() == b.nodes.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        REQUIRE(a.nodes[i].id == b.nodes[i].id);
        for (int c = 0; c < a.dim; ++c)
            worst = std::max(worst, std::abs(a.nodes[i].pose.position[c] - b.nodes[i].pose.position[c]));
    }
    return worst;
}

} // namespace

TEST_CASE("unit function is 0 on branch points and the multiplier set elsewhere") {
    const SGrid g(0.0, 2.0, 0.25);
    const BranchPointSet b({1.0}, g);
    CHECK(unit_function(b, g, 1.0).node);
    const UnitValue off = unit_function(b, g, 0.5);
    CHECK_FALSE(off.node);
    CHECK(off.multipliers == std::vector<double>{-1.0, 1.0});
    CHECK(unit_function(b, g, 0.5, 3).multipliers == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(unit_function(b, g, 0.5, 5).multipliers == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
    CHECK_THROWS_AS(unit_function(b, g, 3.0), DomainError);
}

TEST_CASE("branch points snap to samples and warn when they move") {
    const SGrid g(0.0, 2.0, 0.25);
    const BranchPointSet exact({0.0, 0.5, 1.25}, g);
    CHECK(exact.warnings().empty());
    CHECK(exact.indices() == std::vector<std::size_t>{0, 2, 5});
    const BranchPointSet moved({0.3}, g);
    CHECK(moved.points() == std::vector<double>{0.25});
    CHECK(moved.warnings().size() == 1);
    CHECK_THROWS_AS(BranchPointSet({0.26, 0.24}, g), DomainError);
    CHECK_THROWS_AS(BranchPointSet({0.26, 0.27}, g), DomainError);
    CHECK_THROWS_AS(BranchPointSet({5.0}, g), DomainError);
    CHECK(BranchPointSet::every(0.5, g).points() == std::vector<double>{0.0, 0.5, 1.0, 1.5});
}

TEST_CASE("without branch points a tree reduces to its path") {
    const SGrid g(0.0, 2.0, 1e-3);
    const TreeSpec spec = plain(g, 1.0, {0.7});
    CHECK_FALSE(spec.is_tree());
    const Pose start = Pose::at({1, 2}, {0.2});
    const EvaluatedTree t = evaluate_tree(spec, start);
    const PathPolyline p = integrate_path(spec.coords, start);
    REQUIRE(t.edges.size() == 1);
    CHECK(t.edges[0].polyline.flat_points() == p.flat_points());
    CHECK(t.edges[0].polyline.cum_arcs() == p.cum_arcs());
    const EvaluatedTree s = evaluate_via_transform_stack(spec, start);
    CHECK(max_node_difference(t, s) < 1e-9);
}

TEST_CASE("straight binary tree matches a complex-exponential recursion") {
    const FractalParams p;
    const EvaluatedTree t = evaluate_tree(straight_fractal(p), fractal_start(p));
    REQUIRE(t.nodes.size() == 510);
    double worst = 0.0;
    for (const auto& n : t.nodes) {
        std::complex<double> z = 0.0;
        double heading = p.root_heading;
        double length = p.first_length;
        for (int digit : n.id.digits) {
            heading += (digit == 0 ? -1.0 : 1.0) * p.angle;
            z += length * std::polar(1.0, heading);
            length *= p.ratio;
        }
        worst = std::max({worst, std::abs(z.real() - n.pose.position[0]), std::abs(z.imag() - n.pose.position[1])});
    }
    CHECK(worst < 1e-12);
    const EvaluatedNode* rr = t.find(BranchId{{0, 0}});
    REQUIRE(rr);
    CHECK(rr->pose.position[0] == Approx(std::cos(pi / 6) + 2.0 / 3 * std::cos(-pi / 6)));
    CHECK(rr->pose.position[1] == Approx(std::sin(pi / 6) + 2.0 / 3 * std::sin(-pi / 6)));
}

TEST_CASE("nodes and edges come out in lexicographic order with continuity") {
    FractalParams p;
    p.generations = 4;
    const EvaluatedTree t = evaluate_tree(smooth_fractal(p), fractal_start(p));
    CHECK(t.nodes.size() == 30);
    CHECK(t.edges.size() == 30);
    for (std::size_t i = 1; i < t.nodes.size(); ++i)
        CHECK(t.nodes[i - 1].id < t.nodes[i].id);
    for (const auto& e : t.edges) {
        const auto first = e.polyline.point(0);
        const auto parent = e.from_root ? t.fork_origin() : t.find(e.parent)->position();
        CHECK(first[0] == parent[0]);
        CHECK(first[1] == parent[1]);
    }
    CHECK(t.max_generation() == 4);
    CHECK_FALSE(t.has_trunk());
}

TEST_CASE("a late first branch point yields a trunk") {
    const SGrid g(0.0, 3.0, 1.0 / 16);
    TreeSpec spec = plain(g, 1.0, {0.0});
    spec.branch_sets = {BranchPointSet({1.0, 2.0}, g)};
    spec.coords = DerivativeCoords(g, std::vector<double>(g.count(), 1.0), {std::vector<double>(g.count(), 0.5)});
    const EvaluatedTree t = evaluate_tree(spec, Pose::origin(2));
    CHECK(t.has_trunk());
    CHECK(expected_node_count(spec) == t.nodes.size());
    CHECK(t.nodes.size() == 1 + 2 + 4);
    CHECK(t.fork_origin()[0] == Approx(t.find(BranchId{})->pose.position[0]));
    CHECK(max_node_difference(t, evaluate_via_transform_stack(spec, Pose::origin(2))) < 1e-9);
}

TEST_CASE("ternary forks send the middle branch straight on") {
    FractalParams p;
    p.generations = 3;
    TreeSpec spec = straight_fractal(p);
    spec.forks.arity = {3};
    const EvaluatedTree t = evaluate_tree(spec, fractal_start(p));
    CHECK(t.nodes.size() == 3 + 9 + 27);
    CHECK(expected_node_count(spec) == 39);
    const EvaluatedNode* mid = t.find(BranchId{{1}});
    REQUIRE(mid);
    CHECK(mid->pose.heading[0] == Approx(p.root_heading));
    CHECK(mid->pose.position[0] == Approx(0.0).epsilon(1e-12));
    CHECK(max_node_difference(t, evaluate_via_transform_stack(spec, fractal_start(p))) < 1e-9);

    spec.forks.arity = {3, 2};
    CHECK(evaluate_tree(spec, fractal_start(p)).nodes.size() == 3 + 6 + 18);
}

TEST_CASE("sibling subtrees evaluated in parallel give the same tree") {
    const FractalParams p;
    const TreeSpec spec = smooth_fractal(p);
    EvalOptions par;
    par.parallel = true;
    const EvaluatedTree a = evaluate_tree(spec, fractal_start(p));
    const EvaluatedTree b = evaluate_tree(spec, fractal_start(p), par);
    REQUIRE(a.nodes.size() == b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i)
        CHECK(a.nodes[i].pose.position == b.nodes[i].pose.position);
}

TEST_CASE("node cap is an explicit error") {
    FractalParams p;
    p.generations = 12;
    EvalOptions small;
    small.max_nodes = 1000;
    CHECK_THROWS_AS(evaluate_tree(smooth_fractal(p), fractal_start(p), small), CapacityError);
    CHECK(expected_node_count(smooth_fractal(p)) == 8190);
}

TEST_CASE("3D trees fork along the scheduled axis") {
    const SGrid g(0.0, 2.0, 1.0 / 32);
    TreeSpec spec{DerivativeCoords(g, std::vector<double>(g.count(), 1.0),
                                   {std::vector<double>(g.count(), 0.4), std::vector<double>(g.count(), 0.3)})};
    spec.branch_sets = {BranchPointSet({0.0}, g), BranchPointSet({1.0}, g)};
    const Pose start = Pose::at({0, 0, 0}, {0.0, pi / 3});
    const EvaluatedTree t = evaluate_tree(spec, start);
    CHECK(t.nodes.size() == 2 + 4);
    // Generation 1 forks in azimuth only: both children keep the polar rate sign.
    CHECK(t.find(BranchId{{0}})->pose.heading[0] == Approx(-0.4));
    CHECK(t.find(BranchId{{1}})->pose.heading[0] == Approx(0.4));
    CHECK(t.find(BranchId{{0}})->pose.heading[1] == Approx(pi / 3 + 0.3));
    CHECK(t.find(BranchId{{1, 0}})->pose.heading[1] == Approx(pi / 3 + 0.3 - 0.3));
    CHECK(max_node_difference(t, evaluate_via_transform_stack(spec, start)) < 1e-9);

    spec.forks.axis = {1};
    const EvaluatedTree polar = evaluate_tree(spec, start);
    CHECK(polar.find(BranchId{{0}})->pose.heading[1] == Approx(pi / 3 - 0.3));
    CHECK(max_node_difference(polar, evaluate_via_transform_stack(spec, start)) < 1e-9);
}

TEST_CASE("higher dimensions evaluate, the matrix baseline stops at 3D") {
    const SGrid g(0.0, 3.0, 1.0 / 16);
    TreeSpec spec{DerivativeCoords(g, std::vector<double>(g.count(), 1.0),
                                   {std::vector<double>(g.count(), 0.4), std::vector<double>(g.count(), 0.2),
                                    std::vector<double>(g.count(), 0.3)})};
    spec.branch_sets = {BranchPointSet::every(1.0, g)};
    const EvaluatedTree t = evaluate_tree(spec, Pose::origin(4));
    CHECK(t.dim == 4);
    CHECK(t.nodes.size() == 14);
    CHECK(t.nodes[0].pose.position.size() == 4);
    CHECK_THROWS_AS(evaluate_via_transform_stack(spec, Pose::origin(4)), DimensionError);
}

TEST_CASE("spec validation") {
    const SGrid g(0.0, 2.0, 0.25);
    TreeSpec spec = plain(g, 1.0, {0.5});
    spec.branch_sets = {BranchPointSet::every(0.5, g)};
    CHECK_NOTHROW(spec.validate());
    spec.forks.arity = {1};
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec.forks.arity = {2};
    spec.forks.axis = {1};
    CHECK_THROWS_AS(spec.validate(), DimensionError);
    spec.forks.axis = {};
    spec.max_generations = 0;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec.max_generations = 3;
    CHECK_THROWS_AS(evaluate_tree(spec, Pose::origin(3)), DimensionError);
}

TEST_CASE("segment totals and resampled specs") {
    const FractalParams p;
    const TreeSpec spec = smooth_fractal(p);
    CHECK(total_segments(spec) == 510 * 64);
    const TreeSpec fine = resample_spec(spec, 1.0 / 128);
    CHECK(fine.coords.grid().count() == 8 * 128 + 1);
    CHECK(fine.branch_sets[0].points() == spec.branch_sets[0].points());
    const EvaluatedTree a = evaluate_tree(spec, fractal_start(p));
    const EvaluatedTree b = evaluate_tree(fine, fractal_start(p));
    CHECK(a.path_length == Approx(b.path_length).epsilon(1e-6));
}

TEST_CASE("branch ids print as digit lists") {
    CHECK(BranchId{}.str() == "[]");
    CHECK(BranchId{{0, 1, 2}}.str() == "[0,1,2]");
    CHECK(BranchId{{0}} < BranchId{{0, 0}});
    CHECK(BranchId{{0, 1}} < BranchId{{1}});
    CHECK(fork_multiplier(0, 2) == -1.0);
    CHECK(fork_multiplier(1, 2) == 1.0);
    CHECK_THROWS_AS(fork_multiplier(2, 2), DomainError);
}
