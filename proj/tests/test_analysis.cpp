#include "dendrite/error.hpp"
#include "dendrite/analysis.hpp"
#include "dendrite/presets.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace dendrite;
using doctest::Approx;

namespace {

TreeSpec scaled_radial(TreeSpec spec, double factor) {
    const auto& c = spec.coords;
    std::vector<double> r = c.radial();
    for (double& v : r)
        v *= factor;
    spec.coords = DerivativeCoords(c.grid(), std::move(r), c.angular_all());
    return spec;
}

} // namespace

TEST_CASE("preset fractals classify as exact") {
    const FractalParams p;
    for (const TreeSpec& spec : {smooth_fractal(p), straight_fractal(p)}) {
        const SimilarityReport r = classify_self_similarity(spec);
        CHECK(r.classification == Classification::exact_fractal);
        REQUIRE(r.rho);
        CHECK(*r.rho == Approx(2.0 / 3.0).epsilon(1e-9));
        CHECK(r.period == 1);
        CHECK(r.rho_condition_met);
        CHECK(r.phi_condition_met);
        CHECK(r.equidistant_met);
    }
    CHECK(to_string(Classification::quasi_fractal) == "quasi_fractal");
}

TEST_CASE("classification is invariant under a uniform radial scale") {
    const TreeSpec spec = smooth_fractal(FractalParams{});
    const SimilarityReport r = classify_self_similarity(scaled_radial(spec, 3.7));
    CHECK(r.classification == Classification::exact_fractal);
    CHECK(*r.rho == Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("a perturbed angular program is quasi, irregular branch points are not fractal") {
    const FractalParams p;
    TreeSpec spec = smooth_fractal(p);
    const SGrid& g = spec.coords.grid();
    auto ang = spec.coords.angular_all();
    for (std::size_t k = 0; k < g.count(); ++k)
        if (g.at(k) >= 3.0 && g.at(k) < 4.0)
            ang[0][k] += 1e-3;
    TreeSpec bent = spec;
    bent.coords = DerivativeCoords(g, spec.coords.radial(), ang);
    const SimilarityReport q = classify_self_similarity(bent);
    CHECK(q.classification == Classification::quasi_fractal);
    CHECK_FALSE(q.phi_condition_met);
    CHECK(q.rho_condition_met);

    TreeSpec irregular = spec;
    irregular.branch_sets = {BranchPointSet({0.0, 0.75, 1.875, 2.375, 3.75, 4.125, 5.5}, g)};
    CHECK(classify_self_similarity(irregular).classification == Classification::non_fractal);

    TreeSpec few = spec;
    few.branch_sets = {BranchPointSet({0.0, 1.0}, g)};
    CHECK_THROWS_AS(classify_self_similarity(few), PreconditionError);
}

TEST_CASE("bounding radius") {
    const FractalParams p;
    const BoundReport smooth = bound_report(smooth_fractal(p));
    CHECK(smooth.radius == Approx(3.0).epsilon(1e-9));
    CHECK(smooth.extrapolated);
    CHECK(smooth.truncated);
    CHECK(smooth.evaluated_length == Approx(3.0 * (1.0 - std::pow(2.0 / 3.0, 8))).epsilon(1e-9));

    const SGrid g(0.0, 2.0, 1.0 / 64);
    TreeSpec line{DerivativeCoords(g, std::vector<double>(g.count(), 1.0), {std::vector<double>(g.count(), 0.0)})};
    CHECK(bounding_radius(line) == Approx(2.0));
    const BoundReport plain = bound_report(line);
    CHECK_FALSE(plain.extrapolated);
    CHECK_FALSE(plain.rho);

    const FractalParams golden = golden_koch_params();
    CHECK(golden_alpha() == Approx(0.6180339887498949));
    CHECK(bounding_radius(straight_fractal(golden)) == Approx(1.0 / (1.0 - golden_alpha())).epsilon(1e-9));
}

TEST_CASE("canopy scale of a tree against scaled copies") {
    FractalParams p;
    p.generations = 4;
    const EvaluatedTree a = evaluate_tree(smooth_fractal(p), fractal_start(p));
    FractalParams big = p;
    big.first_length = 2.0;
    const EvaluatedTree b = evaluate_tree(smooth_fractal(big), fractal_start(big));
    CHECK(canopy_scale(a, a) == Approx(1.0));
    CHECK(canopy_scale(b, a) == Approx(2.0));
    CHECK(std::log(canopy_scale(a, b)) == Approx(-std::log(canopy_scale(b, a))));
}

TEST_CASE("canopy comparison") {
    FractalParams p;
    p.generations = 6;
    const TreeSpec smooth = smooth_fractal(p);
    const EquivalenceReport same = compare_canopies(smooth, fractal_start(p), smooth, fractal_start(p), 6);
    CHECK(same.converged);
    REQUIRE(same.per_generation_distance.size() == 6);
    for (double d : same.per_generation_distance)
        CHECK(d < 1e-12);
    CHECK(same.scale == Approx(1.0));

    FractalParams wider = p;
    wider.angle = std::numbers::pi / 4;
    const EquivalenceReport diff = compare_canopies(straight_fractal(p), fractal_start(p), straight_fractal(wider),
                                                    fractal_start(wider), 6);
    CHECK_FALSE(diff.converged);

    TreeSpec ternary = smooth;
    ternary.forks.arity = {3};
    CHECK_THROWS_AS(compare_canopies(smooth, fractal_start(p), ternary, fractal_start(p), 6), TopologyError);

    TreeSpec irregular = smooth;
    irregular.branch_sets = {BranchPointSet({0.0, 0.75, 1.875, 2.375, 3.75}, smooth.coords.grid())};
    CHECK_THROWS_AS(compare_canopies(smooth, fractal_start(p), irregular, fractal_start(p), 4), PreconditionError);
}

TEST_CASE("box dimension") {
    const EvaluatedTree t = evaluate_tree(smooth_fractal(FractalParams{}), fractal_start(FractalParams{}));
    const auto scales = default_box_scales(t);
    CHECK(scales.size() == 6);
    for (std::size_t i = 1; i < scales.size(); ++i)
        CHECK(scales[i] == Approx(scales[i - 1] / 2));
    const double d = estimate_box_dimension(t, scales);
    CHECK(d > 1.0);
    CHECK(d < 2.0);
    CHECK_THROWS_AS(estimate_box_dimension(t, {0.1}), PreconditionError);
    CHECK_THROWS_AS(estimate_box_dimension(t, {0.1, -0.05}), DomainError);
}
