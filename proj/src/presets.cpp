#include "dendrite/presets.hpp"

#include "dendrite/error.hpp"

#include <cmath>
#include <numbers>

namespace dendrite {

namespace {

void check(const FractalParams& p) {
    if (!(p.first_length > 0.0) || !(p.ratio > 0.0) || !(p.interval > 0.0))
        throw DomainError("fractal lengths, ratio and interval must be positive");
    if (p.generations < 1 || p.samples_per_branch < 1)
        throw DomainError("fractal needs at least one generation and one sample per branch");
}

SGrid fractal_grid(const FractalParams& p) {
    const double ds = p.interval / static_cast<double>(p.samples_per_branch);
    return SGrid::from_count(0.0, ds, static_cast<std::size_t>(p.generations) * p.samples_per_branch + 1);
}

TreeSpec with_branches(DerivativeCoords coords, const FractalParams& p) {
    TreeSpec spec{std::move(coords)};
    const SGrid& grid = spec.coords.grid();
    std::vector<double> points;
    for (int k = 0; k < p.generations; ++k)
        points.push_back(grid.at(static_cast<std::size_t>(k) * p.samples_per_branch));
    spec.branch_sets.emplace_back(std::move(points), grid);
    spec.max_generations = p.generations;
    return spec;
}

} // namespace

TreeSpec smooth_fractal(const FractalParams& p) {
    check(p);
    const SGrid grid = fractal_grid(p);
    const double ds = grid.delta_s();
    const std::size_t m = p.samples_per_branch;
    // Normalize so the Riemann sum over the first branch is exactly first_length.
    double first = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        first += std::pow(p.ratio, grid.at(j) / p.interval);
    const double c = p.first_length / (ds * first);
    std::vector<double> radial(grid.count());
    for (std::size_t k = 0; k < grid.count(); ++k)
        radial[k] = c * std::pow(p.ratio, grid.at(k) / p.interval);
    std::vector<double> angular(grid.count(), p.angle / p.interval);
    return with_branches(DerivativeCoords(grid, std::move(radial), {std::move(angular)}), p);
}

TreeSpec straight_fractal(const FractalParams& p) {
    check(p);
    const SGrid grid = fractal_grid(p);
    const double ds = grid.delta_s();
    std::vector<double> radial(grid.count(), 0.0);
    std::vector<double> angular(grid.count(), 0.0);
    double length = p.first_length;
    for (int k = 0; k < p.generations; ++k) {
        const std::size_t i = static_cast<std::size_t>(k) * p.samples_per_branch;
        radial[i] = length / ds;
        angular[i] = p.angle / ds;
        length *= p.ratio;
    }
    return with_branches(DerivativeCoords(grid, std::move(radial), {std::move(angular)}), p);
}

Pose fractal_start(const FractalParams& p, int dim) {
    Pose pose = Pose::origin(dim);
    pose.heading[0] = p.root_heading;
    return pose;
}

double golden_alpha() {
    return -1.0 / (2.0 * std::cos(144.0 * std::numbers::pi / 180.0));
}

FractalParams golden_koch_params() {
    FractalParams p;
    p.ratio = golden_alpha();
    p.angle = 144.0 * std::numbers::pi / 180.0;
    return p;
}

FractalParams h_fractal_params() {
    FractalParams p;
    p.ratio = 1.0 / std::sqrt(2.0);
    p.angle = std::numbers::pi / 2.0;
    return p;
}

} // namespace dendrite
