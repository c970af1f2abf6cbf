#pragma once

#include "dendrite/tree.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace dendrite {

enum class Classification { exact_fractal, quasi_fractal, non_fractal };

std::string_view to_string(Classification c);

struct SimilarityReport {
    Classification classification = Classification::non_fractal;
    /// Constant ratio between consecutive units, when there is one.
    std::optional<double> rho;
    bool rho_condition_met = false;
    bool phi_condition_met = false;
    bool equidistant_met = false;
    double tolerance_used = 0.0;
    /// Number of branch intervals per repeating unit (1 when equidistant, 0 when none).
    std::size_t period = 0;
};

/// Tests constant radial scaling, repeated angular program and equidistant
/// (or periodically repeating) branch intervals. `tolerance` is relative.
/// Needs at least three branch points.
SimilarityReport classify_self_similarity(const TreeSpec& spec, double tolerance = 1e-6);

struct BoundReport {
    double radius = 0.0;
    /// Straightest-path length over the evaluated generations.
    double evaluated_length = 0.0;
    /// The evaluated tree stops short of the spec's implied limit.
    bool truncated = false;
    /// A geometric tail was added (exact fractals only).
    bool extrapolated = false;
    std::optional<double> rho;
};

BoundReport bound_report(const TreeSpec& spec);

/// Radius of a circle about the root containing the whole tree.
double bounding_radius(const TreeSpec& spec);

/// Distance from the first fork to node [0] in `a`, over the same in `b`.
double canopy_scale(const EvaluatedTree& a, const EvaluatedTree& b);

struct EquivalenceReport {
    double scale = 1.0;
    /// Rotation applied to `b` (radians).
    double rotation = 0.0;
    /// d_i for generations 1..n.
    std::vector<double> per_generation_distance;
    double fitted_rho = 0.0;
    bool converged = false;
};

/// 2D only. `b` is scaled by canopy_scale and rotated so the first-generation
/// bisectors coincide; d_i is the largest mismatch of a generation-i branch
/// vector once its parent nodes are matched.
EquivalenceReport compare_canopies(const EvaluatedTree& a, const EvaluatedTree& b, int generations);

/// Checks that both specs are exact fractals before evaluating and comparing.
EquivalenceReport compare_canopies(const TreeSpec& a, const Pose& start_a, const TreeSpec& b, const Pose& start_b,
                                   int generations, const EvalOptions& options = {});

/// Least-squares slope of log N(eps) against log(1 / eps). 2D only.
double estimate_box_dimension(const EvaluatedTree& tree, const std::vector<double>& scales);

/// `count` box sizes halving from a quarter of the tree's extent.
std::vector<double> default_box_scales(const EvaluatedTree& tree, int count = 6);

} // namespace dendrite
