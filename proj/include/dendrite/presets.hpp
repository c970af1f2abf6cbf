#pragma once

#include "dendrite/tree.hpp"

#include <cstddef>

namespace dendrite {

/// Parameters of the equidistant binary fractals: branch k has length
/// first_length * ratio^k and turns by `angle`.
struct FractalParams {
    double first_length = 1.0;
    double ratio = 2.0 / 3.0;
    double angle = 1.0471975511965976; // pi / 3
    int generations = 8;
    /// Distance in s between consecutive branch points.
    double interval = 1.0;
    std::size_t samples_per_branch = 64;
    double root_heading = 1.5707963267948966; // pi / 2
};

/// Curved branches: constant angular rate, radial rate c * ratio^(s / interval).
TreeSpec smooth_fractal(const FractalParams& p);

/// Straight branches: turn and length are impulses at the branch points.
TreeSpec straight_fractal(const FractalParams& p);

/// Origin, heading p.root_heading.
Pose fractal_start(const FractalParams& p, int dim = 2);

/// -1 / (2 cos 144 deg), about 0.618.
double golden_alpha();

/// Golden Koch parameters: angle 144 deg, ratio golden_alpha().
FractalParams golden_koch_params();

/// H-fractal parameters: angle 90 deg, ratio 1 / sqrt(2).
FractalParams h_fractal_params();

} // namespace dendrite
