#pragma once

// Fork layout shared by both evaluation backends.

#include "dendrite/tree.hpp"

#include <cstddef>
#include <vector>

namespace dendrite::detail {

struct ForkPlan {
    /// Active forks (within the domain and max_generations), in s order.
    std::vector<std::size_t> index;
    std::vector<int> arity;
    std::vector<int> axis;
    /// End index of the branches leaving fork g.
    std::vector<std::size_t> stop;
    /// Trunk [0, trunk_end] when the first fork is not at the first sample.
    bool trunk = false;
    std::size_t trunk_end = 0;
    std::size_t last = 0;
};

ForkPlan make_plan(const TreeSpec& spec);

} // namespace dendrite::detail
