#pragma once

#include "dendrite/accessory.hpp"

#include <string>
#include <string_view>

namespace dendrite {

inline constexpr int kJsonSchemaVersion = 1;

/// Node graph with sorted keys:
/// {version, dim, root, nodes:[{id, pos, heading, s, arc}],
///  edges:[{child, parent, from_root, s0, ds, points, headings, arc}],
///  accessories:{name:{kind, arity, edges:[[...]]}}, path_length}.
std::string to_json(const DecoratedTree& decorated, int indent = -1);

/// Inverse of to_json. Throws FormatError on malformed input.
DecoratedTree from_json(std::string_view text);

} // namespace dendrite
