#pragma once

#include "dendrite/dsl/ast.hpp"

#include <string>

namespace dendrite::dsl {

/// Canonical source text. Properties print in a fixed order, numbers in
/// shortest round-trip form, nested concatenations fully parenthesized.
std::string format(const TreeProgram& program);

/// Span-free structural rendering, for equality checks and debugging.
std::string dump(const TreeProgram& program);

bool same_program(const TreeProgram& a, const TreeProgram& b);

} // namespace dendrite::dsl
