#pragma once

#include "dendrite/dsl/ast.hpp"
#include "dendrite/dsl/diagnostic.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace dendrite::dsl {

struct ParseResult {
    /// Present when there are no errors.
    std::optional<TreeProgram> program;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return program.has_value(); }
};

/// Parses a whole program, collecting every diagnostic instead of stopping at
/// the first. Name resolution (unknown identifiers, wrong arities, undefined
/// trees) is part of parsing.
ParseResult parse(std::string_view source);

} // namespace dendrite::dsl
