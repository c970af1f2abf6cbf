#pragma once

#include "dendrite/accessory.hpp"
#include "dendrite/dsl/ast.hpp"
#include "dendrite/dsl/diagnostic.hpp"

#include <optional>
#include <vector>

namespace dendrite::dsl {

struct CompileOptions {
    /// Sample every closed form at this step instead of the program's own.
    std::optional<double> delta_s;
    /// Replaces the end of every block's domain.
    std::optional<double> s_max;
    /// Replaces every block's generation count.
    std::optional<int> generations;
    /// Sample every block on this grid.
    std::optional<SGrid> grid;
    /// Let concatenation resample parts whose steps differ.
    bool allow_resample = false;
};

/// Samples the entry definition into an enhanced tree. References are
/// inlined and `<<` lowers to concatenate(). Throws CompileError carrying
/// positioned diagnostics (negative radial rate, division by zero, ...).
/// Non-fatal findings such as snapped branch points go to `warnings`.
EnhancedTree compile(const TreeProgram& program, const CompileOptions& options = {},
                     std::vector<Diagnostic>* warnings = nullptr);

EnhancedTree compile(const TreeProgram& program, const SGrid& grid);

/// Parses and compiles; parse errors raise CompileError too.
EnhancedTree compile_source(std::string_view source, const CompileOptions& options = {},
                            std::vector<Diagnostic>* warnings = nullptr);

} // namespace dendrite::dsl
