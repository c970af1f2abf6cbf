#pragma once

#include "dendrite/error.hpp"
#include "dendrite/expr.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace dendrite::dsl {

enum class Severity { error, warning };

struct Diagnostic {
    Severity severity = Severity::error;
    std::string message;
    int line = 1;
    int column = 1;
    std::size_t offset = 0;
    std::size_t length = 0;
    /// The source line the diagnostic points into.
    std::string excerpt;
};

/// Builds a diagnostic for `span`, copying the source line as excerpt.
Diagnostic make_diagnostic(Severity severity, std::string message, Span span, std::string_view source);

/// `name:line:col: error: message`, the excerpt, and a caret line.
std::string render(const Diagnostic& d, std::string_view source_name = "<input>");

bool has_errors(const std::vector<Diagnostic>& diags);

/// Compilation failure with the diagnostics that caused it.
class CompileError : public Error {
public:
    explicit CompileError(std::vector<Diagnostic> diags);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diags_; }

private:
    std::vector<Diagnostic> diags_;
};

} // namespace dendrite::dsl
