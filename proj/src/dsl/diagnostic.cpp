#include "dendrite/dsl/diagnostic.hpp"

#include <algorithm>

namespace dendrite::dsl {

Diagnostic make_diagnostic(Severity severity, std::string message, Span span, std::string_view source) {
    Diagnostic d;
    d.severity = severity;
    d.message = std::move(message);
    d.line = span.line;
    d.column = span.column;
    d.offset = std::min(span.offset, source.size());
    d.length = std::min(span.length, source.size() - d.offset);
    std::size_t begin = 0;
    if (d.offset > 0) {
        const auto nl = source.rfind('\n', d.offset - 1);
        begin = nl == std::string_view::npos ? 0 : nl + 1;
    }
    std::size_t end = source.find('\n', d.offset);
    if (end == std::string_view::npos)
        end = source.size();
    d.excerpt = std::string(source.substr(begin, end - begin));
    return d;
}

std::string render(const Diagnostic& d, std::string_view source_name) {
    std::string out = std::string(source_name) + ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
                      (d.severity == Severity::error ? "error: " : "warning: ") + d.message;
    if (!d.excerpt.empty()) {
        out += "\n    " + d.excerpt + "\n    ";
        for (int i = 1; i < d.column; ++i)
            out += (static_cast<std::size_t>(i - 1) < d.excerpt.size() && d.excerpt[i - 1] == '\t') ? '\t' : ' ';
        out += '^';
        for (std::size_t i = 1; i < d.length && d.column - 1 + static_cast<int>(i) < static_cast<int>(d.excerpt.size());
             ++i)
            out += '~';
    }
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.severity == Severity::error; });
}

namespace {

std::string summary(const std::vector<Diagnostic>& diags) {
    if (diags.empty())
        return "compilation failed";
    const auto& d = diags.front();
    return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.message;
}

} // namespace

CompileError::CompileError(std::vector<Diagnostic> diags) : Error(summary(diags)), diags_(std::move(diags)) {}

} // namespace dendrite::dsl
