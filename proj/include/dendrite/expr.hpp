#pragma once

#include "dendrite/error.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dendrite {

struct SampleContext;

/// Byte range of a token or node in the source; line and column are 1-based.
struct Span {
    std::size_t offset = 0;
    std::size_t length = 0;
    int line = 1;
    int column = 1;
};

/// Scalar expression over s.
struct Expr {
    enum class Kind { number, variable, unary, binary, call, piecewise };

    Kind kind = Kind::number;
    double number = 0.0;
    /// Variable or function name, or the operator spelling.
    std::string name;
    /// Operands; piecewise stores cond0, value0, cond1, value1, ..., default.
    std::vector<std::shared_ptr<const Expr>> args;
    Span span;
};

using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr make_number(double v, Span span = {});
ExprPtr make_variable(std::string name, Span span = {});
ExprPtr make_unary(std::string op, ExprPtr operand, Span span = {});
ExprPtr make_binary(std::string op, ExprPtr lhs, ExprPtr rhs, Span span = {});
ExprPtr make_call(std::string fn, std::vector<ExprPtr> args, Span span = {});
ExprPtr make_piecewise(std::vector<ExprPtr> args, Span span = {});

/// Built-in function arity, or -1 when `name` is not a built-in.
int builtin_arity(std::string_view name);

/// Raised while evaluating; carries the offending node and the s value.
class ExprError : public Error {
public:
    ExprError(const std::string& what, Span span, double s) : Error(what), span_(span), s_(s) {}
    Span span() const noexcept { return span_; }
    double s() const noexcept { return s_; }

private:
    Span span_;
    double s_;
};

struct ExprEnv {
    double s = 0.0;
    double ds = 0.0;
    const std::unordered_map<std::string, double>* constants = nullptr;
    /// Accessory and coordinate channels; absent outside accessory evaluation.
    const SampleContext* sample = nullptr;
};

/// Throws ExprError on division by zero, non-finite results or an
/// unresolvable name.
double evaluate(const Expr& e, const ExprEnv& env);

/// Names of the variables an expression reads, in first-use order.
std::vector<std::string> free_variables(const Expr& e);

/// Canonical text with minimal parentheses and shortest round-trip numbers.
std::string format_expr(const Expr& e);

/// Shortest decimal text that parses back to exactly v.
std::string format_number(double v);

/// Structural equality (spans ignored).
bool same_expr(const Expr& a, const Expr& b);

} // namespace dendrite
