#include "dendrite/expr.hpp"

#include "dendrite/accessory.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace dendrite {

namespace {

ExprPtr make(Expr::Kind kind, std::string name, std::vector<ExprPtr> args, Span span, double number = 0.0) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->name = std::move(name);
    e->args = std::move(args);
    e->span = span;
    e->number = number;
    return e;
}

struct Builtin {
    std::string_view name;
    int arity;
};

constexpr Builtin kBuiltins[] = {
    {"exp", 1},  {"sin", 1},  {"cos", 1},   {"tan", 1},   {"abs", 1}, {"sqrt", 1},
    {"log", 1},  {"rad", 1},  {"floor", 1}, {"round", 1}, {"min", 2}, {"max", 2},
};

double apply_builtin(const std::string& fn, const double* a) {
    if (fn == "exp")
        return std::exp(a[0]);
    if (fn == "sin")
        return std::sin(a[0]);
    if (fn == "cos")
        return std::cos(a[0]);
    if (fn == "tan")
        return std::tan(a[0]);
    if (fn == "abs")
        return std::abs(a[0]);
    if (fn == "sqrt")
        return std::sqrt(a[0]);
    if (fn == "log")
        return std::log(a[0]);
    if (fn == "rad")
        return a[0] * std::numbers::pi / 180.0;
    if (fn == "floor")
        return std::floor(a[0]);
    if (fn == "round")
        return std::round(a[0]);
    if (fn == "min")
        return std::min(a[0], a[1]);
    return std::max(a[0], a[1]);
}

int precedence(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::binary:
        if (e.name == "^")
            return 5;
        if (e.name == "*" || e.name == "/")
            return 3;
        if (e.name == "+" || e.name == "-")
            return 2;
        return 1;
    case Expr::Kind::unary:
        return 4;
    case Expr::Kind::number:
        return e.number < 0.0 ? 4 : 6;
    default:
        return 6;
    }
}

void format_into(const Expr& e, std::string& out);

void child(const Expr& e, bool parens, std::string& out) {
    if (parens)
        out += '(';
    format_into(e, out);
    if (parens)
        out += ')';
}

void format_into(const Expr& e, std::string& out) {
    switch (e.kind) {
    case Expr::Kind::number:
        out += format_number(e.number);
        return;
    case Expr::Kind::variable:
        out += e.name;
        return;
    case Expr::Kind::unary:
        out += e.name;
        child(*e.args[0], precedence(*e.args[0]) < 4, out);
        return;
    case Expr::Kind::binary: {
        const int p = precedence(e);
        const Expr& l = *e.args[0];
        const Expr& r = *e.args[1];
        if (p == 5) {
            child(l, precedence(l) <= 5, out);
            out += '^';
            child(r, precedence(r) < 4, out);
        } else if (p == 1) {
            child(l, precedence(l) <= 1, out);
            out += ' ' + e.name + ' ';
            child(r, precedence(r) <= 1, out);
        } else {
            child(l, precedence(l) < p, out);
            out += p == 2 ? ' ' + e.name + ' ' : e.name;
            child(r, precedence(r) <= p, out);
        }
        return;
    }
    case Expr::Kind::call:
        out += e.name + '(';
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i)
                out += ", ";
            format_into(*e.args[i], out);
        }
        out += ')';
        return;
    case Expr::Kind::piecewise:
        out += "piecewise(";
        for (std::size_t i = 0; i + 1 < e.args.size(); i += 2) {
            out += '(';
            format_into(*e.args[i], out);
            out += ", ";
            format_into(*e.args[i + 1], out);
            out += "), ";
        }
        format_into(*e.args.back(), out);
        out += ')';
        return;
    }
}

void collect(const Expr& e, std::vector<std::string>& out) {
    if (e.kind == Expr::Kind::variable) {
        for (const auto& n : out)
            if (n == e.name)
                return;
        out.push_back(e.name);
        return;
    }
    for (const auto& a : e.args)
        collect(*a, out);
}

double finite_or_throw(double v, const Expr& e, const ExprEnv& env, const char* what) {
    if (!std::isfinite(v))
        throw ExprError(std::string(what) + " is not finite", e.span, env.s);
    return v;
}

} // namespace

ExprPtr make_number(double v, Span span) {
    return make(Expr::Kind::number, {}, {}, span, v);
}
ExprPtr make_variable(std::string name, Span span) {
    return make(Expr::Kind::variable, std::move(name), {}, span);
}
ExprPtr make_unary(std::string op, ExprPtr operand, Span span) {
    return make(Expr::Kind::unary, std::move(op), {std::move(operand)}, span);
}
ExprPtr make_binary(std::string op, ExprPtr lhs, ExprPtr rhs, Span span) {
    return make(Expr::Kind::binary, std::move(op), {std::move(lhs), std::move(rhs)}, span);
}
ExprPtr make_call(std::string fn, std::vector<ExprPtr> args, Span span) {
    return make(Expr::Kind::call, std::move(fn), std::move(args), span);
}
ExprPtr make_piecewise(std::vector<ExprPtr> args, Span span) {
    return make(Expr::Kind::piecewise, "piecewise", std::move(args), span);
}

int builtin_arity(std::string_view name) {
    for (const auto& b : kBuiltins)
        if (b.name == name)
            return b.arity;
    return -1;
}

double evaluate(const Expr& e, const ExprEnv& env) {
    switch (e.kind) {
    case Expr::Kind::number:
        return e.number;
    case Expr::Kind::variable: {
        if (e.name == "s")
            return env.s;
        if (e.name == "ds")
            return env.ds;
        if (e.name == "pi")
            return std::numbers::pi;
        if (env.constants)
            if (auto it = env.constants->find(e.name); it != env.constants->end())
                return it->second;
        if (env.sample)
            return env.sample->value(e.name);
        throw ExprError("'" + e.name + "' has no value here", e.span, env.s);
    }
    case Expr::Kind::unary:
        return -evaluate(*e.args[0], env);
    case Expr::Kind::binary: {
        const double a = evaluate(*e.args[0], env);
        const double b = evaluate(*e.args[1], env);
        const char op = e.name[0];
        if (e.name.size() == 1) {
            switch (op) {
            case '+':
                return finite_or_throw(a + b, e, env, "sum");
            case '-':
                return finite_or_throw(a - b, e, env, "difference");
            case '*':
                return finite_or_throw(a * b, e, env, "product");
            case '/':
                if (b == 0.0)
                    throw ExprError("division by zero", e.span, env.s);
                return finite_or_throw(a / b, e, env, "quotient");
            case '^':
                return finite_or_throw(std::pow(a, b), e, env, "power");
            case '<':
                return a < b ? 1.0 : 0.0;
            case '>':
                return a > b ? 1.0 : 0.0;
            default:
                break;
            }
        }
        if (e.name == "<=")
            return a <= b ? 1.0 : 0.0;
        if (e.name == ">=")
            return a >= b ? 1.0 : 0.0;
        if (e.name == "==")
            return a == b ? 1.0 : 0.0;
        if (e.name == "!=")
            return a != b ? 1.0 : 0.0;
        throw ExprError("unknown operator " + e.name, e.span, env.s);
    }
    case Expr::Kind::call: {
        double a[2] = {0.0, 0.0};
        for (std::size_t i = 0; i < e.args.size() && i < 2; ++i)
            a[i] = evaluate(*e.args[i], env);
        return finite_or_throw(apply_builtin(e.name, a), e, env, (e.name + "(...)").c_str());
    }
    case Expr::Kind::piecewise:
        for (std::size_t i = 0; i + 1 < e.args.size(); i += 2)
            if (evaluate(*e.args[i], env) != 0.0)
                return evaluate(*e.args[i + 1], env);
        return evaluate(*e.args.back(), env);
    }
    return 0.0;
}

std::vector<std::string> free_variables(const Expr& e) {
    std::vector<std::string> out;
    collect(e, out);
    return out;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_expr(const Expr& e) {
    std::string out;
    format_into(e, out);
    return out;
}

bool same_expr(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size())
        return false;
    if (a.kind == Expr::Kind::number && a.number != b.number)
        return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!same_expr(*a.args[i], *b.args[i]))
            return false;
    return true;
}

} // namespace dendrite
