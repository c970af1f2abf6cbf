#include "dendrite/dsl/format.hpp"

#include "dendrite/accessory.hpp"

namespace dendrite::dsl {

namespace {

std::string list(const std::vector<ExprPtr>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += ", ";
        out += format_expr(*items[i]);
    }
    return out + "]";
}

std::string int_list(const std::vector<int>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += ", ";
        out += std::to_string(items[i]);
    }
    return out + "]";
}

std::string rule_text(const BranchRule& r) {
    switch (r.kind) {
    case BranchRule::Kind::none:
        return "none";
    case BranchRule::Kind::every:
        return "every(" + format_expr(*r.args[0]) + ")";
    case BranchRule::Kind::at: {
        std::string out = "at(";
        for (std::size_t i = 0; i < r.args.size(); ++i) {
            if (i)
                out += ", ";
            out += format_expr(*r.args[i]);
        }
        return out + ")";
    }
    case BranchRule::Kind::pattern:
        return "pattern(" + list(r.args) + ", " + (r.repeat ? std::string("repeat") : format_expr(*r.count)) + ")";
    }
    return "none";
}

std::string tree_expr_text(const TreeExpr& t, bool nested) {
    if (t.kind == TreeExpr::Kind::reference)
        return t.name;
    std::string inner = tree_expr_text(*t.lhs, true) + " << " + tree_expr_text(*t.rhs, true);
    return nested ? "(" + inner + ")" : inner;
}

void block_text(const TreeBlock& b, std::string& out) {
    auto line = [&](const std::string& key, const std::string& value) { out += "    " + key + ": " + value + ";\n"; };
    if (b.dim)
        line("dim", std::to_string(*b.dim));
    if (b.dr)
        line("dr", format_expr(*b.dr));
    for (const auto& a : b.angular)
        line(angular_channel_name(static_cast<std::size_t>(a.axis)), format_expr(*a.expr));
    for (const auto& r : b.branches)
        line(r.axis == 0 ? "branches" : "branches[" + std::to_string(r.axis) + "]", rule_text(r));
    if (!b.forks.empty())
        line("forks", int_list(b.forks));
    if (!b.axes.empty())
        line("axes", int_list(b.axes));
    if (b.generations)
        line("generations", std::to_string(*b.generations));
    if (!b.domain.empty())
        line("domain", list(b.domain));
    if (b.step)
        line("step", format_expr(*b.step));
    if (!b.heading.empty())
        line("heading", list(b.heading));
    if (!b.origin.empty())
        line("origin", list(b.origin));
    for (const auto& a : b.accessories)
        line("accessory " + a.name + (a.derivative ? " deriv" : " abs"),
             a.vector ? list(a.components) : format_expr(*a.components[0]));
}

// Prefix form of an expression: (op a b), numbers in round-trip form.
std::string sexpr(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::number:
        return format_number(e.number);
    case Expr::Kind::variable:
        return e.name;
    default: {
        std::string out = "(" + e.name;
        for (const auto& a : e.args)
            out += " " + sexpr(*a);
        return out + ")";
    }
    }
}

std::string sexpr_list(const std::vector<ExprPtr>& items) {
    std::string out = "[";
    for (const auto& e : items)
        out += " " + sexpr(*e);
    return out + " ]";
}

std::string tree_sexpr(const TreeExpr& t) {
    if (t.kind == TreeExpr::Kind::reference)
        return "(ref " + t.name + ")";
    return "(concat " + tree_sexpr(*t.lhs) + " " + tree_sexpr(*t.rhs) + ")";
}

} // namespace

std::string format(const TreeProgram& program) {
    std::string out;
    for (std::size_t i = 0; i < program.definitions.size(); ++i) {
        const auto& def = program.definitions[i];
        if (i)
            out += '\n';
        for (const auto& c : def.comments)
            out += c + '\n';
        if (const auto* b = std::get_if<TreeBlock>(&def.body)) {
            out += "tree " + def.name + " {\n";
            block_text(*b, out);
            out += "}\n";
        } else if (const auto* t = std::get_if<TreeExprPtr>(&def.body)) {
            out += def.name + " = " + tree_expr_text(**t, false) + ";\n";
        } else {
            out += def.name + " = " + format_expr(*std::get<ExprPtr>(def.body)) + ";\n";
        }
    }
    if (!program.trailing_comments.empty()) {
        if (!out.empty())
            out += '\n';
        for (const auto& c : program.trailing_comments)
            out += c + '\n';
    }
    return out;
}

std::string dump(const TreeProgram& program) {
    std::string out;
    for (const auto& def : program.definitions) {
        for (const auto& c : def.comments)
            out += "comment " + c + "\n";
        if (const auto* b = std::get_if<TreeBlock>(&def.body)) {
            out += "tree " + def.name + "\n";
            if (b->dim)
                out += "  dim " + std::to_string(*b->dim) + "\n";
            if (b->dr)
                out += "  dr " + sexpr(*b->dr) + "\n";
            for (const auto& a : b->angular)
                out += "  angular " + std::to_string(a.axis) + " " + sexpr(*a.expr) + "\n";
            for (const auto& r : b->branches) {
                out += "  branches " + std::to_string(r.axis) + " " + std::to_string(static_cast<int>(r.kind)) + " " +
                       sexpr_list(r.args);
                if (r.kind == BranchRule::Kind::pattern)
                    out += r.repeat ? " repeat" : " " + sexpr(*r.count);
                out += "\n";
            }
            out += "  forks " + int_list(b->forks) + "\n  axes " + int_list(b->axes) + "\n";
            if (b->generations)
                out += "  generations " + std::to_string(*b->generations) + "\n";
            out += "  domain " + sexpr_list(b->domain) + "\n";
            if (b->step)
                out += "  step " + sexpr(*b->step) + "\n";
            out += "  heading " + sexpr_list(b->heading) + "\n  origin " + sexpr_list(b->origin) + "\n";
            for (const auto& a : b->accessories)
                out += "  accessory " + a.name + (a.derivative ? " deriv " : " abs ") + (a.vector ? "vec " : "") +
                       sexpr_list(a.components) + "\n";
        } else if (const auto* t = std::get_if<TreeExprPtr>(&def.body)) {
            out += "define " + def.name + " " + tree_sexpr(**t) + "\n";
        } else {
            out += "const " + def.name + " " + sexpr(*std::get<ExprPtr>(def.body)) + "\n";
        }
    }
    for (const auto& c : program.trailing_comments)
        out += "comment " + c + "\n";
    return out;
}

bool same_program(const TreeProgram& a, const TreeProgram& b) {
    return dump(a) == dump(b);
}

} // namespace dendrite::dsl
