#include "dendrite/dsl/parser.hpp"

#include "dendrite/accessory.hpp"
#include "dendrite/dsl/lexer.hpp"

#include <cmath>
#include <set>

namespace dendrite::dsl {

const Definition* TreeProgram::find(std::string_view name) const {
    for (const auto& d : definitions)
        if (d.name == name)
            return &d;
    return nullptr;
}

const Definition* TreeProgram::entry() const {
    if (const auto* m = find("main"); m && m->is_tree())
        return m;
    for (auto it = definitions.rbegin(); it != definitions.rend(); ++it)
        if (it->is_tree())
            return &*it;
    return nullptr;
}

namespace {

Span join(Span a, Span b) {
    Span s = a;
    s.length = b.offset + b.length > a.offset ? b.offset + b.length - a.offset : a.length;
    return s;
}

struct Failure {};

class Parser {
public:
    Parser(std::string_view src, std::vector<Diagnostic>& diags) : src_(src), diags_(diags) {
        toks_ = lex(src, diags);
    }

    TreeProgram program() {
        TreeProgram prog;
        while (peek().kind != Tok::end) {
            auto comments = take_comments();
            try {
                const Token& t = peek();
                if (t.kind == Tok::identifier && t.text == "tree" && lookahead(1).kind == Tok::identifier) {
                    prog.definitions.push_back(block_def());
                } else if (t.kind == Tok::identifier && lookahead(1).kind == Tok::assign) {
                    prog.definitions.push_back(assign_def());
                } else {
                    error(t.span, "expected a definition ('tree name { ... }' or 'name = ...;'), found " + found(t));
                    throw Failure{};
                }
                auto& def = prog.definitions.back();
                auto inner = take_comments();
                comments.insert(comments.end(), inner.begin(), inner.end());
                def.comments = std::move(comments);
            } catch (const Failure&) {
                recover_top();
            }
        }
        prog.trailing_comments = take_comments();
        return prog;
    }

private:
    // --- token access -----------------------------------------------------------

    void skip_comments() {
        while (toks_[pos_].kind == Tok::comment) {
            std::string_view text = toks_[pos_].text;
            while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
                text.remove_suffix(1);
            pending_.emplace_back(text);
            ++pos_;
        }
    }

    const Token& peek() {
        skip_comments();
        return toks_[pos_];
    }

    // k-th significant token ahead, without consuming comments.
    const Token& lookahead(std::size_t k) const {
        std::size_t p = pos_;
        for (;;) {
            while (toks_[p].kind == Tok::comment)
                ++p;
            if (k == 0 || toks_[p].kind == Tok::end)
                return toks_[p];
            --k;
            ++p;
        }
    }

    Token take() {
        Token t = peek();
        if (t.kind != Tok::end)
            ++pos_;
        return t;
    }

    bool accept(Tok k) {
        if (peek().kind != k)
            return false;
        take();
        return true;
    }

    std::string found(const Token& t) const {
        if (t.kind == Tok::end)
            return "end of input";
        return "'" + std::string(t.text) + "'";
    }

    Token expect(Tok k, std::string_view what = {}) {
        if (peek().kind != k) {
            error(peek().span, "expected " + std::string(what.empty() ? describe(k) : what) + ", found " + found(peek()));
            throw Failure{};
        }
        return take();
    }

    Token expect_identifier(std::string_view what) {
        return expect(Tok::identifier, what);
    }

    void error(Span span, std::string message) {
        diags_.push_back(make_diagnostic(Severity::error, std::move(message), span, src_));
    }

    std::vector<std::string> take_comments() {
        std::vector<std::string> out;
        out.swap(pending_);
        return out;
    }

    // Skip to the end of the current top-level definition.
    void recover_top() {
        int depth = 0;
        while (peek().kind != Tok::end) {
            const Tok k = take().kind;
            if (k == Tok::lbrace || k == Tok::lparen || k == Tok::lbracket)
                ++depth;
            else if (k == Tok::rparen || k == Tok::rbracket)
                depth = depth > 0 ? depth - 1 : 0;
            else if (k == Tok::rbrace && --depth <= 0)
                break;
            else if (k == Tok::semicolon && depth <= 0)
                break;
        }
        pending_.clear();
    }

    // Skip to the end of the current block property, leaving a closing '}' in place.
    void recover_property() {
        int depth = 0;
        while (peek().kind != Tok::end) {
            const Tok k = peek().kind;
            if (depth == 0 && k == Tok::rbrace)
                return;
            take();
            if (k == Tok::lbrace || k == Tok::lparen || k == Tok::lbracket)
                ++depth;
            else if (k == Tok::rbrace || k == Tok::rparen || k == Tok::rbracket)
                depth = depth > 0 ? depth - 1 : 0;
            else if (k == Tok::semicolon && depth == 0)
                return;
        }
    }

    // --- definitions -----------------------------------------------------------------

    Definition block_def() {
        take(); // tree
        const Token name = expect_identifier("tree name");
        Definition def;
        def.name = std::string(name.text);
        def.span = name.span;
        expect(Tok::lbrace);
        TreeBlock block;
        std::set<std::string> seen;
        while (peek().kind != Tok::rbrace && peek().kind != Tok::end) {
            try {
                property(block, seen);
            } catch (const Failure&) {
                recover_property();
            }
        }
        expect(Tok::rbrace, "'}' to close tree '" + def.name + "'");
        def.body = std::move(block);
        return def;
    }

    Definition assign_def() {
        const Token name = take();
        Definition def;
        def.name = std::string(name.text);
        def.span = name.span;
        take(); // =
        bool tree_expr = false;
        for (std::size_t k = 0;; ++k) {
            const Tok t = lookahead(k).kind;
            if (t == Tok::semicolon || t == Tok::end || t == Tok::rbrace)
                break;
            if (t == Tok::concat) {
                tree_expr = true;
                break;
            }
        }
        if (tree_expr)
            def.body = concat_expr();
        else
            def.body = expression();
        expect(Tok::semicolon, "';' after definition of '" + def.name + "'");
        return def;
    }

    TreeExprPtr concat_expr() {
        TreeExprPtr lhs = tree_operand();
        while (peek().kind == Tok::concat) {
            const Token op = take();
            TreeExprPtr rhs = tree_operand();
            auto node = std::make_shared<TreeExpr>();
            node->kind = TreeExpr::Kind::concat;
            node->lhs = lhs;
            node->rhs = rhs;
            node->span = op.span;
            lhs = node;
        }
        return lhs;
    }

    TreeExprPtr tree_operand() {
        if (accept(Tok::lparen)) {
            TreeExprPtr inner = concat_expr();
            expect(Tok::rparen);
            return inner;
        }
        const Token name = expect_identifier("tree name");
        auto node = std::make_shared<TreeExpr>();
        node->name = std::string(name.text);
        node->span = name.span;
        return node;
    }

    // --- tree block properties ------------------------------------------------------------

    void duplicate_check(std::set<std::string>& seen, const std::string& key, Span span) {
        if (!seen.insert(key).second) {
            error(span, "'" + key + "' is set twice");
            throw Failure{};
        }
    }

    int integer(std::string_view what) {
        const Token t = peek();
        if (t.kind != Tok::number || t.number != std::floor(t.number) || t.number < 0.0 || t.number > 1e6) {
            error(t.span, "expected " + std::string(what) + " (a non-negative integer), found " + found(t));
            throw Failure{};
        }
        take();
        return static_cast<int>(t.number);
    }

    std::vector<int> integer_list(std::string_view what) {
        expect(Tok::lbracket);
        std::vector<int> out;
        if (peek().kind != Tok::rbracket) {
            do
                out.push_back(integer(what));
            while (accept(Tok::comma));
        }
        expect(Tok::rbracket);
        return out;
    }

    std::vector<ExprPtr> expr_list() {
        expect(Tok::lbracket);
        std::vector<ExprPtr> out;
        if (peek().kind != Tok::rbracket) {
            do
                out.push_back(expression());
            while (accept(Tok::comma));
        }
        expect(Tok::rbracket);
        return out;
    }

    static std::optional<int> angular_key(std::string_view key) {
        if (key == "dphi")
            return 0;
        if (key == "dpsi")
            return 1;
        if (key.size() > 4 && key.substr(0, 4) == "dang") {
            int axis = 0;
            for (char c : key.substr(4)) {
                if (c < '0' || c > '9')
                    return std::nullopt;
                axis = axis * 10 + (c - '0');
            }
            if (axis >= 2)
                return axis;
        }
        return std::nullopt;
    }

    void property(TreeBlock& b, std::set<std::string>& seen) {
        const Token key = expect_identifier("property name");
        const std::string k(key.text);

        if (k == "accessory") {
            const Token name = expect_identifier("accessory name");
            const Token kind = expect_identifier("'deriv' or 'abs'");
            if (kind.text != "deriv" && kind.text != "abs") {
                error(kind.span, "accessory kind must be 'deriv' or 'abs', found '" + std::string(kind.text) + "'");
                throw Failure{};
            }
            duplicate_check(seen, "accessory " + std::string(name.text), name.span);
            expect(Tok::colon);
            AccessoryDecl decl;
            decl.name = std::string(name.text);
            decl.derivative = kind.text == "deriv";
            decl.span = name.span;
            if (peek().kind == Tok::lbracket) {
                decl.vector = true;
                decl.components = expr_list();
                if (decl.components.empty()) {
                    error(name.span, "vector accessory '" + decl.name + "' needs at least one component");
                    throw Failure{};
                }
            } else {
                decl.components.push_back(expression());
            }
            expect(Tok::semicolon);
            b.accessories.push_back(std::move(decl));
            return;
        }

        if (k == "branches") {
            BranchRule rule;
            rule.span = key.span;
            if (accept(Tok::lbracket)) {
                rule.axis = integer("axis index");
                expect(Tok::rbracket);
            }
            duplicate_check(seen, "branches[" + std::to_string(rule.axis) + "]", key.span);
            expect(Tok::colon);
            branch_rule(rule);
            expect(Tok::semicolon);
            b.branches.push_back(std::move(rule));
            return;
        }

        const auto axis = angular_key(k);
        static const std::set<std::string> known = {"dim",  "dr",      "forks",  "axes",  "generations",
                                                    "domain", "step", "heading", "origin"};
        if (!axis && !known.count(k)) {
            error(key.span, "unknown property '" + k + "'");
            throw Failure{};
        }
        duplicate_check(seen, k, key.span);
        expect(Tok::colon);
        if (axis) {
            b.angular.push_back(AngularDecl{*axis, expression(), key.span});
        } else if (k == "dim") {
            const Token t = peek();
            const int d = integer("dimension");
            if (d < 2) {
                error(t.span, "dimension must be at least 2");
                throw Failure{};
            }
            b.dim = d;
        } else if (k == "dr") {
            b.dr = expression();
        } else if (k == "forks") {
            b.forks = integer_list("fork arity");
        } else if (k == "axes") {
            b.axes = integer_list("axis index");
        } else if (k == "generations") {
            b.generations = integer("generation count");
        } else if (k == "domain") {
            const Token t = peek();
            b.domain = expr_list();
            if (b.domain.size() != 2) {
                error(t.span, "domain needs exactly two bounds [s_min, s_max]");
                throw Failure{};
            }
        } else if (k == "step") {
            b.step = expression();
        } else if (k == "heading") {
            b.heading = expr_list();
        } else if (k == "origin") {
            b.origin = expr_list();
        }
        expect(Tok::semicolon);
    }

    void branch_rule(BranchRule& rule) {
        const Token kind = expect_identifier("branch rule (every, at, pattern or none)");
        if (kind.text == "none") {
            rule.kind = BranchRule::Kind::none;
            return;
        }
        if (kind.text == "every") {
            rule.kind = BranchRule::Kind::every;
            expect(Tok::lparen);
            rule.args.push_back(expression());
            expect(Tok::rparen);
            return;
        }
        if (kind.text == "at") {
            rule.kind = BranchRule::Kind::at;
            expect(Tok::lparen);
            do
                rule.args.push_back(expression());
            while (accept(Tok::comma));
            expect(Tok::rparen);
            return;
        }
        if (kind.text == "pattern") {
            rule.kind = BranchRule::Kind::pattern;
            expect(Tok::lparen);
            const Token open = peek();
            rule.args = expr_list();
            if (rule.args.empty()) {
                error(open.span, "pattern needs at least one interval");
                throw Failure{};
            }
            expect(Tok::comma);
            if (peek().kind == Tok::identifier && peek().text == "repeat") {
                take();
                rule.repeat = true;
            } else {
                rule.repeat = false;
                rule.count = expression();
            }
            expect(Tok::rparen);
            return;
        }
        error(kind.span, "unknown branch rule '" + std::string(kind.text) + "' (expected every, at, pattern or none)");
        throw Failure{};
    }

    // --- expressions -----------------------------------------------------------------------

    ExprPtr expression() {
        ExprPtr lhs = additive();
        const Tok k = peek().kind;
        if (k == Tok::lt || k == Tok::le || k == Tok::gt || k == Tok::ge || k == Tok::eq || k == Tok::ne) {
            const Token op = take();
            ExprPtr rhs = additive();
            const Span sp = join(lhs->span, rhs->span);
            return make_binary(std::string(op.text), lhs, rhs, sp);
        }
        return lhs;
    }

    ExprPtr additive() {
        ExprPtr lhs = multiplicative();
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const Token op = take();
            ExprPtr rhs = multiplicative();
            const Span sp = join(lhs->span, rhs->span);
            lhs = make_binary(std::string(op.text), lhs, rhs, sp);
        }
        return lhs;
    }

    ExprPtr multiplicative() {
        ExprPtr lhs = unary();
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            const Token op = take();
            ExprPtr rhs = unary();
            const Span sp = join(lhs->span, rhs->span);
            lhs = make_binary(std::string(op.text), lhs, rhs, sp);
        }
        return lhs;
    }

    ExprPtr unary() {
        if (peek().kind == Tok::minus) {
            const Token op = take();
            ExprPtr operand = unary();
            return make_unary("-", operand, join(op.span, operand->span));
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (peek().kind == Tok::caret) {
            take();
            ExprPtr exponent = unary();
            const Span sp = join(base->span, exponent->span);
            return make_binary("^", base, exponent, sp);
        }
        return base;
    }

    ExprPtr primary() {
        const Token t = peek();
        if (t.kind == Tok::number) {
            take();
            return make_number(t.number, t.span);
        }
        if (t.kind == Tok::lparen) {
            take();
            ExprPtr inner = expression();
            expect(Tok::rparen);
            return inner;
        }
        if (t.kind == Tok::identifier) {
            take();
            if (t.text == "piecewise" && peek().kind == Tok::lparen)
                return piecewise(t);
            if (peek().kind == Tok::lparen) {
                take();
                std::vector<ExprPtr> args;
                if (peek().kind != Tok::rparen) {
                    do
                        args.push_back(expression());
                    while (accept(Tok::comma));
                }
                const Token close = expect(Tok::rparen);
                return make_call(std::string(t.text), std::move(args), join(t.span, close.span));
            }
            return make_variable(std::string(t.text), t.span);
        }
        error(t.span, "expected an expression, found " + found(t));
        throw Failure{};
    }

    ExprPtr piecewise(const Token& head) {
        take(); // (
        std::vector<ExprPtr> args;
        for (;;) {
            // A '(' opens either a (condition, value) pair or the default value.
            if (peek().kind == Tok::lparen) {
                const std::size_t save_pos = pos_;
                const std::size_t save_diags = diags_.size();
                const std::size_t save_pending = pending_.size();
                take();
                bool pair = false;
                try {
                    ExprPtr cond = expression();
                    if (accept(Tok::comma)) {
                        ExprPtr value = expression();
                        expect(Tok::rparen);
                        args.push_back(cond);
                        args.push_back(value);
                        pair = true;
                    }
                } catch (const Failure&) {
                }
                if (pair) {
                    expect(Tok::comma, "',' and a default value after the last (condition, value) pair");
                    continue;
                }
                pos_ = save_pos;
                diags_.resize(save_diags);
                pending_.resize(save_pending);
            }
            if (args.empty()) {
                error(peek().span, "piecewise needs at least one (condition, value) pair before the default");
                throw Failure{};
            }
            args.push_back(expression());
            const Token close = expect(Tok::rparen, "')' to close piecewise");
            return make_piecewise(std::move(args), join(head.span, close.span));
        }
    }

    std::string_view src_;
    std::vector<Diagnostic>& diags_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<std::string> pending_;
};

// --- name resolution -------------------------------------------------------------------------

class Resolver {
public:
    Resolver(std::string_view src, std::vector<Diagnostic>& diags) : src_(src), diags_(diags) {}

    void run(TreeProgram& prog) {
        std::set<std::string> names;
        for (auto& def : prog.definitions) {
            if (!names.insert(def.name).second) {
                error(def.span, "'" + def.name + "' is defined twice");
                continue;
            }
            if (builtin_arity(def.name) >= 0 || def.name == "s" || def.name == "ds" || def.name == "pi" ||
                def.name == "piecewise" || is_reserved_channel(def.name)) {
                error(def.span, "'" + def.name + "' is a reserved name");
                continue;
            }
            if (auto* e = std::get_if<ExprPtr>(&def.body)) {
                // A bare name of an earlier tree is an alias, not a constant.
                if ((*e)->kind == Expr::Kind::variable && trees_.count((*e)->name)) {
                    auto ref = std::make_shared<TreeExpr>();
                    ref->name = (*e)->name;
                    ref->span = (*e)->span;
                    def.body = TreeExprPtr(ref);
                } else {
                    check(**e, constant_scope());
                    constants_.insert(def.name);
                    continue;
                }
            }
            if (auto* t = std::get_if<TreeExprPtr>(&def.body))
                check_tree(**t);
            else
                check_block(std::get<TreeBlock>(def.body));
            trees_.insert(def.name);
        }
        if (!prog.definitions.empty() && !prog.entry())
            error(prog.definitions.back().span, "program defines no tree");
    }

private:
    using Scope = std::set<std::string>;

    void error(Span span, std::string message) {
        diags_.push_back(make_diagnostic(Severity::error, std::move(message), span, src_));
    }

    Scope constant_scope() const {
        Scope s(constants_.begin(), constants_.end());
        s.insert("pi");
        return s;
    }

    Scope coordinate_scope() const {
        Scope s = constant_scope();
        s.insert("s");
        s.insert("ds");
        return s;
    }

    void check(const Expr& e, const Scope& scope) {
        switch (e.kind) {
        case Expr::Kind::variable:
            if (!scope.count(e.name)) {
                if (trees_.count(e.name))
                    error(e.span, "'" + e.name + "' is a tree, not a number");
                else
                    error(e.span, "unknown identifier '" + e.name + "'");
            }
            return;
        case Expr::Kind::call: {
            const int arity = builtin_arity(e.name);
            if (arity < 0)
                error(e.span, "unknown function '" + e.name + "'");
            else if (static_cast<std::size_t>(arity) != e.args.size())
                error(e.span, "'" + e.name + "' takes " + std::to_string(arity) + " argument" + (arity == 1 ? "" : "s") +
                                  ", got " + std::to_string(e.args.size()));
            break;
        }
        default:
            break;
        }
        for (const auto& a : e.args)
            check(*a, scope);
    }

    void check_tree(const TreeExpr& t) {
        if (t.kind == TreeExpr::Kind::concat) {
            check_tree(*t.lhs);
            check_tree(*t.rhs);
            return;
        }
        if (!trees_.count(t.name)) {
            if (constants_.count(t.name))
                error(t.span, "'" + t.name + "' is a number, not a tree");
            else
                error(t.span, "unknown tree '" + t.name + "' (trees must be defined before use)");
        }
    }

    void check_block(const TreeBlock& b) {
        const Scope coords = coordinate_scope();
        const Scope structural = constant_scope();
        int max_axis = 0;
        if (b.dr)
            check(*b.dr, coords);
        for (const auto& a : b.angular) {
            check(*a.expr, coords);
            max_axis = std::max(max_axis, a.axis);
        }
        const int dim = b.dim.value_or(max_axis + 2);
        for (const auto& a : b.angular)
            if (a.axis + 2 > dim)
                error(a.span, angular_channel_name(static_cast<std::size_t>(a.axis)) + " needs at least " +
                                  std::to_string(a.axis + 2) + " dimensions, tree has " + std::to_string(dim));
        for (const auto& r : b.branches) {
            if (r.axis + 2 > dim)
                error(r.span, "branch axis " + std::to_string(r.axis) + " does not exist in a " + std::to_string(dim) +
                                  "D tree");
            for (const auto& e : r.args)
                check(*e, structural);
            if (r.count)
                check(*r.count, structural);
        }
        for (const auto* list : {&b.domain, &b.heading, &b.origin})
            for (const auto& e : *list)
                check(*e, structural);
        if (b.step)
            check(*b.step, structural);

        Scope acc = coords;
        acc.insert("dr");
        for (int a = 0; a + 1 < dim; ++a)
            acc.insert(angular_channel_name(static_cast<std::size_t>(a)));
        for (const auto& d : b.accessories) {
            if (is_reserved_channel(d.name) || d.name == "s" || d.name == "ds" || d.name == "pi")
                error(d.span, "'" + d.name + "' is a reserved name");
            acc.insert(d.name);
        }
        for (const auto& d : b.accessories)
            for (const auto& c : d.components)
                check(*c, acc);
    }

    std::string_view src_;
    std::vector<Diagnostic>& diags_;
    std::set<std::string> constants_;
    std::set<std::string> trees_;
};

} // namespace

ParseResult parse(std::string_view source) {
    ParseResult result;
    Parser parser(source, result.diagnostics);
    TreeProgram prog = parser.program();
    Resolver(source, result.diagnostics).run(prog);
    if (prog.definitions.empty() && !has_errors(result.diagnostics))
        result.diagnostics.push_back(make_diagnostic(Severity::error, "program is empty", Span{}, source));
    if (!has_errors(result.diagnostics)) {
        prog.source = std::make_shared<const std::string>(source);
        result.program = std::move(prog);
    }
    return result;
}

} // namespace dendrite::dsl
