#pragma once

#include "dendrite/expr.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dendrite::dsl {

struct BranchRule {
    enum class Kind { every, at, pattern, none };

    /// Angular axis the rule's fork points belong to.
    int axis = 0;
    Kind kind = Kind::none;
    /// every: spacing; at: the points; pattern: the interval lengths.
    std::vector<ExprPtr> args;
    /// pattern only: repeat until the domain ends, or `count` times.
    bool repeat = true;
    ExprPtr count;
    Span span;
};

struct AccessoryDecl {
    std::string name;
    bool derivative = false;
    /// Bracketed `[a, b, c]` vector channel; a scalar has one component.
    bool vector = false;
    std::vector<ExprPtr> components;
    Span span;
};

struct AngularDecl {
    int axis = 0;
    ExprPtr expr;
    Span span;
};

struct TreeBlock {
    std::optional<int> dim;
    ExprPtr dr;
    std::vector<AngularDecl> angular;
    std::vector<BranchRule> branches;
    std::vector<int> forks;
    std::vector<int> axes;
    std::optional<int> generations;
    /// Empty or exactly two bounds.
    std::vector<ExprPtr> domain;
    ExprPtr step;
    std::vector<ExprPtr> heading;
    std::vector<ExprPtr> origin;
    std::vector<AccessoryDecl> accessories;
};

/// Right-hand side of a tree definition: a reference or `lhs << rhs`.
struct TreeExpr {
    enum class Kind { reference, concat };

    Kind kind = Kind::reference;
    std::string name;
    std::shared_ptr<const TreeExpr> lhs;
    std::shared_ptr<const TreeExpr> rhs;
    Span span;
};

using TreeExprPtr = std::shared_ptr<const TreeExpr>;

struct Definition {
    std::string name;
    /// Comment lines (without the leading marker) that precede the definition.
    std::vector<std::string> comments;
    std::variant<TreeBlock, TreeExprPtr, ExprPtr> body;
    Span span;

    bool is_block() const { return std::holds_alternative<TreeBlock>(body); }
    bool is_tree_expr() const { return std::holds_alternative<TreeExprPtr>(body); }
    bool is_constant() const { return std::holds_alternative<ExprPtr>(body); }
    bool is_tree() const { return !is_constant(); }
};

struct TreeProgram {
    std::vector<Definition> definitions;
    /// Comments after the last definition.
    std::vector<std::string> trailing_comments;
    /// Text the program was parsed from (for diagnostic excerpts).
    std::shared_ptr<const std::string> source;

    const Definition* find(std::string_view name) const;
    /// `main` when defined, otherwise the last tree definition.
    const Definition* entry() const;
};

} // namespace dendrite::dsl
