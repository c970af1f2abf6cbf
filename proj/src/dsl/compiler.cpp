#include "dendrite/dsl/compiler.hpp"

#include "dendrite/dsl/parser.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

namespace dendrite::dsl {

namespace {

using Constants = std::unordered_map<std::string, double>;

struct Fatal {};

class Compiler {
public:
    Compiler(const TreeProgram& prog, const CompileOptions& opts, std::vector<Diagnostic>* warnings)
        : prog_(prog), opts_(opts), warnings_(warnings),
          source_(prog.source ? std::string_view(*prog.source) : std::string_view{}),
          constants_(std::make_shared<Constants>()) {}

    EnhancedTree run() {
        const Definition* entry = prog_.entry();
        if (!entry)
            throw CompileError({make_diagnostic(Severity::error, "program defines no tree", Span{}, source_)});
        for (const auto& def : prog_.definitions)
            if (def.is_constant()) {
                const auto& e = *std::get<ExprPtr>(def.body);
                (*constants_)[def.name] = structural(e, "constant '" + def.name + "'");
            }
        if (!errors_.empty())
            throw CompileError(errors_);
        try {
            EnhancedTree out = definition(*entry);
            if (!errors_.empty())
                throw CompileError(errors_);
            return out;
        } catch (const Fatal&) {
            throw CompileError(errors_);
        }
    }

private:
    void error(Span span, std::string msg) {
        errors_.push_back(make_diagnostic(Severity::error, std::move(msg), span, source_));
    }

    void warn(Span span, std::string msg) {
        if (warnings_)
            warnings_->push_back(make_diagnostic(Severity::warning, std::move(msg), span, source_));
    }

    [[noreturn]] void fail(Span span, std::string msg) {
        error(span, std::move(msg));
        throw Fatal{};
    }

    // Expressions that do not depend on s.
    double structural(const Expr& e, const std::string& what) {
        ExprEnv env;
        env.constants = constants_.get();
        try {
            return evaluate(e, env);
        } catch (const ExprError& err) {
            error(err.span(), what + ": " + err.what());
            return 0.0;
        }
    }

    std::vector<double> sample(const Expr& e, const SGrid& grid, const std::string& what, bool non_negative) {
        std::vector<double> out(grid.count());
        ExprEnv env;
        env.constants = constants_.get();
        env.ds = grid.delta_s();
        for (std::size_t k = 0; k < grid.count(); ++k) {
            env.s = grid.at(k);
            try {
                out[k] = evaluate(e, env);
            } catch (const ExprError& err) {
                fail(err.span(), what + ": " + err.what() + " at s = " + format_number(env.s));
            }
            if (non_negative && out[k] < 0.0)
                fail(e.span, what + " must be non-negative (it is a length rate), but it is " + format_number(out[k]) +
                                 " at s = " + format_number(env.s));
        }
        return out;
    }

    EnhancedTree definition(const Definition& def) {
        if (auto it = memo_.find(def.name); it != memo_.end())
            return it->second;
        EnhancedTree out;
        if (const auto* b = std::get_if<TreeBlock>(&def.body))
            out = block(def, *b);
        else
            out = tree_expr(*std::get<TreeExprPtr>(def.body));
        memo_.emplace(def.name, out);
        return out;
    }

    EnhancedTree tree_expr(const TreeExpr& t) {
        if (t.kind == TreeExpr::Kind::reference) {
            const Definition* d = prog_.find(t.name);
            if (!d || !d->is_tree())
                fail(t.span, "unknown tree '" + t.name + "'");
            return definition(*d);
        }
        EnhancedTree lhs = tree_expr(*t.lhs);
        EnhancedTree rhs = tree_expr(*t.rhs);
        try {
            return concatenate(lhs, rhs, ConcatOptions{opts_.allow_resample});
        } catch (const Error& e) {
            fail(t.span, std::string("cannot concatenate: ") + e.what());
        }
    }

    SGrid block_grid(const Definition& def, const TreeBlock& b, int generations) {
        if (opts_.grid)
            return *opts_.grid;
        double lo = 0.0, hi = 0.0;
        double spacing = 0.0;
        double shortest = 0.0;
        for (const auto& r : b.branches) {
            if (r.kind == BranchRule::Kind::every && spacing == 0.0)
                spacing = structural(*r.args[0], "branch spacing");
            if (r.kind == BranchRule::Kind::pattern)
                for (const auto& a : r.args) {
                    const double len = structural(*a, "pattern interval");
                    if (len > 0.0 && (shortest == 0.0 || len < shortest))
                        shortest = len;
                }
        }
        if (!b.domain.empty()) {
            lo = structural(*b.domain[0], "domain start");
            hi = structural(*b.domain[1], "domain end");
        } else {
            for (const auto& r : b.branches) {
                if (r.kind == BranchRule::Kind::pattern && !r.repeat) {
                    double period = 0.0;
                    for (const auto& a : r.args)
                        period += structural(*a, "pattern interval");
                    hi = std::max(hi, period * structural(*r.count, "pattern count"));
                }
            }
            if (hi == 0.0 && spacing > 0.0)
                hi = spacing * generations;
            if (hi == 0.0)
                fail(def.span, "tree '" + def.name + "' needs a domain: [s_min, s_max]");
        }
        if (opts_.s_max)
            hi = *opts_.s_max;
        double step = 0.0;
        if (opts_.delta_s)
            step = *opts_.delta_s;
        else if (b.step)
            step = structural(*b.step, "step");
        else
            step = spacing > 0.0 ? spacing / 64.0 : shortest > 0.0 ? shortest / 64.0 : (hi - lo) / 512.0;
        try {
            SGrid grid(lo, hi, step);
            const double span = hi - lo;
            if (std::abs(static_cast<double>(grid.count() - 1) * step - span) > 1e-9 * std::max(1.0, span))
                warn(def.span, "domain length " + format_number(span) + " is not a multiple of the step " +
                                   format_number(step) + "; s_max becomes " + format_number(grid.s_max()));
            return grid;
        } catch (const Error& e) {
            fail(b.domain.empty() ? def.span : b.domain[0]->span, e.what());
        }
    }

    BranchPointSet branch_set(const BranchRule& r, const SGrid& grid) {
        try {
            switch (r.kind) {
            case BranchRule::Kind::none:
                return BranchPointSet{};
            case BranchRule::Kind::every:
                return BranchPointSet::every(structural(*r.args[0], "branch spacing"), grid);
            case BranchRule::Kind::at: {
                std::vector<double> pts;
                for (const auto& a : r.args)
                    pts.push_back(structural(*a, "branch point"));
                BranchPointSet set(std::move(pts), grid);
                for (const auto& w : set.warnings())
                    warn(r.span, w);
                return set;
            }
            case BranchRule::Kind::pattern: {
                std::vector<double> lens;
                for (const auto& a : r.args) {
                    lens.push_back(structural(*a, "pattern interval"));
                    if (!(lens.back() > 0.0))
                        fail(a->span, "pattern intervals must be positive");
                }
                const std::size_t limit =
                    r.repeat ? SIZE_MAX
                             : lens.size() * static_cast<std::size_t>(std::max(0.0, structural(*r.count, "pattern count")));
                std::vector<double> pts;
                double p = grid.s_min();
                const double end = grid.s_max() - 0.5 * grid.delta_s();
                for (std::size_t i = 0; i < limit && p < end; ++i) {
                    pts.push_back(p);
                    p += lens[i % lens.size()];
                }
                BranchPointSet set(std::move(pts), grid);
                for (const auto& w : set.warnings())
                    warn(r.span, w);
                return set;
            }
            }
        } catch (const Error& e) {
            fail(r.span, e.what());
        }
        return BranchPointSet{};
    }

    EnhancedTree block(const Definition& def, const TreeBlock& b) {
        int max_axis = 0;
        for (const auto& a : b.angular)
            max_axis = std::max(max_axis, a.axis);
        for (const auto& r : b.branches)
            max_axis = std::max(max_axis, r.axis);
        const int dim = b.dim.value_or(max_axis + 2);
        const int generations = opts_.generations.value_or(b.generations.value_or(8));
        if (generations < 1)
            fail(def.span, "generations must be at least 1");
        if (!b.dr)
            fail(def.span, "tree '" + def.name + "' has no radial rate (dr)");

        const SGrid grid = block_grid(def, b, generations);
        std::vector<double> radial = sample(*b.dr, grid, "dr", true);
        std::vector<std::vector<double>> angular(dim - 1, std::vector<double>(grid.count(), 0.0));
        for (const auto& a : b.angular)
            angular[a.axis] = sample(*a.expr, grid, angular_channel_name(static_cast<std::size_t>(a.axis)), false);

        TreeSpec spec{DerivativeCoords(grid, std::move(radial), std::move(angular))};
        for (const auto& r : b.branches) {
            if (spec.branch_sets.size() <= static_cast<std::size_t>(r.axis))
                spec.branch_sets.resize(r.axis + 1);
            spec.branch_sets[r.axis] = branch_set(r, grid);
        }
        if (!b.forks.empty())
            spec.forks.arity = b.forks;
        spec.forks.axis = b.axes;
        spec.max_generations = generations;
        try {
            spec.validate();
        } catch (const Error& e) {
            fail(def.span, "tree '" + def.name + "': " + e.what());
        }

        Pose start = Pose::origin(dim);
        if (dim == 2)
            start.heading[0] = std::numbers::pi / 2.0;
        if (!b.heading.empty()) {
            if (b.heading.size() != static_cast<std::size_t>(dim - 1))
                fail(b.heading[0]->span, "heading needs " + std::to_string(dim - 1) + " angles for a " +
                                             std::to_string(dim) + "D tree");
            for (std::size_t i = 0; i < b.heading.size(); ++i)
                start.heading[i] = structural(*b.heading[i], "heading");
        }
        if (!b.origin.empty()) {
            if (b.origin.size() != static_cast<std::size_t>(dim))
                fail(b.origin[0]->span, "origin needs " + std::to_string(dim) + " coordinates");
            for (std::size_t i = 0; i < b.origin.size(); ++i)
                start.position[i] = structural(*b.origin[i], "origin");
        }

        AccessorySet set;
        for (const auto& decl : b.accessories) {
            AccessoryFn fn;
            fn.name = decl.name;
            fn.kind = decl.derivative ? AccessoryKind::derivative : AccessoryKind::absolute;
            std::shared_ptr<const Constants> consts = constants_;
            const double ds = grid.delta_s();
            for (const auto& c : decl.components) {
                bool standalone = true;
                for (const auto& v : free_variables(*c)) {
                    if (v == "s" || v == "ds" || v == "pi" || constants_->count(v))
                        continue;
                    standalone = false;
                    if (std::find(fn.depends_on.begin(), fn.depends_on.end(), v) == fn.depends_on.end())
                        fn.depends_on.push_back(v);
                }
                if (standalone)
                    sample(*c, grid, "accessory '" + decl.name + "'", false);
                fn.components.push_back([expr = c, consts, ds](const SampleContext& ctx) {
                    ExprEnv env;
                    env.s = ctx.s;
                    env.ds = ds;
                    env.constants = consts.get();
                    env.sample = &ctx;
                    return evaluate(*expr, env);
                });
            }
            try {
                set.add(std::move(fn));
            } catch (const Error& e) {
                fail(decl.span, e.what());
            }
        }
        try {
            set.evaluation_order(dim);
        } catch (const Error& e) {
            fail(def.span, e.what());
        }
        return EnhancedTree::of(std::move(spec), std::move(start), std::move(set));
    }

    const TreeProgram& prog_;
    const CompileOptions& opts_;
    std::vector<Diagnostic>* warnings_;
    std::string_view source_;
    std::shared_ptr<Constants> constants_;
    std::vector<Diagnostic> errors_;
    std::map<std::string, EnhancedTree> memo_;
};

} // namespace

EnhancedTree compile(const TreeProgram& program, const CompileOptions& options, std::vector<Diagnostic>* warnings) {
    return Compiler(program, options, warnings).run();
}

EnhancedTree compile(const TreeProgram& program, const SGrid& grid) {
    CompileOptions opts;
    opts.grid = grid;
    return compile(program, opts);
}

EnhancedTree compile_source(std::string_view source, const CompileOptions& options, std::vector<Diagnostic>* warnings) {
    ParseResult parsed = parse(source);
    if (!parsed.ok())
        throw CompileError(std::move(parsed.diagnostics));
    if (warnings)
        for (auto& d : parsed.diagnostics)
            warnings->push_back(std::move(d));
    return compile(*parsed.program, options, warnings);
}

} // namespace dendrite::dsl
