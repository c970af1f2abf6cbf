#include "dendrite/cli.hpp"

#include "dendrite/analysis.hpp"
#include "dendrite/csv.hpp"
#include "dendrite/dsl.hpp"
#include "dendrite/export.hpp"
#include "dendrite/perimeter.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>

namespace dendrite::cli {

namespace {

struct Failure {
    int code;
    std::string message;
};

struct InputOptions {
    std::optional<double> delta_s;
    std::optional<double> s_max;
    std::optional<int> generations;
    std::string perimeter;
    double gain = 1.0;
    double falloff = 0.25;
    bool allow_resample = false;
};

struct OutputOptions {
    std::string path;
    std::string format;
    int project = 0;
    int tube_segments = 8;
    std::optional<double> radius;
    double stroke_width = 0.01;
    std::vector<std::string> styles;
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::size_t node_cap() {
    const char* env = std::getenv("DENDRITE_MAX_NODES");
    if (!env || !*env)
        return EvalOptions{}.max_nodes;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0)
        throw Failure{usage, std::string("DENDRITE_MAX_NODES must be a positive integer, got '") + env + "'"};
    return static_cast<std::size_t>(v);
}

EvalOptions eval_options() {
    EvalOptions o;
    o.max_nodes = node_cap();
    return o;
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void print_diagnostics(const std::vector<dsl::Diagnostic>& diags, const std::string& name, std::ostream& err) {
    for (const auto& d : diags)
        err << dsl::render(d, name) << '\n';
}

EnhancedTree load_program(const std::string& path, const InputOptions& in, std::ostream& err) {
    const std::string text = read_text_file(path);
    dsl::ParseResult parsed = dsl::parse(text);
    print_diagnostics(parsed.diagnostics, path, err);
    if (!parsed.ok())
        throw Failure{parse_error, ""};
    dsl::CompileOptions opts;
    opts.delta_s = in.delta_s;
    opts.s_max = in.s_max;
    opts.generations = in.generations;
    opts.allow_resample = in.allow_resample;
    std::vector<dsl::Diagnostic> warnings;
    try {
        EnhancedTree t = dsl::compile(*parsed.program, opts, &warnings);
        print_diagnostics(warnings, path, err);
        return t;
    } catch (const dsl::CompileError& e) {
        print_diagnostics(warnings, path, err);
        print_diagnostics(e.diagnostics(), path, err);
        throw Failure{compile_error, ""};
    }
}

EnhancedTree load_table(const std::string& path, const InputOptions& in) {
    CoordsTable table = parse_coords_csv(read_text_file(path));
    DerivativeCoords coords = std::move(table.coords);
    if (in.s_max) {
        const SGrid& g = coords.grid();
        const double steps = std::floor((*in.s_max - g.s_min()) / g.delta_s() + 0.5);
        if (steps < 1.0)
            throw Failure{usage, "--s-max leaves fewer than two samples"};
        const auto n = std::min(g.count(), static_cast<std::size_t>(steps) + 1);
        std::vector<double> radial(coords.radial().begin(), coords.radial().begin() + n);
        std::vector<std::vector<double>> angular;
        for (const auto& ch : coords.angular_all())
            angular.emplace_back(ch.begin(), ch.begin() + n);
        coords = DerivativeCoords(SGrid::from_count(g.s_min(), g.delta_s(), n), std::move(radial), std::move(angular));
    }
    std::vector<double> points;
    for (double p : table.branch_points)
        if (coords.grid().contains(p) && p < coords.grid().s_max() - 0.5 * coords.grid().delta_s())
            points.push_back(p);
    TreeSpec spec{coords};
    spec.branch_sets.emplace_back(std::move(points), coords.grid());
    spec.max_generations = in.generations.value_or(8);
    if (in.delta_s)
        spec = resample_spec(spec, *in.delta_s);
    spec.validate();
    Pose start = Pose::origin(spec.coords.dim());
    if (spec.coords.dim() == 2)
        start.heading[0] = std::numbers::pi / 2.0;
    return EnhancedTree::of(std::move(spec), std::move(start));
}

EnhancedTree load(const std::string& path, const InputOptions& in, std::ostream& err) {
    EnhancedTree t = ends_with(path, ".csv") ? load_table(path, in) : load_program(path, in, err);
    if (!in.perimeter.empty())
        t = perimeter_feedback(t, load_polygon_csv(in.perimeter), in.gain, in.falloff);
    return t;
}

const TreeSpec& spec_of(const EnhancedTree& t) {
    if (t.empty())
        throw Failure{evaluation_error, "the input is the empty tree"};
    return *t.spec;
}

void add_input_flags(CLI::App& cmd, InputOptions& in) {
    cmd.add_option("--delta-s", in.delta_s, "Sample step; programs re-sample their closed forms, tables are resampled")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--s-max", in.s_max, "End of the s domain");
    cmd.add_option("--generations", in.generations, "Maximum generation count")->check(CLI::Range(1, 64));
    cmd.add_option("--perimeter", in.perimeter, "Closed polygon CSV (x, y) steering the branches");
    cmd.add_option("--gain", in.gain, "Perimeter steering gain (rad per unit s)");
    cmd.add_option("--falloff", in.falloff, "Perimeter steering falloff distance")->check(CLI::PositiveNumber);
}

void add_output_flags(CLI::App& cmd, OutputOptions& out) {
    cmd.add_option("-o,--output", out.path, "Output file (stdout when omitted; required for stl)");
    cmd.add_option("--format", out.format, "svg, stl or json (default: from the output extension)")
        ->check(CLI::IsMember({"svg", "stl", "json"}));
    cmd.add_option("--project", out.project, "Project onto the first 2 or 3 axes first")->check(CLI::IsMember({2, 3}));
    cmd.add_option("--tube-segments", out.tube_segments, "Radial segments of STL tubes")->check(CLI::Range(3, 256));
    cmd.add_option("--radius", out.radius, "Constant tube radius (otherwise half the width channel)")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--stroke-width", out.stroke_width, "Default SVG stroke width")->check(CLI::PositiveNumber);
    cmd.add_option("--style", out.styles, "Bind a channel to an SVG attribute: name=attribute");
}

void write_artifact(const DecoratedTree& input, const OutputOptions& o, std::ostream& out) {
    DecoratedTree d = o.project ? project(input, leading_axes(input.tree.dim, o.project)) : input;
    std::string format = o.format;
    if (format.empty()) {
        for (const char* ext : {"svg", "stl", "json"})
            if (ends_with(o.path, std::string(".") + ext))
                format = ext;
        if (format.empty())
            format = d.tree.dim == 2 ? "svg" : "json";
    }
    const std::string dims = std::to_string(d.tree.dim) + "D";
    if (format == "svg" && d.tree.dim != 2)
        throw Failure{dimension_mismatch, "svg output needs a 2D tree but this tree is " + dims +
                                              " (use --format json, stl for 3D, or --project 2)"};
    if (format == "stl" && d.tree.dim != 3)
        throw Failure{dimension_mismatch, "stl output needs a 3D tree but this tree is " + dims +
                                              (d.tree.dim > 3 ? " (use --project 3)" : "")};

    std::string text;
    std::vector<std::uint8_t> blob;
    if (format == "svg") {
        std::map<std::string, std::string> style;
        for (const auto& s : o.styles) {
            const auto eq = s.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
                throw Failure{usage, "--style expects name=attribute, got '" + s + "'"};
            style[s.substr(0, eq)] = s.substr(eq + 1);
        }
        SvgOptions opts;
        opts.stroke_width = o.stroke_width;
        text = to_svg(d, style, opts);
    } else if (format == "stl") {
        if (o.path.empty())
            throw Failure{usage, "stl output is binary; give an output file with -o"};
        TubeParams params;
        params.radial_segments = o.tube_segments;
        params.radius = o.radius;
        if (!params.radius && !d.channels.count(params.radius_source))
            params.radius = 0.01;
        blob = to_stl(d, params);
    } else {
        text = to_json(d, 1);
    }

    if (o.path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(o.path, std::ios::binary);
    if (!file)
        throw Failure{io_error, "cannot open " + o.path + " for writing"};
    if (format == "stl")
        file.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
    else
        file << text;
    if (!file)
        throw Failure{io_error, "failed writing " + o.path};
}

int cmd_render(const std::string& input, const InputOptions& in, const OutputOptions& o, std::ostream& out,
               std::ostream& err) {
    EnhancedTree t = load(input, in, err);
    write_artifact(evaluate_accessories(t, {}, eval_options()), o, out);
    return ok;
}

int cmd_concat(const std::string& a, const std::string& b, const InputOptions& in, const OutputOptions& o,
               std::ostream& out, std::ostream& err) {
    EnhancedTree ta = load(a, in, err);
    EnhancedTree tb = load(b, in, err);
    EnhancedTree joined = concatenate(ta, tb, ConcatOptions{in.allow_resample});
    write_artifact(evaluate_accessories(joined, {}, eval_options()), o, out);
    return ok;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

int cmd_analyze(const std::string& input, const InputOptions& in, double tolerance, bool box, bool as_json,
                std::ostream& out, std::ostream& err) {
    EnhancedTree t = load(input, in, err);
    const TreeSpec& spec = spec_of(t);
    if (!spec.is_tree()) {
        if (as_json)
            out << nlohmann::json{{"classification", "not_a_tree"}}.dump(2) << '\n';
        else
            out << "not_a_tree\n";
        err << "error: not a tree: the spec has no branch points, so there is nothing to classify\n";
        return analysis_precondition;
    }
    const SimilarityReport sim = classify_self_similarity(spec, tolerance);
    const BoundReport bound = bound_report(spec);
    std::optional<double> dimension;
    if (box) {
        EvaluatedTree tree = evaluate_tree(spec, t.start, eval_options());
        if (tree.dim != 2)
            throw Failure{dimension_mismatch, "box dimension needs a 2D tree"};
        dimension = estimate_box_dimension(tree, default_box_scales(tree));
    }

    if (as_json) {
        nlohmann::json j;
        j["classification"] = std::string(to_string(sim.classification));
        j["rho"] = sim.rho ? nlohmann::json(*sim.rho) : nlohmann::json(nullptr);
        j["conditions"] = {{"rho", sim.rho_condition_met},
                           {"phi", sim.phi_condition_met},
                           {"equidistant", sim.equidistant_met}};
        j["period"] = sim.period;
        j["tolerance"] = sim.tolerance_used;
        j["bound"] = {{"radius", bound.radius},
                      {"evaluated_length", bound.evaluated_length},
                      {"truncated", bound.truncated},
                      {"extrapolated", bound.extrapolated}};
        if (dimension)
            j["box_dimension"] = *dimension;
        out << j.dump(2) << '\n';
        return ok;
    }
    out << to_string(sim.classification) << ", rho=" << (sim.rho ? fmt("%.4f", *sim.rho) : std::string("n/a"))
        << ", bound=" << fmt("%.4f", bound.radius) << '\n';
    out << "  conditions: rho=" << yes_no(sim.rho_condition_met) << " phi=" << yes_no(sim.phi_condition_met)
        << " equidistant=" << yes_no(sim.equidistant_met) << " period=" << sim.period << '\n';
    out << "  bound: evaluated_length=" << fmt("%.6f", bound.evaluated_length)
        << " truncated=" << yes_no(bound.truncated) << " extrapolated=" << yes_no(bound.extrapolated) << '\n';
    if (dimension)
        out << "  box_dimension=" << fmt("%.4f", *dimension) << '\n';
    return ok;
}

int cmd_compare(const std::string& a, const std::string& b, const InputOptions& in, bool as_json, std::ostream& out,
                std::ostream& err) {
    EnhancedTree ta = load(a, in, err);
    EnhancedTree tb = load(b, in, err);
    const EvaluatedTree ea = evaluate_tree(spec_of(ta), ta.start, eval_options());
    const EvaluatedTree eb = evaluate_tree(spec_of(tb), tb.start, eval_options());
    if (ea.dim != 2 || eb.dim != 2)
        throw Failure{dimension_mismatch, "compare works on 2D trees"};
    const int generations = static_cast<int>(std::min(ea.max_generation(), eb.max_generation()));
    const EquivalenceReport r = compare_canopies(ea, eb, generations);
    if (as_json) {
        nlohmann::json j{{"scale", r.scale},
                         {"rotation", r.rotation},
                         {"per_generation_distance", r.per_generation_distance},
                         {"fitted_rho", r.fitted_rho},
                         {"converged", r.converged}};
        out << j.dump(2) << '\n';
        return ok;
    }
    out << "scale=" << fmt("%.6f", r.scale) << '\n';
    out << "rotation=" << fmt("%.6f", r.rotation) << '\n';
    for (std::size_t i = 0; i < r.per_generation_distance.size(); ++i)
        out << "d[" << i + 1 << "]=" << fmt("%.6e", r.per_generation_distance[i]) << '\n';
    out << "fitted_rho=" << fmt("%.6f", r.fitted_rho) << '\n';
    out << "converged=" << yes_no(r.converged) << '\n';
    return ok;
}

constexpr std::size_t kBenchMinSegments = std::size_t{1} << 14;

int cmd_bench(const std::string& input, const InputOptions& in, int repeat, double agreement, std::ostream& out,
              std::ostream& err) {
    EnhancedTree t = load(input, in, err);
    const TreeSpec& spec = spec_of(t);
    const std::size_t segments = total_segments(spec);
    if (segments < kBenchMinSegments) {
        err << "error: refusing to benchmark: the spec evaluates " << segments << " segments, fewer than the "
            << kBenchMinSegments << " needed for a meaningful timing\n";
        return bench_refused;
    }
    if (spec.coords.dim() > 3)
        throw Failure{dimension_mismatch, "the transform-stack baseline supports 2D and 3D only"};
    const EvalOptions opts = eval_options();

    const EvaluatedTree a = evaluate_tree(spec, t.start, opts);
    const EvaluatedTree b = evaluate_via_transform_stack(spec, t.start, opts);
    double worst = 0.0;
    bool same_shape = a.nodes.size() == b.nodes.size();
    for (std::size_t i = 0; same_shape && i < a.nodes.size(); ++i) {
        if (a.nodes[i].id != b.nodes[i].id) {
            same_shape = false;
            break;
        }
        for (int c = 0; c < a.dim; ++c)
            worst = std::max(worst, std::abs(a.nodes[i].pose.position[c] - b.nodes[i].pose.position[c]));
    }
    if (!same_shape || !(worst <= agreement)) {
        err << "error: backends disagree (max node difference " << fmt("%.3e", worst) << ", "
            << (same_shape ? "same" : "different") << " node sets); no timings reported\n";
        return bench_disagreement;
    }

    using clock = std::chrono::steady_clock;
    auto time = [&](auto&& fn) {
        double best = 1e300;
        for (int r = 0; r < repeat; ++r) {
            const auto t0 = clock::now();
            const EvaluatedTree tree = fn();
            const auto t1 = clock::now();
            if (tree.nodes.empty() && !a.nodes.empty())
                throw Failure{evaluation_error, "benchmark run produced no nodes"};
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
        }
        return best;
    };
    const double td = time([&] { return evaluate_tree(spec, t.start, opts); });
    const double tt = time([&] { return evaluate_via_transform_stack(spec, t.start, opts); });

    char line[160];
    const auto seg = static_cast<double>(segments);
    out << "dim " << spec.coords.dim() << ", " << a.nodes.size() << " nodes, " << segments << " segments, best of "
        << repeat << '\n';
    std::snprintf(line, sizeof line, "%-24s %12s %12s\n", "backend", "seconds", "ns/segment");
    out << line;
    std::snprintf(line, sizeof line, "%-24s %12.6f %12.2f\n", "derivative-accumulation", td, td / seg * 1e9);
    out << line;
    std::snprintf(line, sizeof line, "%-24s %12.6f %12.2f\n", "transform-stack", tt, tt / seg * 1e9);
    out << line;
    out << "agreement: max node difference " << fmt("%.3e", worst) << " <= " << fmt("%.0e", agreement) << '\n';
    out << "ratio transform-stack/derivative-accumulation: " << fmt("%.3f", td > 0.0 ? tt / td : 0.0) << '\n';
    return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Grow, analyze and export branching curves from derivative coordinates", "dendrite"};
    app.require_subcommand(1);

    InputOptions in;
    OutputOptions o;
    std::string input;
    std::string second;
    double tolerance = 1e-6;
    bool box = false;
    bool as_json = false;
    int repeat = 5;
    double agreement = 1e-6;

    auto* render = app.add_subcommand("render", "Evaluate a program or coordinate table and export it");
    render->add_option("input", input, "Program (.ftree) or coordinate table (.csv)")->required();
    add_input_flags(*render, in);
    add_output_flags(*render, o);

    auto* analyze = app.add_subcommand("analyze", "Classify self-similarity and bound the tree");
    analyze->add_option("input", input, "Program or coordinate table")->required();
    add_input_flags(*analyze, in);
    analyze->add_option("--tolerance", tolerance, "Relative tolerance of the similarity tests")
        ->check(CLI::PositiveNumber);
    analyze->add_flag("--box-dimension", box, "Also estimate the box-counting dimension (2D)");
    analyze->add_flag("--json", as_json, "Machine-readable report");

    auto* compare = app.add_subcommand("compare", "Compare two canopies after scaling and alignment");
    compare->add_option("first", input, "First tree")->required();
    compare->add_option("second", second, "Second tree")->required();
    add_input_flags(*compare, in);
    compare->add_flag("--json", as_json, "Machine-readable report");

    auto* concat = app.add_subcommand("concat", "Concatenate two trees and export the result");
    concat->add_option("first", input, "First tree")->required();
    concat->add_option("second", second, "Second tree")->required();
    add_input_flags(*concat, in);
    add_output_flags(*concat, o);
    concat->add_flag("--allow-resample", in.allow_resample, "Resample the second tree when the steps differ");

    auto* bench = app.add_subcommand("bench", "Time derivative accumulation against the transform stack");
    bench->add_option("input", input, "Program or coordinate table")->required();
    add_input_flags(*bench, in);
    bench->add_option("--repeat", repeat, "Runs per backend (best is reported)")->check(CLI::Range(1, 1000));
    bench->add_option("--agreement", agreement, "Largest node difference accepted between the backends")
        ->check(CLI::NonNegativeNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? ok : usage;
    }

    try {
        if (*render)
            return cmd_render(input, in, o, out, err);
        if (*analyze)
            return cmd_analyze(input, in, tolerance, box, as_json, out, err);
        if (*compare)
            return cmd_compare(input, second, in, as_json, out, err);
        if (*concat)
            return cmd_concat(input, second, in, o, out, err);
        return cmd_bench(input, in, repeat, agreement, out, err);
    } catch (const Failure& f) {
        if (!f.message.empty())
            err << "error: " << f.message << '\n';
        return f.code;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << '\n';
        return io_error;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return parse_error;
    } catch (const DimensionError& e) {
        err << "error: dimension mismatch: " << e.what() << '\n';
        return dimension_mismatch;
    } catch (const TopologyError& e) {
        err << "error: topology mismatch: " << e.what() << '\n';
        return topology_mismatch;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return analysis_precondition;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return evaluation_error;
    }
}

} // namespace dendrite::cli
