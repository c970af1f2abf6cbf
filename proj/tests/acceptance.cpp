// Acceptance checks: one PASS/FAIL line per criterion, exit status = failures.
// Every expected value is computed here from first principles (closed forms,
// independent geometry), not read back from the library under test.

#include "dendrite/analysis.hpp"
#include "dendrite/cli.hpp"
#include "dendrite/csv.hpp"
#include "dendrite/dsl.hpp"
#include "dendrite/export.hpp"
#include "dendrite/presets.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace dendrite;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = DENDRITE_SOURCE_DIR;
constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
        }
    }
    void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string num(double v, const char* f = "%.3g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

EnhancedTree compile_file(const fs::path& p, const dsl::CompileOptions& o = {}) {
    return dsl::compile_source(read_text_file(p), o);
}

// --- 1 ------------------------------------------------------------------------

Outcome riemann_convergence() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    // Semicircle of radius 2/pi: from the origin heading east it ends at (0, 4/pi).
    auto endpoint_error = [](double ds) {
        const SGrid g(0.0, 2.0, ds);
        DerivativeCoords c(g, std::vector<double>(g.count(), 1.0), {std::vector<double>(g.count(), pi / 2)});
        const PathPolyline p = integrate_path(c, Pose::origin(2));
        const auto e = p.point(p.size() - 1);
        return std::hypot(e[0] - 0.0, e[1] - 4.0 / pi);
    };
    const double e1 = endpoint_error(1e-4);
    const double e2 = endpoint_error(5e-5);
    const double elapsed = seconds_since(t0);
    out.require(e1 < 1e-3, "error " + num(e1) + " < 1e-3");
    // First order: halving the step halves the error (1e-3 slack for rounding).
    out.require(e2 <= 0.5 * e1 * (1.0 + 1e-3), "halving ratio " + num(e1 / e2, "%.4f") + " >= 2");
    out.require(elapsed < 1.0, "runtime " + num(elapsed) + " s < 1 s");
    out.note("err(1e-4)=" + num(e1) + " err(5e-5)=" + num(e2) + " ratio=" + num(e1 / e2, "%.4f"));
    return out;
}

// --- 2 ------------------------------------------------------------------------

Outcome round_trip() {
    Outcome out;
    const double ds = 1e-3;
    const SGrid g(0.0, 1.0, ds);
    struct Curve {
        const char* name;
        std::function<std::vector<double>(double)> at;
    };
    const Curve curves[] = {
        {"line", [](double s) { return std::vector<double>{0.3 + 2.0 * s, -1.0 + 0.5 * s}; }},
        {"circle", [](double s) { return std::vector<double>{std::cos(2.0 * s), std::sin(2.0 * s)}; }},
        {"parabola", [](double s) { return std::vector<double>{s, s * s - 0.25}; }},
    };
    for (const auto& c : curves) {
        std::vector<std::vector<double>> samples;
        for (std::size_t k = 0; k < g.count(); ++k)
            samples.push_back(c.at(g.at(k)));
        const DerivedPath d = derive_coords(samples, g, 2);
        const PathPolyline p = integrate_path(d.coords, d.start);
        double sq = 0.0;
        for (std::size_t k = 0; k < g.count(); ++k) {
            const auto q = p.point(k);
            sq += std::pow(q[0] - samples[k][0], 2) + std::pow(q[1] - samples[k][1], 2);
        }
        const double rms = std::sqrt(sq / static_cast<double>(g.count()));
        out.require(rms < 1e-3, std::string(c.name) + " rms " + num(rms));
        out.note(std::string(c.name) + " rms=" + num(rms));
    }
    return out;
}

// --- 3 ------------------------------------------------------------------------

Outcome oracle_equivalence() {
    Outcome out;
    const FractalParams p;
    for (int straight = 0; straight < 2; ++straight) {
        const TreeSpec spec = straight ? straight_fractal(p) : smooth_fractal(p);
        const EvaluatedTree a = evaluate_tree(spec, fractal_start(p));
        const EvaluatedTree b = evaluate_via_transform_stack(spec, fractal_start(p));
        const char* name = straight ? "straight" : "smooth";
        // 2 + 4 + ... + 2^8
        out.require(a.nodes.size() == 510 && b.nodes.size() == 510, std::string(name) + " has 510 nodes");
        double worst = 0.0;
        for (std::size_t i = 0; i < std::min(a.nodes.size(), b.nodes.size()); ++i) {
            out.require(a.nodes[i].id == b.nodes[i].id, std::string(name) + " node order");
            for (int c = 0; c < 2; ++c)
                worst = std::max(worst, std::abs(a.nodes[i].pose.position[c] - b.nodes[i].pose.position[c]));
        }
        out.require(worst <= 1e-6, std::string(name) + " max diff " + num(worst));
        out.note(std::string(name) + " max diff=" + num(worst));
    }
    return out;
}

// --- 4 ------------------------------------------------------------------------

Outcome continuity_and_symmetry() {
    Outcome out;
    const FractalParams p;
    for (int straight = 0; straight < 2; ++straight) {
        const TreeSpec spec = straight ? straight_fractal(p) : smooth_fractal(p);
        const Pose start = fractal_start(p);
        const EvaluatedTree t = evaluate_tree(spec, start);
        const std::string name = straight ? "straight" : "smooth";

        double gap = 0.0;
        for (const auto& e : t.edges) {
            const auto first = e.polyline.point(0);
            std::span<const double> parent = e.from_root ? t.fork_origin() : t.find(e.parent)->position();
            for (int c = 0; c < 2; ++c)
                gap = std::max(gap, std::abs(first[c] - parent[c]));
        }
        out.require(gap <= 1e-12, name + " continuity gap " + num(gap));

        // Reflect about the line through the root along the root heading.
        const double ux = std::cos(start.heading[0]);
        const double uy = std::sin(start.heading[0]);
        double worst = 0.0;
        for (std::size_t k = 1; k <= 8; ++k) {
            std::vector<std::array<double, 2>> pts;
            std::vector<std::array<double, 2>> mirrored;
            for (const auto& n : t.nodes) {
                if (n.id.generation() != k)
                    continue;
                const double x = n.pose.position[0] - start.position[0];
                const double y = n.pose.position[1] - start.position[1];
                pts.push_back({x, y});
                const double along = x * ux + y * uy;
                mirrored.push_back({2 * along * ux - x, 2 * along * uy - y});
            }
            // One-to-one: each mirrored node claims a distinct original.
            std::vector<bool> used(pts.size(), false);
            for (const auto& q : mirrored) {
                double best = 1e300;
                std::size_t at = 0;
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    const double dist = std::max(std::abs(q[0] - pts[i][0]), std::abs(q[1] - pts[i][1]));
                    if (!used[i] && dist < best) {
                        best = dist;
                        at = i;
                    }
                }
                used[at] = true;
                worst = std::max(worst, best);
            }
            out.require(pts.size() == (std::size_t{1} << k), name + " generation " + std::to_string(k) + " size");
        }
        out.require(worst <= 1e-9, name + " mirror mismatch " + num(worst));
        out.note(name + " gap=" + num(gap) + " mirror=" + num(worst));
    }
    return out;
}

// --- 5 ------------------------------------------------------------------------

Outcome bounding_radius_check() {
    Outcome out;
    const FractalParams p; // first branch 1, ratio 2/3
    const double expected = p.first_length / (1.0 - p.ratio);
    for (int straight = 0; straight < 2; ++straight) {
        const TreeSpec spec = straight ? straight_fractal(p) : smooth_fractal(p);
        const BoundReport b = bound_report(spec);
        const EvaluatedTree t = evaluate_tree(spec, fractal_start(p));
        double far = 0.0;
        for (const auto& e : t.edges)
            for (std::size_t k = 0; k < e.polyline.size(); ++k) {
                const auto q = e.polyline.point(k);
                far = std::max(far, std::hypot(q[0] - t.root.position[0], q[1] - t.root.position[1]));
            }
        const std::string name = straight ? "straight" : "smooth";
        out.require(std::abs(b.radius - expected) <= 1e-6, name + " bound " + num(b.radius, "%.9f"));
        out.require(b.extrapolated && b.truncated, name + " bound labelled extrapolated");
        out.require(far <= b.radius, name + " farthest point " + num(far, "%.6f") + " within bound");
        out.note(name + " bound=" + num(b.radius, "%.9f") + " farthest=" + num(far, "%.6f"));
    }
    return out;
}

// --- 6 ------------------------------------------------------------------------

Outcome classification() {
    Outcome out;
    const FractalParams p;
    const TreeSpec exact = smooth_fractal(p);
    const SimilarityReport r = classify_self_similarity(exact);
    out.require(r.classification == Classification::exact_fractal, "smooth is exact_fractal");
    out.require(r.rho && std::abs(*r.rho - 2.0 / 3.0) <= 1e-9, "rho = 2/3");
    out.note("rho=" + num(r.rho.value_or(-1), "%.12f"));

    const SimilarityReport rs = classify_self_similarity(straight_fractal(p));
    out.require(rs.classification == Classification::exact_fractal, "straight is exact_fractal");

    // Bend branch interval [3, 4) a little more than the others.
    const auto& g = exact.coords.grid();
    std::vector<std::vector<double>> ang = exact.coords.angular_all();
    for (std::size_t k = 0; k < g.count(); ++k)
        if (g.at(k) >= 3.0 - 1e-12 && g.at(k) < 4.0 - 1e-12)
            ang[0][k] += 1e-3;
    TreeSpec bent = exact;
    bent.coords = DerivativeCoords(g, exact.coords.radial(), ang);
    const SimilarityReport rb = classify_self_similarity(bent);
    out.require(rb.classification == Classification::quasi_fractal,
                "perturbed is quasi_fractal (got " + std::string(to_string(rb.classification)) + ")");

    TreeSpec irregular = exact;
    irregular.branch_sets = {BranchPointSet({0.0, 0.75, 1.875, 2.375, 3.75, 4.125, 5.5}, g)};
    const SimilarityReport ri = classify_self_similarity(irregular);
    out.require(ri.classification == Classification::non_fractal,
                "irregular is non_fractal (got " + std::string(to_string(ri.classification)) + ")");
    return out;
}

// --- 7 ------------------------------------------------------------------------

Outcome canopy_equivalence() {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    auto report = [](std::size_t samples) {
        FractalParams p;
        p.samples_per_branch = samples;
        const EvaluatedTree a = evaluate_tree(smooth_fractal(p), fractal_start(p));
        const EvaluatedTree b = evaluate_tree(straight_fractal(p), fractal_start(p));
        return compare_canopies(a, b, 8);
    };
    const EquivalenceReport fine = report(256);
    const EquivalenceReport finer = report(1024);
    const auto& d = fine.per_generation_distance;
    out.require(d.size() == 8, "eight generations compared");
    if (d.size() == 8) {
        std::string ratios;
        for (std::size_t i = 1; i < 8; ++i) {
            const double expected = std::pow(2.0 / 3.0, static_cast<double>(i));
            const double got = d[i] / d[0];
            out.require(std::abs(got / expected - 1.0) <= 0.10, "d" + std::to_string(i + 1) + "/d1");
            ratios += (i > 1 ? "," : "") + num(got / expected, "%.4f");
        }
        const double disc = std::abs(d[7] - finer.per_generation_distance[7]);
        out.require(disc < 0.1 * d[7], "discretisation " + num(disc) + " < 0.1*d8");
        out.note("(d_i/d_1)/(2/3)^(i-1)=[" + ratios + "] disc(d8)=" + num(disc) + " d8=" + num(d[7]));
    }
    const double elapsed = seconds_since(t0);
    out.require(elapsed < 10.0, "runtime " + num(elapsed) + " s < 10 s");
    out.note("runtime=" + num(elapsed) + "s");
    return out;
}

// --- 8 ------------------------------------------------------------------------

Outcome concatenation_continuity() {
    Outcome out;
    const EnhancedTree hybrid = compile_file(kSource / "programs" / "golden_koch_h.ftree");
    const DecoratedTree d = evaluate_accessories(hybrid);
    out.require(hybrid.junctions.size() == 1, "one junction");
    if (hybrid.junctions.size() != 1)
        return out;
    const double js = hybrid.junctions[0].s;
    const double alpha = -1.0 / (2.0 * std::cos(144.0 * pi / 180.0));
    const double join = std::pow(alpha, 4);
    const double ds = 1.0 / 64.0;

    // Independent primitive of the Koch part's shade rate along any path.
    double koch_end = 0.0;
    for (int k = 0; k < 4 * 64; ++k)
        koch_end += 0.25 * std::pow(alpha, k * ds) * ds;

    const Channel& shade = d.channels.at("shade");
    const Channel& color = d.channels.at("color");
    double worst_jump = 0.0;
    double worst_start = 0.0;
    std::size_t crossings = 0;
    bool step_kept = true;
    for (std::size_t ei = 0; ei < d.tree.edges.size(); ++ei) {
        const auto& e = d.tree.edges[ei];
        const SGrid& g = e.polyline.grid();
        if (std::abs(g.s_min() - js) > 1e-9)
            continue;
        ++crossings;
        const auto* parent = d.tree.find(e.parent);
        std::size_t pi_edge = 0;
        while (d.tree.edges[pi_edge].child != parent->id)
            ++pi_edge;
        const std::size_t last = d.tree.edges[pi_edge].polyline.size() - 1;
        // Primitive on both sides of the seam.
        worst_jump = std::max(worst_jump, std::abs(shade.at(ei, 0) - shade.at(pi_edge, last)));
        worst_start = std::max(worst_start, std::abs(shade.at(ei, 0) - koch_end));
        // First step after the seam follows the second part's rate.
        const double expected_next = koch_end + 0.25 * join * ds;
        worst_start = std::max(worst_start, std::abs(shade.at(ei, 1) - expected_next));
        // Absolute colour: Koch value before the seam, H value after, nothing in between.
        const double before[3] = {0.1, 0.4, 0.1};
        const double after[3] = {0.6, 0.2, 0.1};
        for (int c = 0; c < 3; ++c) {
            step_kept &= color.at(pi_edge, last - 1, c) == before[c];
            step_kept &= color.at(ei, 1, c) == after[c];
        }
    }
    out.require(crossings == 32, "32 edges start at the junction (got " + std::to_string(crossings) + ")");
    out.require(worst_jump <= 1e-9, "shade primitive jump " + num(worst_jump));
    out.require(worst_start <= 1e-9, "shade continues from the Koch primitive (" + num(worst_start) + ")");
    out.require(step_kept, "colour step kept unsmoothed");
    out.note("junction s=" + num(js, "%.4f") + " shade jump=" + num(worst_jump) +
             " primitive error=" + num(worst_start));
    return out;
}

// --- 9 ------------------------------------------------------------------------

EvaluatedTree hand_built(const std::vector<std::vector<std::array<double, 2>>>& lines) {
    EvaluatedTree t;
    t.dim = 2;
    t.root = Pose::origin(2);
    int digit = 0;
    for (const auto& line : lines) {
        PathPolyline poly(2, SGrid::from_count(0.0, 1.0, line.size()));
        for (std::size_t k = 0; k < line.size(); ++k) {
            poly.point_mut(k)[0] = line[k][0];
            poly.point_mut(k)[1] = line[k][1];
        }
        t.edges.push_back(EvaluatedEdge{BranchId{{digit++}}, BranchId{}, true, std::move(poly)});
    }
    return t;
}

Outcome box_dimension() {
    Outcome out;
    const EvaluatedTree segment = hand_built({{{0.0, 0.0}, {1.0, 0.0}}});
    const double d1 = estimate_box_dimension(segment, default_box_scales(segment));

    // 1024 horizontal strokes through the unit square, closer than the finest box.
    std::vector<std::vector<std::array<double, 2>>> strokes;
    for (int i = 0; i < 1024; ++i) {
        const double y = (i + 0.5) / 1024.0;
        strokes.push_back({{0.0, y}, {1.0, y}});
    }
    const EvaluatedTree square = hand_built(strokes);
    const double d2 = estimate_box_dimension(square, default_box_scales(square));

    const FractalParams p;
    const EvaluatedTree tree = evaluate_tree(smooth_fractal(p), fractal_start(p));
    const double dt = estimate_box_dimension(tree, default_box_scales(tree));

    out.require(std::abs(d1 - 1.0) <= 0.1, "segment " + num(d1, "%.4f"));
    out.require(std::abs(d2 - 2.0) <= 0.1, "square " + num(d2, "%.4f"));
    out.require(dt > 1.1 && dt < 2.0, "tree " + num(dt, "%.4f") + " in (1.1, 2.0)");
    out.note("segment=" + num(d1, "%.4f") + " square=" + num(d2, "%.4f") + " tree=" + num(dt, "%.4f"));
    return out;
}

// --- 10 -----------------------------------------------------------------------

Outcome dsl_checks() {
    Outcome out;
    std::size_t programs = 0;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(kSource / "programs"))
        if (entry.path().extension() == ".ftree")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        const std::string text = read_text_file(f);
        const auto first = dsl::parse(text);
        out.require(first.ok(), f.filename().string() + " parses");
        if (!first.ok())
            continue;
        const std::string once = dsl::format(*first.program);
        const auto second = dsl::parse(once);
        out.require(second.ok() && dsl::same_program(*first.program, *second.program),
                    f.filename().string() + " parse.format.parse");
        if (second.ok())
            out.require(dsl::format(*second.program) == once, f.filename().string() + " format fixed point");
        ++programs;
    }
    out.require(programs >= 6, "at least six shipped programs");

    const EnhancedTree smooth = compile_file(kSource / "programs" / "smooth_pi3.ftree");
    const SimilarityReport r = classify_self_similarity(*smooth.spec);
    out.require(r.classification == Classification::exact_fractal && r.rho &&
                    std::abs(*r.rho - 2.0 / 3.0) <= 1e-9,
                "compiled smooth program is exact with rho 2/3");

    std::size_t fixtures = 0;
    for (const auto& entry : fs::directory_iterator(kSource / "tests" / "fixtures")) {
        if (entry.path().extension() != ".ftree")
            continue;
        ++fixtures;
        const std::string text = read_text_file(entry.path());
        int line = 0, column = 0;
        std::sscanf(text.c_str(), "# expect: %d:%d", &line, &column);
        std::vector<dsl::Diagnostic> diags;
        try {
            dsl::compile_source(text);
        } catch (const dsl::CompileError& e) {
            diags = e.diagnostics();
        }
        const std::string name = entry.path().filename().string();
        out.require(!diags.empty() && diags[0].severity == dsl::Severity::error, name + " is rejected");
        if (!diags.empty())
            out.require(diags[0].line == line && diags[0].column == column,
                        name + " at " + std::to_string(line) + ":" + std::to_string(column) + " (got " +
                            std::to_string(diags[0].line) + ":" + std::to_string(diags[0].column) + ")");
    }
    out.require(fixtures >= 10, "at least ten invalid fixtures");
    out.note(std::to_string(programs) + " programs round-trip, " + std::to_string(fixtures) +
             " invalid fixtures positioned");
    return out;
}

// --- 11 -----------------------------------------------------------------------

Outcome export_bit_exactness() {
    Outcome out;
    const std::string golden_svg = read_text_file(kSource / "tests" / "golden" / "smooth_pi3.svg");
    const EnhancedTree smooth = compile_file(kSource / "programs" / "smooth_pi3.ftree");
    const std::string svg1 = to_svg(evaluate_accessories(smooth));
    const std::string svg2 = to_svg(evaluate_accessories(smooth));
    out.require(svg1 == svg2, "svg deterministic");
    out.require(svg1 == golden_svg, "svg matches golden");

    const std::string golden_stl = read_text_file(kSource / "tests" / "golden" / "tree3d_g3.stl");
    dsl::CompileOptions o;
    o.generations = 3;
    const DecoratedTree solid = evaluate_accessories(compile_file(kSource / "programs" / "tree3d.ftree", o));
    const auto blob = to_stl(solid);
    out.require(blob == to_stl(solid), "stl deterministic");
    out.require(std::string(blob.begin(), blob.end()) == golden_stl, "stl matches golden");

    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i)
        n |= static_cast<std::uint32_t>(blob[80 + i]) << (8 * i);
    out.require(blob.size() == 84 + 50 * static_cast<std::size_t>(n), "stl length 84 + 50N");
    std::size_t formula = 0;
    for (const auto& e : solid.tree.edges)
        formula += (e.polyline.size() - 1) * 8 * 2 + 2 * (8 - 2);
    out.require(n == formula, "triangle count " + std::to_string(n) + " = " + std::to_string(formula));
    double worst = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        float v[3];
        for (int c = 0; c < 3; ++c) {
            std::uint32_t bits = 0;
            for (int i = 0; i < 4; ++i)
                bits |= static_cast<std::uint32_t>(blob[84 + 50 * t + 4 * c + i]) << (8 * i);
            v[c] = std::bit_cast<float>(bits);
        }
        worst = std::max(worst, std::abs(std::sqrt(double(v[0]) * v[0] + double(v[1]) * v[1] + double(v[2]) * v[2]) - 1.0));
    }
    out.require(worst <= 1e-6, "normals unit (" + num(worst) + ")");
    out.note("svg " + std::to_string(svg1.size()) + " bytes, stl " + std::to_string(n) + " triangles, |n|-1 <= " +
             num(worst));
    return out;
}

// --- 12 -----------------------------------------------------------------------

Outcome bench_integrity() {
    Outcome out;
    const std::string smooth = (kSource / "programs" / "smooth_pi3.ftree").string();
    auto run = [](std::vector<std::string> args, std::string& text) {
        std::ostringstream o, e;
        const int code = cli::run(args, o, e);
        text = o.str() + e.str();
        return code;
    };
    std::string text;
    int code = run({"bench", smooth, "--repeat", "1"}, text);
    out.require(code == cli::ok, "agreeing spec benchmarks (exit " + std::to_string(code) + ")");
    out.require(text.find("agreement:") != std::string::npos && text.find("ratio") != std::string::npos,
                "agreement and ratio reported");

    // With a zero tolerance the backends' rounding differences count as disagreement.
    code = run({"bench", smooth, "--repeat", "1", "--agreement", "0"}, text);
    out.require(code == cli::bench_disagreement, "disagreement aborts (exit " + std::to_string(code) + ")");
    out.require(text.find("ns/segment") == std::string::npos, "no timings after disagreement");

    code = run({"bench", smooth, "--generations", "3"}, text);
    out.require(code == cli::bench_refused, "small spec refused (exit " + std::to_string(code) + ")");
    out.require(text.find("ns/segment") == std::string::npos, "no timings for a small spec");

    const std::string solid = (kSource / "programs" / "tree3d.ftree").string();
    code = run({"bench", solid, "--generations", "9", "--repeat", "1"}, text);
    out.require(code == cli::ok, "3D spec benchmarks (exit " + std::to_string(code) + ")");
    out.note("gate verified on 2D and 3D specs");
    return out;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*fn)();
    };
    const Criterion criteria[] = {
        {"riemann convergence", riemann_convergence},
        {"coordinate round trip", round_trip},
        {"transform-stack oracle equivalence", oracle_equivalence},
        {"continuity and mirror symmetry", continuity_and_symmetry},
        {"bounding radius", bounding_radius_check},
        {"self-similarity classification", classification},
        {"canopy equivalence", canopy_equivalence},
        {"concatenation continuity", concatenation_continuity},
        {"box-counting dimension", box_dimension},
        {"dsl round trip and diagnostics", dsl_checks},
        {"export bit-exactness", export_bit_exactness},
        {"benchmark integrity", bench_integrity},
    };
    int failures = 0;
    int index = 1;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s  %2d %-36s %s\n", o.pass ? "PASS" : "FAIL", index++, c.name, o.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
    return failures;
}
