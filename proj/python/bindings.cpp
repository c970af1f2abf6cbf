#include "dendrite/analysis.hpp"
#include "dendrite/dsl.hpp"
#include "dendrite/export.hpp"
#include "dendrite/presets.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dendrite;

namespace {

py::dict node_dict(const EvaluatedNode& n) {
    py::dict d;
    d["id"] = n.id.digits;
    d["pos"] = n.pose.position;
    d["heading"] = n.pose.heading;
    d["s"] = n.s;
    d["arc"] = n.arc;
    return d;
}

const TreeSpec& spec_of(const EnhancedTree& t) {
    if (t.empty())
        throw DomainError("empty tree");
    return *t.spec;
}

EnhancedTree preset(bool smooth, const FractalParams& p) {
    return EnhancedTree::of(smooth ? smooth_fractal(p) : straight_fractal(p), fractal_start(p));
}

} // namespace

PYBIND11_MODULE(_dendrite, m) {
    m.doc() = "Branching curves from derivative coordinates";

    py::register_exception<Error>(m, "DendriteError", PyExc_RuntimeError);

    py::class_<FractalParams>(m, "FractalParams")
        .def(py::init<>())
        .def_readwrite("first_length", &FractalParams::first_length)
        .def_readwrite("ratio", &FractalParams::ratio)
        .def_readwrite("angle", &FractalParams::angle)
        .def_readwrite("generations", &FractalParams::generations)
        .def_readwrite("interval", &FractalParams::interval)
        .def_readwrite("samples_per_branch", &FractalParams::samples_per_branch)
        .def_readwrite("root_heading", &FractalParams::root_heading);

    py::class_<DecoratedTree>(m, "EvaluatedTree")
        .def_property_readonly("dim", [](const DecoratedTree& d) { return d.tree.dim; })
        .def_property_readonly("path_length", [](const DecoratedTree& d) { return d.tree.path_length; })
        .def_property_readonly("nodes",
                               [](const DecoratedTree& d) {
                                   py::list out;
                                   for (const auto& n : d.tree.nodes)
                                       out.append(node_dict(n));
                                   return out;
                               })
        .def_property_readonly("edge_count", [](const DecoratedTree& d) { return d.tree.edges.size(); })
        .def_property_readonly("channels",
                               [](const DecoratedTree& d) {
                                   std::vector<std::string> names;
                                   for (const auto& [name, ch] : d.channels)
                                       names.push_back(name);
                                   return names;
                               })
        .def("edge_points",
             [](const DecoratedTree& d, std::size_t i) {
                 const auto& poly = d.tree.edges.at(i).polyline;
                 std::vector<std::vector<double>> pts;
                 for (std::size_t k = 0; k < poly.size(); ++k) {
                     const auto p = poly.point(k);
                     pts.emplace_back(p.begin(), p.end());
                 }
                 return pts;
             })
        .def("to_svg", [](const DecoratedTree& d, const std::map<std::string, std::string>& style) {
            return to_svg(d, style);
        }, py::arg("style") = std::map<std::string, std::string>{})
        .def("to_json", [](const DecoratedTree& d) { return to_json(d); })
        .def("to_stl",
             [](const DecoratedTree& d, int segments, std::optional<double> radius, bool caps) {
                 TubeParams p;
                 p.radial_segments = segments;
                 p.radius = radius;
                 p.cap_ends = caps;
                 const auto blob = to_stl(d, p);
                 return py::bytes(reinterpret_cast<const char*>(blob.data()), blob.size());
             },
             py::arg("segments") = 8, py::arg("radius") = std::nullopt, py::arg("caps") = true)
        .def("project", [](const DecoratedTree& d, const std::vector<std::vector<double>>& basis) {
            return project(d, basis);
        })
        .def("box_dimension", [](const DecoratedTree& d) {
            return estimate_box_dimension(d.tree, default_box_scales(d.tree));
        });

    py::class_<EnhancedTree>(m, "Tree")
        .def_property_readonly("dim", [](const EnhancedTree& t) { return spec_of(t).coords.dim(); })
        .def_property_readonly("node_count", [](const EnhancedTree& t) { return expected_node_count(spec_of(t)); })
        .def("evaluate",
             [](const EnhancedTree& t, bool parallel) {
                 EvalOptions o;
                 o.parallel = parallel;
                 py::gil_scoped_release release;
                 return evaluate_accessories(t, {}, o);
             },
             py::arg("parallel") = false)
        .def("evaluate_transform_stack",
             [](const EnhancedTree& t) { return decorate(evaluate_via_transform_stack(spec_of(t), t.start)); })
        .def("__lshift__", [](const EnhancedTree& a, const EnhancedTree& b) { return concatenate(a, b); });

    m.def("smooth_fractal", [](const FractalParams& p) { return preset(true, p); },
          py::arg("params") = FractalParams{});
    m.def("straight_fractal", [](const FractalParams& p) { return preset(false, p); },
          py::arg("params") = FractalParams{});

    m.def(
        "compile",
        [](const std::string& source, std::optional<double> delta_s, std::optional<int> generations) {
            dsl::CompileOptions o;
            o.delta_s = delta_s;
            o.generations = generations;
            try {
                return dsl::compile_source(source, o);
            } catch (const dsl::CompileError& e) {
                std::string msg;
                for (const auto& d : e.diagnostics())
                    msg += dsl::render(d) + "\n";
                throw py::value_error(msg);
            }
        },
        py::arg("source"), py::arg("delta_s") = std::nullopt, py::arg("generations") = std::nullopt);

    m.def("format_program", [](const std::string& source) {
        auto r = dsl::parse(source);
        if (!r.ok()) {
            std::string msg;
            for (const auto& d : r.diagnostics)
                msg += dsl::render(d) + "\n";
            throw py::value_error(msg);
        }
        return dsl::format(*r.program);
    });

    m.def("classify", [](const EnhancedTree& t, double tolerance) {
        const auto r = classify_self_similarity(spec_of(t), tolerance);
        py::dict d;
        d["classification"] = std::string(to_string(r.classification));
        d["rho"] = r.rho;
        d["rho_condition"] = r.rho_condition_met;
        d["phi_condition"] = r.phi_condition_met;
        d["equidistant"] = r.equidistant_met;
        d["period"] = r.period;
        return d;
    }, py::arg("tree"), py::arg("tolerance") = 1e-6);

    m.def("bound", [](const EnhancedTree& t) {
        const auto r = bound_report(spec_of(t));
        py::dict d;
        d["radius"] = r.radius;
        d["evaluated_length"] = r.evaluated_length;
        d["truncated"] = r.truncated;
        d["extrapolated"] = r.extrapolated;
        return d;
    });

    m.def("compare", [](const EnhancedTree& a, const EnhancedTree& b, int generations) {
        const auto r = compare_canopies(spec_of(a), a.start, spec_of(b), b.start, generations);
        py::dict d;
        d["scale"] = r.scale;
        d["rotation"] = r.rotation;
        d["distances"] = r.per_generation_distance;
        d["fitted_rho"] = r.fitted_rho;
        d["converged"] = r.converged;
        return d;
    }, py::arg("a"), py::arg("b"), py::arg("generations") = 8);

    m.def("from_json", [](const std::string& text) { return from_json(text); });
}
