#include "dendrite/export/svg.hpp"

#include "dendrite/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dendrite {

namespace {

std::string fixed(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string general(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::vector<double> edge_mean(const Channel& ch, std::size_t edge) {
    std::vector<double> mean(ch.arity, 0.0);
    const auto& v = ch.per_edge[edge];
    const std::size_t n = v.size() / ch.arity;
    if (n == 0)
        return mean;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < ch.arity; ++c)
            mean[c] += v[k * ch.arity + c];
    for (auto& m : mean)
        m /= static_cast<double>(n);
    return mean;
}

std::string attribute_value(const std::string& attr, const std::vector<double>& v) {
    if (attr == "stroke" || attr == "fill") {
        if (v.size() >= 3) {
            auto byte = [](double x) { return static_cast<int>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0)); };
            return "rgb(" + std::to_string(byte(v[0])) + "," + std::to_string(byte(v[1])) + "," +
                   std::to_string(byte(v[2])) + ")";
        }
        const int g = static_cast<int>(std::lround(std::clamp(v[0], 0.0, 1.0) * 255.0));
        return "rgb(" + std::to_string(g) + "," + std::to_string(g) + "," + std::to_string(g) + ")";
    }
    if (attr == "stroke-opacity" || attr == "opacity")
        return general(std::clamp(v[0], 0.0, 1.0));
    return general(v[0]);
}

} // namespace

std::string to_svg(const DecoratedTree& decorated, const std::map<std::string, std::string>& style_map,
                   const SvgOptions& options) {
    const EvaluatedTree& tree = decorated.tree;
    if (tree.dim != 2)
        throw DimensionError("SVG export needs a 2D tree, got " + std::to_string(tree.dim) + "D");
    for (const auto& [name, attr] : style_map)
        if (!decorated.channels.count(name))
            throw DomainError("style map names unknown channel '" + name + "' (bound to " + attr + ")");

    const double cx = tree.root.position[0];
    const double cy = tree.root.position[1];
    double radius = 0.0;
    for (const auto& e : tree.edges)
        for (std::size_t k = 0; k < e.polyline.size(); ++k) {
            const auto p = e.polyline.point(k);
            radius = std::max(radius, std::hypot(p[0] - cx, p[1] - cy));
        }
    if (radius == 0.0)
        radius = 1.0;
    const double half = radius * (1.0 + options.margin);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + fixed(cx - half) + " " +
           fixed(-cy - half) + " " + fixed(2 * half) + " " + fixed(2 * half) + "\">\n";
    out += "<g fill=\"none\" stroke=\"" + escape(options.stroke) + "\" stroke-width=\"" +
           general(options.stroke_width) + "\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";

    for (std::size_t ei = 0; ei < tree.edges.size(); ++ei) {
        const auto& e = tree.edges[ei];
        std::string d;
        std::string last;
        std::size_t emitted = 0;
        for (std::size_t k = 0; k < e.polyline.size(); ++k) {
            const auto p = e.polyline.point(k);
            std::string xy = fixed(p[0]) + " " + fixed(-p[1]);
            if (xy == last)
                continue;
            d += (emitted ? " L " : "M ") + xy;
            last = std::move(xy);
            ++emitted;
        }
        if (emitted == 1)
            d += " L " + last;
        std::string id = "b";
        for (int digit : e.child.digits)
            id += "-" + std::to_string(digit);
        out += "<path id=\"" + id + "\" d=\"" + d + "\"";
        for (const auto& [name, attr] : style_map)
            out += " " + attr + "=\"" + attribute_value(attr, edge_mean(decorated.channels.at(name), ei)) + "\"";
        out += "/>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

} // namespace dendrite
