#include "dendrite/export/json_io.hpp"

#include "dendrite/error.hpp"

#include <json.hpp>

#include <functional>

namespace dendrite {

namespace {

using nlohmann::json;

json id_json(const BranchId& id) { return json(id.digits); }

BranchId id_from(const json& j) { return BranchId{j.get<std::vector<int>>()}; }

json points_json(const std::vector<double>& flat, std::size_t width) {
    json out = json::array();
    for (std::size_t k = 0; k + width <= flat.size(); k += width)
        out.push_back(std::vector<double>(flat.begin() + k, flat.begin() + k + width));
    return out;
}

void fill_rows(const json& rows, std::size_t width, std::size_t count, const char* what,
               const std::function<std::span<double>(std::size_t)>& slot) {
    if (!rows.is_array() || rows.size() != count)
        throw FormatError(std::string(what) + " has the wrong number of rows");
    for (std::size_t k = 0; k < count; ++k) {
        const auto row = rows[k].get<std::vector<double>>();
        if (row.size() != width)
            throw FormatError(std::string(what) + " row " + std::to_string(k) + " has the wrong width");
        auto dst = slot(k);
        std::copy(row.begin(), row.end(), dst.begin());
    }
}

} // namespace

std::string to_json(const DecoratedTree& decorated, int indent) {
    const EvaluatedTree& t = decorated.tree;
    json doc;
    doc["version"] = kJsonSchemaVersion;
    doc["dim"] = t.dim;
    doc["root"] = {{"pos", t.root.position}, {"heading", t.root.heading}, {"s", t.root_s}};
    doc["path_length"] = t.path_length;

    json nodes = json::array();
    for (const auto& n : t.nodes)
        nodes.push_back({{"id", id_json(n.id)},
                         {"pos", n.pose.position},
                         {"heading", n.pose.heading},
                         {"s", n.s},
                         {"arc", n.arc}});
    doc["nodes"] = std::move(nodes);

    json edges = json::array();
    for (const auto& e : t.edges) {
        const auto& p = e.polyline;
        edges.push_back({{"child", id_json(e.child)},
                         {"parent", id_json(e.parent)},
                         {"from_root", e.from_root},
                         {"s0", p.grid().s_min()},
                         {"ds", p.grid().delta_s()},
                         {"points", points_json(p.flat_points(), static_cast<std::size_t>(t.dim))},
                         {"headings", points_json(p.flat_headings(), static_cast<std::size_t>(t.dim - 1))},
                         {"arc", p.cum_arcs()}});
    }
    doc["edges"] = std::move(edges);

    json acc = json::object();
    for (const auto& [name, ch] : decorated.channels)
        acc[name] = {{"kind", ch.kind == AccessoryKind::derivative ? "derivative" : "absolute"},
                     {"arity", ch.arity},
                     {"edges", ch.per_edge}};
    doc["accessories"] = std::move(acc);
    return doc.dump(indent) + (indent >= 0 ? "\n" : "");
}

DecoratedTree from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (doc.at("version").get<int>() != kJsonSchemaVersion)
            throw FormatError("unsupported tree JSON version " + doc.at("version").dump());
        DecoratedTree out;
        EvaluatedTree& t = out.tree;
        t.dim = doc.at("dim").get<int>();
        if (t.dim < 2)
            throw FormatError("dim must be at least 2");
        const auto width = static_cast<std::size_t>(t.dim);
        t.root = Pose::at(doc.at("root").at("pos").get<std::vector<double>>(),
                          doc.at("root").at("heading").get<std::vector<double>>());
        t.root_s = doc.at("root").at("s").get<double>();
        t.path_length = doc.at("path_length").get<double>();

        for (const auto& n : doc.at("nodes")) {
            EvaluatedNode node;
            node.id = id_from(n.at("id"));
            node.pose = Pose::at(n.at("pos").get<std::vector<double>>(), n.at("heading").get<std::vector<double>>());
            node.s = n.at("s").get<double>();
            node.arc = n.at("arc").get<double>();
            t.nodes.push_back(std::move(node));
        }
        for (const auto& e : doc.at("edges")) {
            const auto arcs = e.at("arc").get<std::vector<double>>();
            if (arcs.size() < 2)
                throw FormatError("edge polyline needs at least two samples");
            PathPolyline poly(t.dim, SGrid::from_count(e.at("s0").get<double>(), e.at("ds").get<double>(), arcs.size()));
            fill_rows(e.at("points"), width, arcs.size(), "points", [&](std::size_t k) { return poly.point_mut(k); });
            fill_rows(e.at("headings"), width - 1, arcs.size(), "headings",
                      [&](std::size_t k) { return poly.heading_mut(k); });
            for (std::size_t k = 0; k < arcs.size(); ++k)
                poly.cum_arc_mut(k) = arcs[k];
            t.edges.push_back(EvaluatedEdge{id_from(e.at("child")), id_from(e.at("parent")),
                                            e.at("from_root").get<bool>(), std::move(poly)});
        }
        for (const auto& [name, a] : doc.at("accessories").items()) {
            Channel ch;
            const auto kind = a.at("kind").get<std::string>();
            if (kind != "derivative" && kind != "absolute")
                throw FormatError("accessory '" + name + "' has unknown kind '" + kind + "'");
            ch.kind = kind == "derivative" ? AccessoryKind::derivative : AccessoryKind::absolute;
            ch.arity = a.at("arity").get<std::size_t>();
            ch.per_edge = a.at("edges").get<std::vector<std::vector<double>>>();
            if (ch.per_edge.size() != t.edges.size())
                throw FormatError("accessory '" + name + "' does not cover every edge");
            out.channels.emplace(name, std::move(ch));
        }
        return out;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed tree JSON: ") + e.what());
    }
}

} // namespace dendrite
