#include "nl2gql/graph.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "nl2gql/error.hpp"

namespace nl2gql {

namespace {

template <typename Def>
PropertyMap validate_props(const Def& def, const std::string& owner, PropertyMap props) {
    PropertyMap out;
    for (auto& [key, value] : props) {
        const PropertyDef* pd = def.find_property(key);
        if (!pd) throw DataError("undeclared property '" + key + "' on '" + owner + "'");
        if (value.is_null()) continue;
        if (pd->kind == ValueKind::Float && value.is_int()) {
            value = Value(static_cast<double>(value.as_int()));
        }
        if (value.kind() != pd->kind) {
            throw DataError("property '" + key + "' of '" + owner + "' expects " +
                            std::string(to_string(pd->kind)) + ", got " + value.to_literal());
        }
        out.emplace(key, std::move(value));
    }
    return out;
}

PropertyMap props_from_json(const nlohmann::json& j) {
    PropertyMap out;
    if (j.is_null()) return out;
    if (!j.is_object()) throw DataError("props must be an object");
    for (const auto& [key, value] : j.items()) out.emplace(key, value_from_json(value));
    return out;
}

nlohmann::ordered_json props_to_json(const PropertyMap& props) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [key, value] : props) out[key] = to_json(value);
    return out;
}

template <typename Fn>
void for_each_record(std::istream& in, const std::string& source, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            fn(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& ex) {
            throw DataError(line_no, source + ": " + ex.what());
        } catch (const DataError& ex) {
            throw DataError(line_no, source + ": " + ex.what());
        } catch (const FormatError& ex) {
            throw DataError(line_no, source + ": " + ex.what());
        }
    }
}

} // namespace

Value Node::property(std::string_view prop) const {
    if (prop == kNameProperty) return Value(name);
    auto it = props.find(prop);
    return it == props.end() ? Value() : it->second;
}

Value Edge::property(std::string_view prop) const {
    auto it = props.find(prop);
    return it == props.end() ? Value() : it->second;
}

PropertyGraph::PropertyGraph(GraphSchema schema) : schema_(std::move(schema)) {
    for (const auto& n : schema_.node_defs()) by_tag_[n.tag];
}

NodeId PropertyGraph::add_node(std::string tag, std::string name, PropertyMap props) {
    const NodeDef* def = schema_.find_node(tag);
    if (!def) throw DataError("unknown tag '" + tag + "'");
    if (auto it = props.find(kNameProperty); it != props.end()) {
        if (!it->second.is_string() || it->second.as_string() != name) {
            throw DataError("props.name disagrees with node name '" + name + "'");
        }
        props.erase(it);
    }
    auto key = std::make_pair(tag, name);
    if (by_key_.count(key)) throw DataError("duplicate node " + tag + ":'" + name + "'");
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{id, tag, name, validate_props(*def, tag, std::move(props))});
    by_key_.emplace(std::move(key), id);
    by_tag_[tag].push_back(id);
    by_name_[name].push_back(id);
    out_.emplace_back();
    in_.emplace_back();
    return id;
}

EdgeId PropertyGraph::add_edge(std::string edge_type, std::string_view start_tag,
                               std::string_view start_name, std::string_view end_tag,
                               std::string_view end_name, PropertyMap props) {
    const EdgeDef* def = schema_.find_edge(edge_type);
    if (!def) throw DataError("unknown edge type '" + edge_type + "'");
    if (start_tag != def->start_tag || end_tag != def->end_tag) {
        throw DataError("edge '" + edge_type + "' must connect " + def->start_tag + " -> " +
                        def->end_tag + ", got " + std::string(start_tag) + " -> " + std::string(end_tag));
    }
    auto src = find_node(start_tag, start_name);
    if (!src) throw DataError("edge '" + edge_type + "': no node " + std::string(start_tag) + ":'" +
                              std::string(start_name) + "'");
    auto dst = find_node(end_tag, end_name);
    if (!dst) throw DataError("edge '" + edge_type + "': no node " + std::string(end_tag) + ":'" +
                              std::string(end_name) + "'");
    const auto id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(Edge{id, edge_type, *src, *dst, validate_props(*def, edge_type, std::move(props))});
    out_[*src].push_back(id);
    in_[*dst].push_back(id);
    return id;
}

std::span<const NodeId> PropertyGraph::nodes_by_tag(std::string_view tag) const {
    auto it = by_tag_.find(std::string(tag));
    if (it == by_tag_.end()) return {};
    return it->second;
}

std::span<const NodeId> PropertyGraph::node_by_name(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return {};
    return it->second;
}

std::optional<NodeId> PropertyGraph::find_node(std::string_view tag, std::string_view name) const {
    auto it = by_key_.find(std::make_pair(std::string(tag), std::string(name)));
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
}

namespace {

PropertyGraph load_graph_from(const GraphSchema& schema, std::istream& nodes, const std::string& nodes_source,
                              std::istream& edges, const std::string& edges_source) {
    PropertyGraph g(schema);
    for_each_record(nodes, nodes_source, [&](const nlohmann::json& rec) {
        g.add_node(rec.at("tag").get<std::string>(), rec.at("name").get<std::string>(),
                   props_from_json(rec.value("props", nlohmann::json())));
    });
    for_each_record(edges, edges_source, [&](const nlohmann::json& rec) {
        g.add_edge(rec.at("edge").get<std::string>(), rec.at("start_tag").get<std::string>(),
                   rec.at("start_name").get<std::string>(), rec.at("end_tag").get<std::string>(),
                   rec.at("end_name").get<std::string>(),
                   props_from_json(rec.value("props", nlohmann::json())));
    });
    return g;
}

} // namespace

PropertyGraph load_graph(const GraphSchema& schema, std::istream& nodes, std::istream& edges) {
    return load_graph_from(schema, nodes, "nodes", edges, "edges");
}

PropertyGraph load_graph(const GraphSchema& schema, const std::filesystem::path& nodes_path,
                         const std::filesystem::path& edges_path) {
    std::ifstream nodes(nodes_path);
    if (!nodes) throw FormatError("cannot open nodes file " + nodes_path.string());
    std::ifstream edges(edges_path);
    if (!edges) throw FormatError("cannot open edges file " + edges_path.string());
    return load_graph_from(schema, nodes, nodes_path.string(), edges, edges_path.string());
}

void write_nodes(const PropertyGraph& graph, std::ostream& out) {
    for (const auto& n : graph.nodes()) {
        nlohmann::ordered_json rec;
        rec["tag"] = n.tag;
        rec["name"] = n.name;
        rec["props"] = props_to_json(n.props);
        out << rec.dump() << '\n';
    }
}

void write_edges(const PropertyGraph& graph, std::ostream& out) {
    for (const auto& e : graph.edges()) {
        const Node& s = graph.node(e.src);
        const Node& d = graph.node(e.dst);
        nlohmann::ordered_json rec;
        rec["edge"] = e.edge_type;
        rec["start_name"] = s.name;
        rec["start_tag"] = s.tag;
        rec["end_name"] = d.name;
        rec["end_tag"] = d.tag;
        rec["props"] = props_to_json(e.props);
        out << rec.dump() << '\n';
    }
}

LoadSummary summarize(const PropertyGraph& graph) {
    LoadSummary s;
    s.node_count = graph.nodes().size();
    s.edge_count = graph.edges().size();
    for (const auto& n : graph.nodes()) ++s.nodes_per_tag[n.tag];
    for (const auto& e : graph.edges()) ++s.edges_per_type[e.edge_type];
    return s;
}

} // namespace nl2gql
