#include "nl2gql/schema.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "nl2gql/error.hpp"

namespace nl2gql {

namespace {

template <typename Def>
const PropertyDef* find_in(const Def& def, std::string_view name) {
    for (const auto& p : def.properties) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

void check_properties(const std::string& owner, const std::vector<PropertyDef>& props) {
    std::set<std::string_view> seen;
    for (const auto& p : props) {
        if (p.name.empty()) throw SchemaError("empty property name in '" + owner + "'");
        if (!seen.insert(p.name).second) {
            throw SchemaError("duplicate property '" + p.name + "' in '" + owner + "'");
        }
    }
}

std::vector<PropertyDef> properties_from_json(const nlohmann::json& arr, const std::string& owner) {
    std::vector<PropertyDef> out;
    if (arr.is_null()) return out;
    if (!arr.is_array()) throw FormatError("'" + owner + "': properties must be an array");
    for (const auto& item : arr) {
        PropertyDef def;
        std::string kind;
        if (item.is_array() && (item.size() == 2 || item.size() == 3)) {
            def.name = item.at(0).get<std::string>();
            kind = item.at(1).get<std::string>();
            if (item.size() == 3) def.zh_gloss = item.at(2).get<std::string>();
        } else if (item.is_object()) {
            def.name = item.at("name").get<std::string>();
            kind = item.at("kind").get<std::string>();
            def.zh_gloss = item.value("zh", "");
        } else {
            throw FormatError("'" + owner + "': property must be [name, kind] or [name, kind, zh], got " +
                              item.dump());
        }
        auto k = parse_value_kind(kind);
        if (!k) throw FormatError("'" + owner + "': unknown value kind '" + kind + "' for " + def.name);
        def.kind = *k;
        out.push_back(std::move(def));
    }
    return out;
}

nlohmann::ordered_json properties_to_json(const std::vector<PropertyDef>& props) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : props) {
        auto item = nlohmann::ordered_json::array({p.name, std::string(to_string(p.kind))});
        if (!p.zh_gloss.empty()) item.push_back(p.zh_gloss);
        arr.push_back(std::move(item));
    }
    return arr;
}

} // namespace

const PropertyDef* NodeDef::find_property(std::string_view name) const { return find_in(*this, name); }
const PropertyDef* EdgeDef::find_property(std::string_view name) const { return find_in(*this, name); }

GraphSchema::GraphSchema(std::vector<NodeDef> nodes, std::vector<EdgeDef> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::set<std::string_view> tags;
    for (auto& n : nodes_) {
        if (n.tag.empty()) throw SchemaError("empty node tag");
        if (!tags.insert(n.tag).second) throw SchemaError("duplicate tag '" + n.tag + "'");
        if (const auto* name = n.find_property(kNameProperty)) {
            if (name->kind != ValueKind::String) {
                throw SchemaError("property 'name' of '" + n.tag + "' must be a string");
            }
        } else {
            n.properties.insert(n.properties.begin(), PropertyDef{std::string(kNameProperty), ValueKind::String, ""});
        }
        check_properties(n.tag, n.properties);
    }
    std::set<std::string_view> types;
    for (const auto& e : edges_) {
        if (e.edge_type.empty()) throw SchemaError("empty edge type");
        if (!types.insert(e.edge_type).second) throw SchemaError("duplicate edge type '" + e.edge_type + "'");
        if (!find_node(e.start_tag)) {
            throw SchemaError("edge '" + e.edge_type + "' references unknown tag '" + e.start_tag + "'");
        }
        if (!find_node(e.end_tag)) {
            throw SchemaError("edge '" + e.edge_type + "' references unknown tag '" + e.end_tag + "'");
        }
        check_properties(e.edge_type, e.properties);
    }
}

const NodeDef* GraphSchema::find_node(std::string_view tag) const {
    for (const auto& n : nodes_) {
        if (n.tag == tag) return &n;
    }
    return nullptr;
}

const EdgeDef* GraphSchema::find_edge(std::string_view edge_type) const {
    for (const auto& e : edges_) {
        if (e.edge_type == edge_type) return &e;
    }
    return nullptr;
}

GraphSchema schema_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw FormatError("schema document must be an object");
    std::vector<NodeDef> nodes;
    std::vector<EdgeDef> edges;
    try {
        for (const auto& n : doc.value("nodes", nlohmann::json::array())) {
            NodeDef def;
            def.tag = n.at("tag").get<std::string>();
            def.properties = properties_from_json(n.value("properties", nlohmann::json::array()), def.tag);
            nodes.push_back(std::move(def));
        }
        for (const auto& e : doc.value("edges", nlohmann::json::array())) {
            EdgeDef def;
            def.edge_type = e.at("edge").get<std::string>();
            def.start_tag = e.at("start_tag").get<std::string>();
            def.end_tag = e.at("end_tag").get<std::string>();
            def.properties = properties_from_json(e.value("properties", nlohmann::json::array()), def.edge_type);
            edges.push_back(std::move(def));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("malformed schema: ") + ex.what());
    }
    return GraphSchema(std::move(nodes), std::move(edges));
}

nlohmann::ordered_json schema_to_json(const GraphSchema& schema) {
    nlohmann::ordered_json doc;
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& n : schema.node_defs()) {
        nlohmann::ordered_json item;
        item["tag"] = n.tag;
        item["properties"] = properties_to_json(n.properties);
        nodes.push_back(std::move(item));
    }
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : schema.edge_defs()) {
        nlohmann::ordered_json item;
        item["edge"] = e.edge_type;
        item["start_tag"] = e.start_tag;
        item["end_tag"] = e.end_tag;
        item["properties"] = properties_to_json(e.properties);
        edges.push_back(std::move(item));
    }
    doc["nodes"] = std::move(nodes);
    doc["edges"] = std::move(edges);
    return doc;
}

GraphSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open schema file " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& ex) {
        throw FormatError(path.string() + ": " + ex.what());
    }
    return schema_from_json(doc);
}

} // namespace nl2gql
