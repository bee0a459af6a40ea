#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "compograph/planner.hpp"
#include "compograph/publish.hpp"

namespace compograph {

using json = nlohmann::json;

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                                const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) { known = true; break; }
        if (!known) throw io_error(where + ": unknown key \"" + key + "\"");
    }
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw io_error(where + ": missing key \"" + key + "\"");
    return *it;
}

inline std::vector<std::string> string_array(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw io_error(where + ": expected an array of strings");
    std::vector<std::string> out;
    for (const auto& v : arr) {
        if (!v.is_string()) throw io_error(where + ": expected an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

inline ConceptSet concept_set(const json& arr, const std::string& where) {
    ConceptSet out;
    for (const auto& s : string_array(arr, where)) out.insert(ConceptId(s));
    return out;
}

inline PropositionSet proposition_set(const json& arr, const std::string& where) {
    PropositionSet out;
    for (const auto& s : string_array(arr, where)) out.insert(PropositionId(s));
    return out;
}

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string join_labels(const ConceptSet& labels) {
    std::string out;
    for (const auto& c : labels) {
        if (!out.empty()) out += ",";
        out += c.id;
    }
    return out;
}

}  // namespace detail

struct RegistryDocument {
    std::vector<ServiceDescriptor> services;
    Taxonomy taxonomy;
    PropositionSet vocab;
};

inline RegistryDocument parse_registry_document(const json& doc) {
    if (!doc.is_object()) throw io_error("registry: expected a JSON object");
    detail::reject_unknown_keys(doc, {"propositions", "taxonomy", "services"}, "registry");

    RegistryDocument out;
    out.vocab = detail::proposition_set(detail::require(doc, "propositions", "registry"),
                                        "registry.propositions");
    if (auto it = doc.find("taxonomy"); it != doc.end()) {
        if (!it->is_array()) throw io_error("registry.taxonomy: expected an array");
        for (const auto& e : *it) {
            if (!e.is_object()) throw io_error("registry.taxonomy: expected objects");
            detail::reject_unknown_keys(e, {"child", "parent"}, "registry.taxonomy");
            ConceptId child(detail::require(e, "child", "registry.taxonomy").get<std::string>());
            ConceptId parent(detail::require(e, "parent", "registry.taxonomy").get<std::string>());
            try {
                out.taxonomy.add_edge(child, parent);
            } catch (const std::invalid_argument& ex) {
                throw io_error(std::string("registry.taxonomy: ") + ex.what());
            }
        }
    }
    const json& services = detail::require(doc, "services", "registry");
    if (!services.is_array()) throw io_error("registry.services: expected an array");
    for (const auto& s : services) {
        if (!s.is_object()) throw io_error("registry.services: expected objects");
        detail::reject_unknown_keys(s, {"name", "inputs", "outputs", "preconditions", "effects"},
                                    "service");
        ServiceDescriptor d;
        d.name = detail::require(s, "name", "service").get<std::string>();
        d.inputs = detail::concept_set(detail::require(s, "inputs", "service"), d.name + ".inputs");
        d.outputs =
            detail::concept_set(detail::require(s, "outputs", "service"), d.name + ".outputs");
        d.preconditions = detail::proposition_set(
            detail::require(s, "preconditions", "service"), d.name + ".preconditions");
        d.effects =
            detail::proposition_set(detail::require(s, "effects", "service"), d.name + ".effects");
        out.services.push_back(std::move(d));
    }
    return out;
}

inline json to_json(const Registry& r) {
    json doc = json::object();
    json props = json::array();
    for (const auto& p : r.vocab()) props.push_back(p.id);
    doc["propositions"] = std::move(props);
    json tax = json::array();
    for (const auto& [child, parents] : r.taxonomy().edges())
        for (const auto& parent : parents)
            tax.push_back({{"child", child.id}, {"parent", parent.id}});
    doc["taxonomy"] = std::move(tax);
    json services = json::array();
    for (const auto& [_, d] : r.services()) {
        json s = json::object();
        s["name"] = d.name;
        json in = json::array(), outp = json::array(), pre = json::array(), eff = json::array();
        for (const auto& c : d.inputs) in.push_back(c.id);
        for (const auto& c : d.outputs) outp.push_back(c.id);
        for (const auto& p : d.preconditions) pre.push_back(p.id);
        for (const auto& e : d.effects) eff.push_back(e.id);
        s["inputs"] = std::move(in);
        s["outputs"] = std::move(outp);
        s["preconditions"] = std::move(pre);
        s["effects"] = std::move(eff);
        services.push_back(std::move(s));
    }
    doc["services"] = std::move(services);
    return doc;
}

inline Request parse_request_document(const json& doc) {
    if (!doc.is_object()) throw io_error("request: expected a JSON object");
    detail::reject_unknown_keys(doc, {"provided", "goals", "initial_world"}, "request");
    Request req;
    req.provided =
        detail::concept_set(detail::require(doc, "provided", "request"), "request.provided");
    req.goals = detail::concept_set(detail::require(doc, "goals", "request"), "request.goals");
    if (auto it = doc.find("initial_world"); it != doc.end())
        req.initial_world = detail::proposition_set(*it, "request.initial_world");
    return req;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& ex) {
        throw io_error(path + ": " + ex.what());
    }
    return doc;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path);
    out << text;
}

// ---- exports -------------------------------------------------------------

inline json to_json(const CompositionGraph& g, const ExecutionPlan* plan = nullptr) {
    json doc = json::object();
    doc["format_version"] = 1;
    json nodes = json::array();
    nodes.push_back({{"name", kSourceNode}, {"layer", 0}});
    for (const auto& [name, layer] : g.layer_of) nodes.push_back({{"name", name}, {"layer", layer}});
    nodes.push_back({{"name", kSinkNode}, {"layer", g.sink_layer()}});
    doc["nodes"] = std::move(nodes);
    json edges = json::array();
    for (const auto& [key, labels] : g.edges) {
        json labels_json = json::array();
        for (const auto& c : labels) labels_json.push_back(c.id);
        edges.push_back({{"from", key.first}, {"to", key.second}, {"labels", std::move(labels_json)}});
    }
    doc["edges"] = std::move(edges);
    if (plan) {
        json stages = json::array();
        for (const auto& stage : plan->stages) stages.push_back(stage);
        doc["plan"] = {{"stages", std::move(stages)}};
    }
    return doc;
}

inline json to_json(const SimulationTrace& trace) {
    json doc = json::object();
    doc["format_version"] = 1;
    json records = json::array();
    auto ids = [](const auto& set) {
        json arr = json::array();
        for (const auto& x : set) arr.push_back(x.id);
        return arr;
    };
    for (const auto& rec : trace.records)
        records.push_back({{"stage", rec.stage},
                           {"service", rec.service},
                           {"inputs", ids(rec.inputs_consumed)},
                           {"outputs", ids(rec.outputs_produced)},
                           {"preconditions", ids(rec.preconditions_checked)},
                           {"preconditions_missing", ids(rec.preconditions_missing)},
                           {"effects", ids(rec.effects_applied)}});
    doc["records"] = std::move(records);
    doc["final_known"] = ids(trace.final_known);
    doc["final_world"] = ids(trace.final_world.held);
    doc["success"] = trace.success;
    return doc;
}

inline std::string to_dot(const CompositionGraph& g) {
    std::ostringstream out;
    out << "digraph composition {\n";
    out << "  \"" << kSourceNode << "\" [shape=box];\n";
    out << "  \"" << kSinkNode << "\" [shape=box];\n";
    for (const auto& [name, _] : g.layer_of) out << "  \"" << detail::dot_escape(name) << "\";\n";
    for (const auto& [key, labels] : g.edges)
        out << "  \"" << detail::dot_escape(key.first) << "\" -> \""
            << detail::dot_escape(key.second) << "\" [label=\""
            << detail::dot_escape(detail::join_labels(labels)) << "\"];\n";
    out << "}\n";
    return out.str();
}

inline std::string to_dot(const InteractionGraph& g) {
    std::ostringstream out;
    out << "digraph interaction {\n";
    for (const auto& v : g.vertices) out << "  \"" << detail::dot_escape(v) << "\";\n";
    for (const auto& e : g.edges)
        out << "  \"" << detail::dot_escape(e.from) << "\" -> \"" << detail::dot_escape(e.to)
            << "\" [label=\"" << detail::dot_escape(detail::join_labels(e.labels)) << "\", style="
            << (e.kind == RelationKind::Complete ? "solid" : "dashed") << "];\n";
    out << "}\n";
    return out.str();
}

inline Registry::LoadResult load_registry_file(const std::string& path) {
    RegistryDocument doc = parse_registry_document(load_json_file(path));
    return Registry::load(doc.services, std::move(doc.taxonomy), std::move(doc.vocab));
}

inline Request load_request_file(const std::string& path) {
    return parse_request_document(load_json_file(path));
}

}  // namespace compograph
