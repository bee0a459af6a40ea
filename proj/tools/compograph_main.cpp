#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "compograph/io.hpp"

#ifdef _WIN32
#define COMPOGRAPH_NO_TTY 1
#else
#include <unistd.h>
#endif

namespace {

using namespace compograph;

// scripting contract: stable across releases
constexpr int kOk = 0;
constexpr int kUnsatisfiable = 1;
constexpr int kInputError = 2;
constexpr int kInternalError = 3;

bool color_enabled() {
#ifdef COMPOGRAPH_NO_TTY
    return false;
#else
    return isatty(fileno(stderr)) && std::getenv("COMPOGRAPH_NO_COLOR") == nullptr;
#endif
}

void report_error(const std::string& msg) {
    if (color_enabled())
        std::cerr << "\033[31merror:\033[0m " << msg << "\n";
    else
        std::cerr << "error: " << msg << "\n";
}

Registry load_registry_or_throw(const std::string& registry_path,
                                const std::string& taxonomy_path) {
    json doc = load_json_file(registry_path);
    RegistryDocument parsed = parse_registry_document(doc);
    if (!taxonomy_path.empty()) {
        json tax_doc = load_json_file(taxonomy_path);
        if (!tax_doc.is_array()) throw io_error(taxonomy_path + ": expected an array");
        for (const auto& e : tax_doc) {
            if (!e.is_object() || !e.contains("child") || !e.contains("parent"))
                throw io_error(taxonomy_path + ": expected {\"child\",\"parent\"} objects");
            try {
                parsed.taxonomy.add_edge(ConceptId(e.at("child").get<std::string>()),
                                         ConceptId(e.at("parent").get<std::string>()));
            } catch (const std::invalid_argument& ex) {
                throw io_error(std::string(taxonomy_path) + ": " + ex.what());
            }
        }
    }
    auto result = Registry::load(parsed.services, std::move(parsed.taxonomy),
                                 std::move(parsed.vocab));
    if (!result.ok()) {
        std::string joined;
        for (const auto& e : result.errors) joined += (joined.empty() ? "" : "; ") + e;
        throw io_error(registry_path + ": " + joined);
    }
    return std::move(*result.registry);
}

std::string join_concepts(const ConceptSet& set) {
    std::string out;
    for (const auto& c : set) {
        if (!out.empty()) out += ",";
        out += c.id;
    }
    return out;
}

std::string join_props(const PropositionSet& set) {
    std::string out;
    for (const auto& p : set) {
        if (!out.empty()) out += ",";
        out += p.id;
    }
    return out;
}

int cmd_validate(const std::string& registry_path, const std::string& taxonomy_path) {
    RegistryDocument parsed = parse_registry_document(load_json_file(registry_path));
    (void)taxonomy_path;
    auto result = Registry::load(parsed.services, std::move(parsed.taxonomy),
                                 std::move(parsed.vocab));
    if (!result.ok()) {
        for (const auto& e : result.errors) report_error(e);
        return kInputError;
    }
    std::cout << result.registry->size() << " services valid\n";
    return kOk;
}

int cmd_discover(const std::string& registry_path, const std::string& taxonomy_path,
                 const std::vector<std::string>& available, const std::vector<std::string>& missing,
                 const std::vector<std::string>& world_props) {
    Registry r = load_registry_or_throw(registry_path, taxonomy_path);
    SubRequest req;
    for (const auto& a : available) req.available.insert(ConceptId(a));
    for (const auto& m : missing) req.missing.insert(ConceptId(m));
    WorldState world;
    for (const auto& p : world_props) world.held.insert(PropositionId(p));
    if (req.missing.empty()) {
        report_error("--missing must name at least one concept");
        return kInputError;
    }
    for (const auto& m : req.missing)
        if (req.available.contains(m)) {
            report_error("degenerate request: \"" + m.id + "\" is both available and missing");
            return kInputError;
        }
    auto chosen = discover(r, req, world);
    if (!chosen) {
        std::cout << "no match\n";
        return kUnsatisfiable;
    }
    const auto& sw = r.at(*chosen);
    SimilarityScore score = similarity(req, sw, world, r.taxonomy(), r.vocab());
    std::cout << "service=" << *chosen << " degree=" << degree_name(match_degree(req, sw, r.taxonomy()))
              << " io_score=" << score.io_score << " world_score=" << score.world_score
              << " total=" << score.total << "\n";
    return kOk;
}

int compose_or_report(const Registry& r, const Request& req, ComposeResult& out,
                      double approx_threshold) {
    for (const auto& v : validate_request(req)) {
        report_error(v.code + ": " + v.detail);
        return kInputError;
    }
    out = compose(r, req);
    if (out.status == ComposeResult::Status::EmptyGoals) {
        report_error("empty-goals: request must name at least one goal");
        return kInputError;
    }
    if (out.status == ComposeResult::Status::Unsatisfiable) {
        report_error("unsatisfiable goals: " + join_concepts(out.missing_goals));
        if (approx_threshold > 0.0) {
            for (const auto& g : out.missing_goals) {
                auto candidates = producers_of(r, g, ApproxMatch{approx_threshold});
                if (!candidates.empty())
                    std::cerr << "note: approximate producers of " << g.id << " (threshold "
                              << approx_threshold << "): ";
                for (const auto& c : candidates) std::cerr << c << " ";
                if (!candidates.empty()) std::cerr << "\n";
            }
        }
        return kUnsatisfiable;
    }
    return kOk;
}

int cmd_compose(const std::string& registry_path, const std::string& request_path,
                const std::string& taxonomy_path, const std::string& dot_path,
                const std::string& json_path, bool with_plan, double approx_threshold) {
    Registry r = load_registry_or_throw(registry_path, taxonomy_path);
    Request req = load_request_file(request_path);
    ComposeResult result;
    if (int rc = compose_or_report(r, req, result, approx_threshold); rc != kOk) return rc;

    ExecutionPlan plan;
    if (with_plan) plan = execution_order(*result.graph);
    json doc = to_json(*result.graph, with_plan ? &plan : nullptr);
    if (!dot_path.empty()) write_text_file(dot_path, to_dot(*result.graph));
    if (!json_path.empty())
        write_text_file(json_path, doc.dump(2) + "\n");
    else
        std::cout << doc.dump(2) << "\n";
    return kOk;
}

int cmd_plan(const std::string& registry_path, const std::string& request_path,
             const std::string& taxonomy_path, const std::string& json_path, bool strict,
             double approx_threshold) {
    Registry r = load_registry_or_throw(registry_path, taxonomy_path);
    Request req = load_request_file(request_path);
    ComposeResult result;
    if (int rc = compose_or_report(r, req, result, approx_threshold); rc != kOk) return rc;

    ExecutionPlan plan = execution_order(*result.graph);
    SimulationTrace trace = simulate(plan, req, r, strict);

    for (const auto& rec : trace.records) {
        std::cout << "stage " << rec.stage << ": " << rec.service
                  << " inputs=" << join_concepts(rec.inputs_consumed)
                  << " outputs=" << join_concepts(rec.outputs_produced)
                  << " preconditions=" << join_props(rec.preconditions_checked);
        if (!rec.preconditions_missing.empty())
            std::cout << " missing=" << join_props(rec.preconditions_missing);
        std::cout << " effects=" << join_props(rec.effects_applied) << "\n";
    }
    std::cout << "final_known=" << join_concepts(trace.final_known) << "\n";
    std::cout << "final_world=" << join_props(trace.final_world.held) << "\n";
    std::cout << "success=" << (trace.success ? "true" : "false") << "\n";
    if (!json_path.empty()) write_text_file(json_path, to_json(trace).dump(2) + "\n");

    if (trace.success) return kOk;
    if (trace.error && trace.error->kind == SimErrorKind::PreconditionViolation) {
        report_error("precondition violation: " + trace.error->service + " requires " +
                     trace.error->item);
        return kUnsatisfiable;
    }
    // compose promised a sound plan; anything else is an internal defect
    report_error("internal: simulation of a composed plan failed");
    return kInternalError;
}

int cmd_publish(const std::string& registry_path, const std::string& request_path,
                const std::string& taxonomy_path, const std::string& name,
                const std::string& out_path, double approx_threshold) {
    Registry r = load_registry_or_throw(registry_path, taxonomy_path);
    Request req = load_request_file(request_path);
    ComposeResult result;
    if (int rc = compose_or_report(r, req, result, approx_threshold); rc != kOk) return rc;

    ExecutionPlan plan = execution_order(*result.graph);
    SimulationTrace trace = simulate(plan, req, r, /*strict=*/false);
    auto published = publish_composite(r, name, plan, req, trace);
    if (const auto* err = std::get_if<PublishError>(&published)) {
        report_error(err->detail);
        return err->kind == PublishError::Kind::NameCollision ? kInputError : kInternalError;
    }
    const Registry& extended = std::get<Registry>(published);
    write_text_file(out_path, to_json(extended).dump(2) + "\n");
    std::cout << "published " << name << " (" << extended.size() << " services)\n";
    return kOk;
}

int cmd_graph(const std::string& registry_path, const std::string& taxonomy_path,
              const std::string& dot_path) {
    Registry r = load_registry_or_throw(registry_path, taxonomy_path);
    std::string dot = to_dot(build_interaction_graph(r));
    if (!dot_path.empty())
        write_text_file(dot_path, dot);
    else
        std::cout << dot;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compograph: I/O-matched web service composition engine"};
    app.require_subcommand(1);

    std::string registry_path, request_path, taxonomy_path, dot_path, json_path, name, out_path;
    std::vector<std::string> available, missing, world_props;
    bool strict = false, with_plan = false;
    double approx_threshold = 0.0;

    auto add_registry = [&](CLI::App* sub) {
        sub->add_option("--registry", registry_path, "registry JSON file")->required();
        sub->add_option("--taxonomy", taxonomy_path, "extra taxonomy edges JSON file");
    };

    auto* validate = app.add_subcommand("validate", "validate a registry file");
    add_registry(validate);

    auto* discover_cmd = app.add_subcommand("discover", "best-scoring service for a sub-request");
    add_registry(discover_cmd);
    discover_cmd->add_option("--available", available, "concepts in hand")->delimiter(',');
    discover_cmd->add_option("--missing", missing, "concepts wanted")->delimiter(',')->required();
    discover_cmd->add_option("--world", world_props, "propositions true now")->delimiter(',');

    auto* compose_cmd = app.add_subcommand("compose", "build a composition graph for a request");
    add_registry(compose_cmd);
    compose_cmd->add_option("--request", request_path, "request JSON file")->required();
    compose_cmd->add_option("--dot", dot_path, "write graph as DOT");
    compose_cmd->add_option("--json", json_path, "write graph as JSON");
    compose_cmd->add_flag("--plan", with_plan, "include execution stages in the JSON export");
    compose_cmd->add_option("--approx-threshold", approx_threshold,
                            "enable approximate producer diagnostics on failure");

    auto* plan_cmd = app.add_subcommand("plan", "compose, order and simulate a request");
    add_registry(plan_cmd);
    plan_cmd->add_option("--request", request_path, "request JSON file")->required();
    plan_cmd->add_option("--json", json_path, "write the trace as JSON");
    plan_cmd->add_flag("--strict", strict, "abort on precondition violations");
    plan_cmd->add_option("--approx-threshold", approx_threshold,
                         "enable approximate producer diagnostics on failure");

    auto* publish_cmd = app.add_subcommand("publish", "register a verified composite service");
    add_registry(publish_cmd);
    publish_cmd->add_option("--request", request_path, "request JSON file")->required();
    publish_cmd->add_option("--name", name, "name for the composite")->required();
    publish_cmd->add_option("--out", out_path, "path for the extended registry")->required();
    publish_cmd->add_option("--approx-threshold", approx_threshold,
                            "enable approximate producer diagnostics on failure");

    auto* graph_cmd = app.add_subcommand("graph", "export the full interaction graph as DOT");
    add_registry(graph_cmd);
    graph_cmd->add_option("--dot", dot_path, "write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (validate->parsed()) return cmd_validate(registry_path, taxonomy_path);
        if (discover_cmd->parsed())
            return cmd_discover(registry_path, taxonomy_path, available, missing, world_props);
        if (compose_cmd->parsed())
            return cmd_compose(registry_path, request_path, taxonomy_path, dot_path, json_path,
                               with_plan, approx_threshold);
        if (plan_cmd->parsed())
            return cmd_plan(registry_path, request_path, taxonomy_path, json_path, strict,
                            approx_threshold);
        if (publish_cmd->parsed())
            return cmd_publish(registry_path, request_path, taxonomy_path, name, out_path,
                               approx_threshold);
        if (graph_cmd->parsed()) return cmd_graph(registry_path, taxonomy_path, dot_path);
    } catch (const io_error& ex) {
        report_error(ex.what());
        return kInputError;
    } catch (const std::logic_error& ex) {
        report_error(std::string("internal invariant violation: ") + ex.what());
        return kInternalError;
    } catch (const std::exception& ex) {
        report_error(ex.what());
        return kInputError;
    }
    return kInputError;
}
