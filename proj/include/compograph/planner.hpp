#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "compograph/composer.hpp"

namespace compograph {

// Stage k holds services whose in-graph predecessors all sit in stages < k.
// Services within a stage are independent and may run concurrently.
struct ExecutionPlan {
    std::vector<std::vector<std::string>> stages;  // each stage lexicographically sorted
    CompositionGraph graph;
};

inline ExecutionPlan execution_order(const CompositionGraph& g) {
    ExecutionPlan plan;
    plan.graph = g;

    std::map<std::string, int> stage;  // SOURCE = 0
    stage.emplace(kSourceNode, 0);

    // longest-path layering over the selected services; layer order of the
    // composition graph already topologically orders them
    std::vector<std::pair<int, std::string>> order;
    for (const auto& [name, layer] : g.layer_of) order.emplace_back(layer, name);
    std::sort(order.begin(), order.end());

    for (const auto& [layer, name] : order) {
        int s = 1;
        for (const auto& [key, _] : g.edges) {
            if (key.second != name) continue;
            auto it = stage.find(key.first);
            if (it == stage.end())
                throw std::logic_error("execution_order: edge from unstaged node " + key.first);
            s = std::max(s, it->second + 1);
        }
        stage.emplace(name, s);
    }
    for (const auto& [key, _] : g.edges)
        if (key.second != kSinkNode && stage.at(key.first) >= stage.at(key.second))
            throw std::logic_error("execution_order: edge violates staging (cycle?)");

    int deepest = 0;
    for (const auto& [name, s] : stage)
        if (name != kSourceNode) deepest = std::max(deepest, s);
    plan.stages.resize(static_cast<std::size_t>(deepest));
    for (const auto& [name, s] : stage)
        if (name != kSourceNode) plan.stages[static_cast<std::size_t>(s) - 1].push_back(name);
    return plan;  // map iteration keeps each stage sorted
}

enum class SimErrorKind { MissingInput, PreconditionViolation, GoalShortfall };

struct SimError {
    SimErrorKind kind;
    std::string service;  // empty for GoalShortfall
    std::string item;     // concept or proposition id; comma-joined for GoalShortfall
};

struct StageRecord {
    int stage;
    std::string service;
    ConceptSet inputs_consumed;
    ConceptSet outputs_produced;
    PropositionSet preconditions_checked;
    PropositionSet preconditions_missing;  // violations observed (fatal only in strict mode)
    PropositionSet effects_applied;
};

struct SimulationTrace {
    std::vector<StageRecord> records;
    ConceptSet final_known;
    WorldState final_world;
    bool success = false;
    std::optional<SimError> error;
};

// Replays the plan over the declarative model: inputs must be satisfied by
// concepts known before the stage; preconditions are recorded (permissive)
// or enforced (strict); outputs and effects accumulate monotonically.
inline SimulationTrace simulate(const ExecutionPlan& plan, const Request& req, const Registry& r,
                                bool strict = false) {
    const Taxonomy& tax = r.taxonomy();
    SimulationTrace trace;
    ConceptSet known = req.provided;
    PropositionSet world = req.initial_world;

    int stage_no = 0;
    for (const auto& stage : plan.stages) {
        ++stage_no;
        ConceptSet stage_outputs;
        PropositionSet stage_effects;
        for (const auto& name : stage) {
            const auto& sw = r.at(name);
            StageRecord rec;
            rec.stage = stage_no;
            rec.service = name;
            for (const auto& i : sw.inputs) {
                if (!any_satisfies(known, i, tax)) {
                    trace.error = SimError{SimErrorKind::MissingInput, name, i.id};
                    trace.final_known = known;
                    trace.final_world = WorldState{world};
                    return trace;
                }
                rec.inputs_consumed.insert(i);
            }
            rec.preconditions_checked = sw.preconditions;
            for (const auto& p : sw.preconditions)
                if (!world.contains(p)) rec.preconditions_missing.insert(p);
            if (strict && !rec.preconditions_missing.empty()) {
                trace.error = SimError{SimErrorKind::PreconditionViolation, name,
                                       rec.preconditions_missing.begin()->id};
                trace.records.push_back(std::move(rec));
                trace.final_known = known;
                trace.final_world = WorldState{world};
                return trace;
            }
            rec.outputs_produced = sw.outputs;
            rec.effects_applied = sw.effects;
            stage_outputs.insert(sw.outputs.begin(), sw.outputs.end());
            stage_effects.insert(sw.effects.begin(), sw.effects.end());
            trace.records.push_back(std::move(rec));
        }
        known.insert(stage_outputs.begin(), stage_outputs.end());
        world.insert(stage_effects.begin(), stage_effects.end());
    }

    trace.final_known = known;
    trace.final_world = WorldState{world};
    ConceptSet shortfall;
    for (const auto& g : req.goals)
        if (!any_satisfies(known, g, tax)) shortfall.insert(g);
    if (!shortfall.empty()) {
        std::string joined;
        for (const auto& c : shortfall) {
            if (!joined.empty()) joined += ",";
            joined += c.id;
        }
        trace.error = SimError{SimErrorKind::GoalShortfall, "", joined};
        return trace;
    }
    trace.success = true;
    return trace;
}

}  // namespace compograph
