#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compograph/matcher.hpp"

namespace compograph {

inline constexpr const char* kSourceNode = "SOURCE";
inline constexpr const char* kSinkNode = "SINK";

enum class RelationKind { Complete, Partial };

struct Relation {
    RelationKind kind;
    ConceptSet labels;  // inputs of the target matched by outputs of the source

    bool operator==(const Relation&) const = default;
};

// M = inputs of b matched by some output of a. Complete when M covers all of
// b's inputs, Partial when a non-empty proper subset, nothing when empty.
inline std::optional<Relation> relation(const ServiceDescriptor& a, const ServiceDescriptor& b,
                                        const Taxonomy& tax) {
    ConceptSet matched;
    for (const auto& i : b.inputs)
        if (any_satisfies(a.outputs, i, tax)) matched.insert(i);
    if (matched.empty()) return std::nullopt;
    if (matched.size() == b.inputs.size()) return Relation{RelationKind::Complete, matched};
    return Relation{RelationKind::Partial, matched};
}

struct InteractionGraph {
    struct Edge {
        std::string from;
        std::string to;
        RelationKind kind;
        ConceptSet labels;

        bool operator==(const Edge&) const = default;
    };

    std::vector<std::string> vertices;  // sorted
    std::vector<Edge> edges;            // sorted by (from, to)

    const Edge* find_edge(const std::string& from, const std::string& to) const {
        for (const auto& e : edges)
            if (e.from == from && e.to == to) return &e;
        return nullptr;
    }
};

inline InteractionGraph build_interaction_graph(const Registry& r) {
    InteractionGraph g;
    for (const auto& [name, _] : r.services()) g.vertices.push_back(name);
    for (const auto& [an, a] : r.services()) {
        for (const auto& [bn, b] : r.services()) {
            if (an == bn) continue;
            if (auto rel = relation(a, b, r.taxonomy()))
                g.edges.push_back({an, bn, rel->kind, std::move(rel->labels)});
        }
    }
    return g;  // maps iterate sorted, so vertices/edges are already ordered
}

// Forward-chaining saturation result. Layer k fires every not-yet-fired
// service whose inputs are all satisfied by what was known after layer k-1
// and which contributes at least one new concept.
struct Closure {
    std::vector<std::set<std::string>> layers;  // layers[k-1] = services fired at layer k
    std::map<std::string, int> layer_of;
    std::vector<ConceptSet> known_at;       // known_at[k] = concepts known after layer k
    std::vector<PropositionSet> world_at;   // world_at[k] = propositions true after layer k
    bool goals_reached = false;

    const ConceptSet& known() const { return known_at.back(); }
};

inline Closure reachable_closure(const Registry& r, const Request& req) {
    const Taxonomy& tax = r.taxonomy();
    Closure cl;

    ConceptSet known = req.provided;
    PropositionSet world = req.initial_world;

    // satisfied = known plus every ancestor of a known concept; an input i is
    // coverable iff i is in this set.
    ConceptSet satisfied;
    for (const auto& c : known)
        satisfied.merge(tax.ancestor_closure(c));

    // countdown of unsatisfied inputs per service; ready once it hits zero
    std::map<std::string, std::size_t> pending;
    std::set<std::string> ready;
    for (const auto& [name, sw] : r.services()) {
        std::size_t missing = 0;
        for (const auto& i : sw.inputs)
            if (!satisfied.contains(i)) ++missing;
        if (missing == 0)
            ready.insert(name);
        else
            pending.emplace(name, missing);
    }

    auto goals_done = [&] {
        for (const auto& g : req.goals)
            if (!satisfied.contains(g)) return false;
        return true;
    };

    cl.known_at.push_back(known);
    cl.world_at.push_back(world);
    cl.goals_reached = goals_done();

    std::set<std::string> fired;
    while (!cl.goals_reached) {
        std::set<std::string> firing;
        for (const auto& name : ready) {
            const auto& sw = r.at(name);
            bool contributes = false;
            for (const auto& o : sw.outputs)
                if (!known.contains(o)) { contributes = true; break; }
            if (contributes) firing.insert(name);
        }
        if (firing.empty()) break;  // fixpoint

        ConceptSet newly;
        for (const auto& name : firing) {
            ready.erase(name);
            fired.insert(name);
            const auto& sw = r.at(name);
            for (const auto& o : sw.outputs)
                if (known.insert(o).second) newly.insert(o);
            for (const auto& e : sw.effects) world.insert(e);
        }
        // services whose outputs are all already known can never contribute
        for (auto it = ready.begin(); it != ready.end();) {
            bool contributes = false;
            for (const auto& o : r.at(*it).outputs)
                if (!known.contains(o)) { contributes = true; break; }
            it = contributes ? std::next(it) : ready.erase(it);
        }
        for (const auto& c : newly) {
            for (const auto& need : tax.ancestor_closure(c)) {
                if (!satisfied.insert(need).second) continue;
                for (const auto& consumer : r.consumers_of(need)) {
                    auto it = pending.find(consumer);
                    if (it == pending.end()) continue;
                    if (--it->second == 0) {
                        ready.insert(consumer);
                        pending.erase(it);
                    }
                }
            }
        }

        int layer = static_cast<int>(cl.layers.size()) + 1;
        for (const auto& name : firing) cl.layer_of.emplace(name, layer);
        cl.layers.push_back(std::move(firing));
        cl.known_at.push_back(known);
        cl.world_at.push_back(world);
        cl.goals_reached = goals_done();
    }
    return cl;
}

// Pruned solution subgraph. Edge labels are the target's input concepts the
// edge delivers; SOURCE is layer 0, SINK one past the deepest service.
struct CompositionGraph {
    std::map<std::string, int> layer_of;  // selected services only
    std::map<std::pair<std::string, std::string>, ConceptSet> edges;

    int sink_layer() const {
        int deepest = 0;
        for (const auto& [_, l] : layer_of) deepest = std::max(deepest, l);
        return deepest + 1;
    }
};

struct ComposeResult {
    enum class Status { Ok, Unsatisfiable, EmptyGoals };

    Status status = Status::Ok;
    std::optional<CompositionGraph> graph;
    ConceptSet missing_goals;  // set when Unsatisfiable
    Closure closure;

    bool ok() const { return status == Status::Ok; }
};

// Saturate forward, then prune backward from the goals. Producer choice per
// needed concept: earliest layer, then highest similarity against the
// sub-request at that layer, then lexicographic name.
inline ComposeResult compose(const Registry& r, const Request& req) {
    ComposeResult res;
    if (req.goals.empty()) {
        res.status = ComposeResult::Status::EmptyGoals;
        return res;
    }
    const Taxonomy& tax = r.taxonomy();
    res.closure = reachable_closure(r, req);
    const Closure& cl = res.closure;

    if (!cl.goals_reached) {
        res.status = ComposeResult::Status::Unsatisfiable;
        ConceptSet satisfied;
        for (const auto& c : cl.known())
            satisfied.merge(tax.ancestor_closure(c));
        for (const auto& g : req.goals)
            if (!satisfied.contains(g)) res.missing_goals.insert(g);
        return res;
    }

    // fired-producer index: concept -> (layer, name), via output ancestor closure
    std::map<ConceptId, std::vector<std::pair<int, std::string>>> producer_index;
    for (const auto& [name, layer] : cl.layer_of)
        for (const auto& o : r.at(name).outputs)
            for (const auto& anc : tax.ancestor_closure(o))
                producer_index[anc].emplace_back(layer, name);

    auto goals_missing_at = [&](std::size_t k) {
        ConceptSet missing;
        for (const auto& g : req.goals)
            if (!any_satisfies(cl.known_at[k], g, tax)) missing.insert(g);
        return missing;
    };

    auto pick_producer = [&](const ConceptId& c) -> std::string {
        const auto& candidates = producer_index.at(c);
        int best_layer = candidates.front().first;
        std::size_t at_best = 0;
        std::string only;
        for (const auto& [layer, name] : candidates) {
            if (layer < best_layer) { best_layer = layer; at_best = 0; }
            if (layer == best_layer) { ++at_best; only = name; }
        }
        if (at_best == 1) return only;
        SubRequest sub{cl.known_at[best_layer - 1], goals_missing_at(best_layer - 1)};
        WorldState world{cl.world_at[best_layer - 1]};
        int best_total = -1;
        std::string best_name;
        for (const auto& [layer, name] : candidates) {
            if (layer != best_layer) continue;
            int total = similarity(sub, r.at(name), world, tax, r.vocab()).total;
            if (total > best_total || (total == best_total && name < best_name)) {
                best_total = total;
                best_name = name;
            }
        }
        return best_name;
    };

    CompositionGraph g;
    std::map<ConceptId, std::string> chosen;  // memoized producer per concept

    // returns the node supplying concept c, selecting producers recursively
    auto supply = [&](auto&& self, const ConceptId& c) -> std::string {
        if (auto it = chosen.find(c); it != chosen.end()) return it->second;
        if (any_satisfies(req.provided, c, tax)) {
            chosen.emplace(c, kSourceNode);
            return kSourceNode;
        }
        std::string producer = pick_producer(c);
        chosen.emplace(c, producer);
        if (g.layer_of.emplace(producer, cl.layer_of.at(producer)).second) {
            const auto& inputs = r.at(producer).inputs;
            if (inputs.empty())
                g.edges[{kSourceNode, producer}];  // unlabeled anchor for source services
            for (const auto& i : inputs)
                g.edges[{self(self, i), producer}].insert(i);
        }
        return producer;
    };

    for (const auto& goal : req.goals)
        g.edges[{supply(supply, goal), kSinkNode}].insert(goal);

    res.graph = std::move(g);
    return res;
}

}  // namespace compograph
