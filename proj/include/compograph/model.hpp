#pragma once

#include <string>
#include <vector>

#include "compograph/ids.hpp"

namespace compograph {

// A published service: what it needs, what it yields, and the world-state
// facts it requires and establishes.
struct ServiceDescriptor {
    std::string name;
    ConceptSet inputs;
    ConceptSet outputs;
    PropositionSet preconditions;
    PropositionSet effects;

    bool operator==(const ServiceDescriptor&) const = default;
};

// A user goal: concepts in hand, concepts wanted, facts true at start.
struct Request {
    ConceptSet provided;
    ConceptSet goals;
    PropositionSet initial_world;

    bool operator==(const Request&) const = default;
};

// Propositions currently true. Grows monotonically; no retraction.
struct WorldState {
    PropositionSet held;

    bool holds_all(const PropositionSet& props) const {
        for (const auto& p : props)
            if (!held.contains(p)) return false;
        return true;
    }
};

struct Violation {
    std::string code;    // "empty-name", "empty-outputs", "unknown-proposition", "empty-goals"
    std::string detail;

    bool operator==(const Violation&) const = default;
};

inline std::vector<Violation> validate_descriptor(const ServiceDescriptor& d,
                                                  const PropositionSet& vocab) {
    std::vector<Violation> out;
    if (d.name.empty()) out.push_back({"empty-name", "service name must be non-empty"});
    if (d.outputs.empty())
        out.push_back({"empty-outputs", d.name + ": outputs must be non-empty"});
    for (const auto& p : d.preconditions)
        if (!vocab.contains(p))
            out.push_back({"unknown-proposition", d.name + ": precondition " + p.id});
    for (const auto& e : d.effects)
        if (!vocab.contains(e))
            out.push_back({"unknown-proposition", d.name + ": effect " + e.id});
    return out;
}

inline std::vector<Violation> validate_request(const Request& req) {
    std::vector<Violation> out;
    if (req.goals.empty()) out.push_back({"empty-goals", "request must name at least one goal"});
    return out;
}

inline bool any_satisfies(const ConceptSet& have, const ConceptId& need, const Taxonomy& tax) {
    if (have.contains(need)) return true;
    if (tax.empty()) return false;
    for (const auto& h : have)
        if (tax.is_descendant(h, need)) return true;
    return false;
}

// Every needed concept is satisfied by something we have.
inline bool covers(const ConceptSet& have, const ConceptSet& need, const Taxonomy& tax) {
    for (const auto& n : need)
        if (!any_satisfies(have, n, tax)) return false;
    return true;
}

}  // namespace compograph
