#pragma once

#include <variant>

#include "compograph/planner.hpp"

namespace compograph {

struct PublishError {
    enum class Kind { NameCollision, UnverifiedPlan };

    Kind kind;
    std::string detail;
};

// Composite descriptor derived from a verified plan:
//   inputs        = request concepts the plan actually draws from SOURCE
//   outputs       = the request goals
//   preconditions = member preconditions minus propositions established by
//                   effects of strictly earlier stages
//   effects       = union of member effects
inline ServiceDescriptor derive_composite_descriptor(const std::string& name,
                                                     const ExecutionPlan& plan,
                                                     const Request& req, const Registry& r) {
    ServiceDescriptor d;
    d.name = name;
    d.outputs = req.goals;
    for (const auto& [key, labels] : plan.graph.edges)
        if (key.first == kSourceNode && key.second != kSinkNode)
            d.inputs.insert(labels.begin(), labels.end());

    PropositionSet established;
    for (const auto& stage : plan.stages) {
        PropositionSet stage_effects;
        for (const auto& member : stage) {
            const auto& sw = r.at(member);
            for (const auto& p : sw.preconditions)
                if (!established.contains(p)) d.preconditions.insert(p);
            stage_effects.insert(sw.effects.begin(), sw.effects.end());
            d.effects.insert(sw.effects.begin(), sw.effects.end());
        }
        established.insert(stage_effects.begin(), stage_effects.end());
    }
    return d;
}

// Persistent extend: the input registry is left untouched.
inline std::variant<Registry, PublishError> publish_composite(const Registry& r,
                                                              const std::string& name,
                                                              const ExecutionPlan& plan,
                                                              const Request& req,
                                                              const SimulationTrace& verification) {
    if (r.contains(name))
        return PublishError{PublishError::Kind::NameCollision,
                            "service \"" + name + "\" already registered"};
    if (!verification.success)
        return PublishError{PublishError::Kind::UnverifiedPlan,
                            "plan simulation did not reach the goals"};
    return r.with_service(derive_composite_descriptor(name, plan, req, r));
}

}  // namespace compograph
