#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "compograph/model.hpp"

namespace compograph {

// Indexed, immutable collection of descriptors. Indexes:
//   producers: concept -> names of services with an output satisfying it
//   consumers: concept -> names of services listing it as an input
// All name sets are lexicographically ordered.
struct RegistryLoadResult;

class Registry {
public:
    using LoadResult = RegistryLoadResult;

    static LoadResult load(const std::vector<ServiceDescriptor>& documents, Taxonomy taxonomy,
                           PropositionSet vocab);

    const std::map<std::string, ServiceDescriptor>& services() const { return services_; }
    const Taxonomy& taxonomy() const { return taxonomy_; }
    const PropositionSet& vocab() const { return vocab_; }

    bool contains(const std::string& name) const { return services_.contains(name); }

    const ServiceDescriptor& at(const std::string& name) const { return services_.at(name); }

    std::size_t size() const { return services_.size(); }

    // Services with some output o such that concept_satisfies(o, c).
    std::set<std::string> producers_of(const ConceptId& c) const {
        auto it = producers_.find(c);
        if (it == producers_.end()) return {};
        return it->second;
    }

    // Services listing c among their inputs.
    std::set<std::string> consumers_of(const ConceptId& c) const {
        auto it = consumers_.find(c);
        if (it == consumers_.end()) return {};
        return it->second;
    }

    // Copy-with-insert; the receiver is untouched.
    Registry with_service(const ServiceDescriptor& d) const {
        Registry r = *this;
        r.insert_unchecked(d);
        return r;
    }

private:
    void insert_unchecked(const ServiceDescriptor& d) {
        services_.emplace(d.name, d);
        for (const auto& o : d.outputs)
            for (const auto& anc : taxonomy_.ancestor_closure(o))
                producers_[anc].insert(d.name);
        for (const auto& i : d.inputs) consumers_[i].insert(d.name);
    }

    std::map<std::string, ServiceDescriptor> services_;
    std::map<ConceptId, std::set<std::string>> producers_;
    std::map<ConceptId, std::set<std::string>> consumers_;
    PropositionSet vocab_;
    Taxonomy taxonomy_;
};

struct RegistryLoadResult {
    std::optional<Registry> registry;
    std::vector<std::string> errors;

    bool ok() const { return registry.has_value(); }
};

inline RegistryLoadResult Registry::load(const std::vector<ServiceDescriptor>& documents,
                                         Taxonomy taxonomy, PropositionSet vocab) {
    Registry r;
    r.taxonomy_ = std::move(taxonomy);
    r.vocab_ = std::move(vocab);
    std::vector<std::string> errors;
    for (const auto& d : documents) {
        for (const auto& v : validate_descriptor(d, r.vocab_))
            errors.push_back(v.code + ": " + v.detail);
        if (r.services_.contains(d.name)) {
            errors.push_back("duplicate-name: two records named \"" + d.name + "\"");
            continue;
        }
        if (validate_descriptor(d, r.vocab_).empty()) r.insert_unchecked(d);
    }
    if (!errors.empty()) return {std::nullopt, std::move(errors)};
    return {std::move(r), {}};
}

inline std::set<std::string> producers_of(const Registry& r, const ConceptId& c) {
    return r.producers_of(c);
}

}  // namespace compograph
