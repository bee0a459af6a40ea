#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace compograph {

// Canonical form of a concept identifier: whitespace trimmed, ASCII upper case.
// Idempotent: normalize(normalize(x)) == normalize(x).
inline std::string normalize_id(std::string_view s) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

// An ontology concept name. Stored case-normalized.
struct ConceptId {
    std::string id;

    ConceptId() = default;
    explicit ConceptId(std::string_view raw) : id(normalize_id(raw)) {}

    auto operator<=>(const ConceptId&) const = default;
};

// A world-state proposition atom. Kept verbatim (only trimmed).
struct PropositionId {
    std::string id;

    PropositionId() = default;
    explicit PropositionId(std::string_view raw) : id(raw) {
        auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
        while (!id.empty() && is_space(static_cast<unsigned char>(id.front()))) id.erase(id.begin());
        while (!id.empty() && is_space(static_cast<unsigned char>(id.back()))) id.pop_back();
    }

    auto operator<=>(const PropositionId&) const = default;
};

using ConceptSet = std::set<ConceptId>;
using PropositionSet = std::set<PropositionId>;

// Concept subsumption forest/DAG: child -> parents. Rejects cycles on insert.
class Taxonomy {
public:
    Taxonomy() = default;

    void add_edge(const ConceptId& child, const ConceptId& parent) {
        if (child == parent || is_descendant(parent, child))
            throw std::invalid_argument("taxonomy cycle: " + child.id + " -> " + parent.id);
        parents_[child].insert(parent);
    }

    bool empty() const { return parents_.empty(); }

    // Reflexive-transitive: c is a descendant of itself.
    bool is_descendant(const ConceptId& child, const ConceptId& ancestor) const {
        if (child == ancestor) return true;
        auto it = parents_.find(child);
        if (it == parents_.end()) return false;
        for (const auto& p : it->second)
            if (is_descendant(p, ancestor)) return true;
        return false;
    }

    // c plus every ancestor of c.
    ConceptSet ancestor_closure(const ConceptId& c) const {
        ConceptSet out;
        collect(c, out);
        return out;
    }

    const std::map<ConceptId, ConceptSet>& edges() const { return parents_; }

private:
    void collect(const ConceptId& c, ConceptSet& out) const {
        if (!out.insert(c).second) return;
        auto it = parents_.find(c);
        if (it == parents_.end()) return;
        for (const auto& p : it->second) collect(p, out);
    }

    std::map<ConceptId, ConceptSet> parents_;
};

// have satisfies need when equal or have is below need in the taxonomy.
inline bool concept_satisfies(const ConceptId& have, const ConceptId& need, const Taxonomy& tax) {
    return have == need || tax.is_descendant(have, need);
}

}  // namespace compograph
