#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "compograph/registry.hpp"

namespace compograph {

// Preference lattice, best first: Exact > PlugIn > Subsumes > Fail.
// Numeric values double as the I/O score.
enum class MatchDegree : int { Fail = 0, Subsumes = 1, PlugIn = 2, Exact = 3 };

inline int degree_score(MatchDegree d) { return static_cast<int>(d); }

inline std::string_view degree_name(MatchDegree d) {
    switch (d) {
        case MatchDegree::Exact: return "Exact";
        case MatchDegree::PlugIn: return "PlugIn";
        case MatchDegree::Subsumes: return "Subsumes";
        case MatchDegree::Fail: return "Fail";
    }
    return "?";
}

struct SimilarityScore {
    int io_score = 0;     // {0,1,2,3}
    int world_score = 0;  // {0,1,2}
    int total = 0;        // io_score + world_score

    bool operator==(const SimilarityScore&) const = default;
};

// Residual query mid-composition: concepts in hand, outputs still wanted.
struct SubRequest {
    ConceptSet available;
    ConceptSet missing;
};

// Classic single-row Levenshtein.
inline std::size_t edit_distance(std::string_view a, std::string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t saved = row[j];
            if (a[i - 1] == b[j - 1])
                row[j] = diag;
            else
                row[j] = 1 + std::min({row[j - 1], row[j], diag});
            diag = saved;
        }
    }
    return row[b.size()];
}

inline bool syntactic_equal(std::string_view a, std::string_view b) {
    return normalize_id(a) == normalize_id(b);
}

// 1 - dist/max(|a|,|b|) over normalized forms; empty-vs-nonempty scores 0.
inline double normalized_similarity(std::string_view a, std::string_view b) {
    std::string na = normalize_id(a), nb = normalize_id(b);
    if (na == nb) return 1.0;
    std::size_t longest = std::max(na.size(), nb.size());
    if (longest == 0) return 1.0;
    return 1.0 - static_cast<double>(edit_distance(na, nb)) / static_cast<double>(longest);
}

inline bool syntactic_approx(std::string_view a, std::string_view b, double threshold = 0.8) {
    return normalized_similarity(a, b) >= threshold;
}

// First matching branch wins; all set relations are non-strict and routed
// through concept subsumption.
inline MatchDegree match_degree(const SubRequest& req, const ServiceDescriptor& sw,
                                const Taxonomy& tax) {
    bool in_mutual = covers(sw.inputs, req.available, tax) && covers(req.available, sw.inputs, tax);
    bool out_mutual = covers(sw.outputs, req.missing, tax) && covers(req.missing, sw.outputs, tax);
    if (in_mutual && out_mutual) return MatchDegree::Exact;
    if (covers(req.available, sw.inputs, tax) && covers(sw.outputs, req.missing, tax))
        return MatchDegree::PlugIn;
    bool every_output_wanted = true;
    for (const auto& o : sw.outputs) {
        bool wanted = false;
        for (const auto& m : req.missing)
            if (concept_satisfies(o, m, tax)) { wanted = true; break; }
        if (!wanted) { every_output_wanted = false; break; }
    }
    if (every_output_wanted) return MatchDegree::Subsumes;
    return MatchDegree::Fail;
}

// 2 when preconditions hold in the world and every effect atom is resolvable
// in the vocabulary; 1 when exactly one of the two; 0 otherwise. Empty sets
// pass vacuously.
inline int world_score(const ServiceDescriptor& sw, const WorldState& world,
                       const PropositionSet& vocab) {
    bool pre_ok = world.holds_all(sw.preconditions);
    bool eff_ok = true;
    for (const auto& e : sw.effects)
        if (!vocab.contains(e)) { eff_ok = false; break; }
    return (pre_ok ? 1 : 0) + (eff_ok ? 1 : 0);
}

inline SimilarityScore similarity(const SubRequest& req, const ServiceDescriptor& sw,
                                  const WorldState& world, const Taxonomy& tax,
                                  const PropositionSet& vocab) {
    SimilarityScore s;
    s.io_score = degree_score(match_degree(req, sw, tax));
    s.world_score = world_score(sw, world, vocab);
    s.total = s.io_score + s.world_score;
    return s;
}

// Lexicographic sweep keeping the first strict improvement over a running
// best initialized to 0. Every service scoring 0 means no match.
inline std::optional<std::string> discover(const Registry& r, const SubRequest& req,
                                           const WorldState& world) {
    int best = 0;
    std::optional<std::string> chosen;
    for (const auto& [name, sw] : r.services()) {
        int total = similarity(req, sw, world, r.taxonomy(), r.vocab()).total;
        if (total > best) {
            best = total;
            chosen = name;
        }
    }
    return chosen;
}

// Exact/taxonomy producer lookup with an edit-distance fallback when the
// lookup comes back empty. Off by default; enabled by CLI flag.
struct ApproxMatch {
    double threshold = 0.8;
};

inline std::set<std::string> producers_of(const Registry& r, const ConceptId& c,
                                          const ApproxMatch& approx) {
    auto exact = r.producers_of(c);
    if (!exact.empty()) return exact;
    std::set<std::string> out;
    for (const auto& [name, sw] : r.services())
        for (const auto& o : sw.outputs)
            if (syntactic_approx(o.id, c.id, approx.threshold)) { out.insert(name); break; }
    return out;
}

}  // namespace compograph
