#ifndef ASPECTRA_CPA_HPP
#define ASPECTRA_CPA_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aspectra/rule.hpp"

namespace aspectra {

enum class InteractionKind {
    conflict_delete_use,
    conflict_produce_forbid,
    dependency_produce_use,
    dependency_delete_forbid,
};

std::string to_string(InteractionKind kind);
InteractionKind interaction_kind_from_string(const std::string& s);

bool is_conflict(InteractionKind kind);

struct Witness {
    std::set<std::string> vertices;
    std::set<std::string> edges;

    bool empty() const { return vertices.empty() && edges.empty(); }
    bool operator==(const Witness&) const = default;
};

/// A minimal common graph on which applying `first` disables or enables
/// `second`, together with the witnessing elements. The embeddings map from:
///   delete_use         lhs(first), lhs(second)
///   produce_forbid     rhs(first), nacs(second)[nac_index]
///   produce_use        rhs(first), lhs(second)
///   delete_forbid      lhs(first), nacs(second)[nac_index]
struct CriticalPair {
    std::string first;
    std::string second;
    InteractionKind kind = InteractionKind::conflict_delete_use;
    Graph overlap;
    Witness witness;
    Morphism first_embedding;
    Morphism second_embedding;
    int nac_index = -1;
};

struct PairVerdict {
    std::string first;
    std::string second;
    std::vector<CriticalPair> conflicts;
    std::vector<CriticalPair> dependencies;
    bool undecided = false; // overlap cap hit; findings may be incomplete

    bool silent() const { return conflicts.empty() && dependencies.empty() && !undecided; }
};

/// Minimal critical pairs where applying p1 disables p2: delete-use and
/// produce-forbid.
std::vector<CriticalPair> conflicts(const Rule& p1, const Rule& p2, std::size_t cap);

/// Minimal critical pairs where applying p1 enables p2: produce-use and
/// delete-forbid.
std::vector<CriticalPair> dependencies(const Rule& p1, const Rule& p2, std::size_t cap);

constexpr std::size_t kDefaultOverlapCap = 100000;

struct AnalysisOptions {
    std::size_t cap = kDefaultOverlapCap;
    unsigned jobs = 1; // 0 = hardware concurrency
};

using PairKey = std::pair<std::string, std::string>;

struct AnalysisResult {
    std::map<PairKey, PairVerdict> verdicts;
    std::uint64_t pairs_analyzed = 0;
};

/// Pairwise verdicts over every ordered pair of distinct rules. Independent
/// of any base model. Per-pair cap overruns become `undecided` markers.
AnalysisResult analyze_rules(const std::vector<Rule>& rules,
                             const AnalysisOptions& opts = {});

/// Verdicts for an explicit pair list (indices into `rules`); the building
/// block shared by full and incremental analysis.
AnalysisResult analyze_rule_pairs(const std::vector<Rule>& rules,
                                  const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                  const AnalysisOptions& opts = {});

} // namespace aspectra

#endif
