#ifndef ASPECTRA_REPORT_HPP
#define ASPECTRA_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "aspectra/aspect.hpp"
#include "aspectra/cpa.hpp"

namespace aspectra {

/// Aspect-level matrix. Conflict cells are order-annotated: the conflict list
/// of cell (A,B) holds "apply A first" verdicts. Dependency cells are read as
/// (dependent, provider): the dependency list of cell (A,B) holds pairs where
/// A depends on B. Diagonal cells do not exist; intra-aspect rule pairs are
/// dropped during aggregation.
struct InteractionMatrix {
    struct Cell {
        std::vector<CriticalPair> conflict_pairs;
        std::vector<CriticalPair> dependency_pairs;
        bool undecided = false;
    };

    std::vector<std::string> aspects;
    std::map<PairKey, Cell> cells;

    const Cell* cell(const std::string& a, const std::string& b) const {
        auto it = cells.find({a, b});
        return it == cells.end() ? nullptr : &it->second;
    }
};

struct JoinpointTree {
    struct Node {
        Graph overlap;
        std::map<std::string, std::set<std::string>> aspects; // aspect -> rules
    };
    std::map<std::string, Node> nodes; // keyed by canonical overlap form
};

struct ReportMeta {
    std::uint64_t rule_pair_count = 0;
    std::uint64_t undecided_pairs = 0;
    std::string engine_version;
};

/// Folds rule-pair verdicts into the aspect matrix, keyed by the "{aspect}-R{k}"
/// naming convention. Throws UnparseableRuleName.
InteractionMatrix aggregate(const std::vector<CompiledAspect>& compiled,
                            const AnalysisResult& analysis);

/// Groups inter-aspect critical pairs by the canonical form of their overlap.
JoinpointTree joinpoint_tree(const AnalysisResult& analysis);

struct IncrementalResult {
    InteractionMatrix matrix;
    AnalysisResult analysis; // the newly analyzed pairs only
};

/// Extends a matrix with one new aspect by analyzing exactly the rule pairs
/// involving it; existing cells are carried over untouched.
IncrementalResult incremental_update(const InteractionMatrix& matrix,
                                     const std::vector<CompiledAspect>& compiled,
                                     const CompiledAspect& new_aspect,
                                     const AnalysisOptions& opts = {});

enum class ReportFormat { table, csv, document, dot };

ReportFormat report_format_from_string(const std::string& s);

/// Deterministic rendering. The table marks cells with "." (none), "C", "D",
/// "CD" and "?" (undecided); conflicts are shown if either order conflicts,
/// dependencies directionally (row depends on column).
std::string render(const InteractionMatrix& matrix, const JoinpointTree& tree,
                   const ReportMeta& meta, ReportFormat format);

std::uint64_t count_undecided_cells(const InteractionMatrix& matrix);

} // namespace aspectra

#endif
