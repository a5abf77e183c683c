#ifndef ASPECTRA_RULE_HPP
#define ASPECTRA_RULE_HPP

#include <set>
#include <string>
#include <vector>

#include "aspectra/graph.hpp"

namespace aspectra {

/// Graph-transformation production. Element correspondence between lhs and
/// rhs is by shared ids: an id present in both sides is preserved. Every NAC
/// is a supergraph of the lhs reusing the lhs ids; NAC-only elements carry
/// fresh ids.
struct Rule {
    std::string name;
    Graph lhs;
    Graph rhs;
    std::vector<Graph> nacs;
};

/// Throws RuleError unless the rule is well formed (valid graphs, nonempty
/// name, NACs contain the lhs id-identically, preserved elements identical
/// on both sides).
void validate_rule(const Rule& rule);

struct RuleDelta {
    std::set<std::string> deleted_vertices, deleted_edges;
    std::set<std::string> created_vertices, created_edges;
    std::set<std::string> preserved_vertices, preserved_edges;

    bool deletes_nothing() const {
        return deleted_vertices.empty() && deleted_edges.empty();
    }
    bool creates_nothing() const {
        return created_vertices.empty() && created_edges.empty();
    }
};

/// Partitions lhs/rhs element ids into deleted, created, and preserved.
RuleDelta delta(const Rule& rule);

struct Match {
    Morphism embedding; // lhs into host
};

enum class MatchFailure { none, images_missing, nac_violated, dangling_violated };

/// Re-checks a previously found embedding against (a possibly evolved) host:
/// images present and unchanged, NACs still unsatisfiable, dangling condition
/// intact.
MatchFailure check_match(const Rule& rule, const Graph& host, const Morphism& m);

/// All monomorphisms of the lhs into host that admit no extension to any NAC
/// and satisfy the dangling condition. Deterministic order.
std::vector<Match> find_matches(const Rule& rule, const Graph& host);

/// DPO-style application: deletes the images of lhs-only elements, creates
/// fresh copies of rhs-only elements. Host is not mutated. Throws
/// InvalidMatch when the match does not hold on this host.
Graph apply(const Rule& rule, const Graph& host, const Match& match);

struct WeaveSkip {
    std::string rule;
    Morphism embedding;
    MatchFailure reason = MatchFailure::none;
};

struct WeaveResult {
    Graph graph;
    std::vector<std::pair<std::string, Morphism>> applied;
    std::vector<WeaveSkip> skipped;
};

/// Single-pass weaving: all matches of all rules are computed against the
/// original host (rule order, then match order) and applied sequentially;
/// matches invalidated by earlier applications are skipped and logged.
WeaveResult weave(const std::vector<Rule>& rules, const Graph& host);

} // namespace aspectra

#endif
