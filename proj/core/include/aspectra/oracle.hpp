#ifndef ASPECTRA_ORACLE_HPP
#define ASPECTRA_ORACLE_HPP

#include <string>
#include <vector>

#include "aspectra/aspect.hpp"
#include "aspectra/report.hpp"
#include "aspectra/statechart.hpp"

namespace aspectra {

/// The four weaves behind a pairwise verdict; all derived from the same
/// flattened base.
struct WeaveOutcome {
    Graph m1;  // aspect 1 alone
    Graph m2;  // aspect 2 alone
    Graph m12; // aspect 1 then aspect 2
    Graph m21; // aspect 2 then aspect 1
};

enum class PairClass {
    independent,
    a1_depends_on_a2,
    a2_depends_on_a1,
    a1_disables_a2,
    a2_disables_a1,
    divergent_unclassified,
};

std::string to_string(PairClass c);

struct OracleEvidence {
    bool m12_iso_m21 = false;
    bool m12_iso_m2 = false;
    bool m21_iso_m1 = false;
    bool m12_iso_m1 = false;
    bool m21_iso_m2 = false;
};

struct OracleVerdict {
    PairClass classification = PairClass::independent;
    OracleEvidence evidence;
};

/// Flattens the base and weaves the aspect's rules over it (single pass).
Graph weave_aspect(const StateMachine& base, const CompiledAspect& a);

WeaveOutcome weave_pair(const StateMachine& base, const CompiledAspect& a1,
                        const CompiledAspect& a2);

/// Both-orders comparison of woven models up to isomorphism. Equal results
/// mean independence; otherwise the clauses are tried in order: dependencies
/// (m12 = m2, then m21 = m1) before conflicts (m12 = m1, then m21 = m2); all
/// clause outcomes are retained as evidence.
OracleVerdict classify_pair(const StateMachine& base, const CompiledAspect& a1,
                            const CompiledAspect& a2);

struct Discrepancy {
    std::string aspect_a;
    std::string aspect_b;
    OracleVerdict oracle;
    std::string cpa_summary;
    std::string note;
};

/// For every unordered aspect pair whose matrix cells are empty in both
/// orders, the oracle must classify the pair independent. One-directional:
/// CPA reports potential interactions, so nonempty cells impose nothing.
std::vector<Discrepancy> cross_check(const StateMachine& base,
                                     const std::vector<CompiledAspect>& compiled,
                                     const InteractionMatrix& matrix);

} // namespace aspectra

#endif
