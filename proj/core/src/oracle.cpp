#include "aspectra/oracle.hpp"

#include "aspectra/matching.hpp"

namespace aspectra {

std::string to_string(PairClass c) {
    switch (c) {
    case PairClass::independent: return "independent";
    case PairClass::a1_depends_on_a2: return "a1_depends_on_a2";
    case PairClass::a2_depends_on_a1: return "a2_depends_on_a1";
    case PairClass::a1_disables_a2: return "a1_disables_a2";
    case PairClass::a2_disables_a1: return "a2_disables_a1";
    case PairClass::divergent_unclassified: return "divergent_unclassified";
    }
    return "independent";
}

Graph weave_aspect(const StateMachine& base, const CompiledAspect& a) {
    return weave(a.rules, flatten(base)).graph;
}

WeaveOutcome weave_pair(const StateMachine& base, const CompiledAspect& a1,
                        const CompiledAspect& a2) {
    Graph flat = flatten(base);
    WeaveOutcome w;
    w.m1 = weave(a1.rules, flat).graph;
    w.m2 = weave(a2.rules, flat).graph;
    w.m12 = weave(a2.rules, w.m1).graph;
    w.m21 = weave(a1.rules, w.m2).graph;
    return w;
}

OracleVerdict classify_pair(const StateMachine& base, const CompiledAspect& a1,
                            const CompiledAspect& a2) {
    WeaveOutcome w = weave_pair(base, a1, a2);
    OracleVerdict v;
    v.evidence.m12_iso_m21 = is_isomorphic(w.m12, w.m21).has_value();
    v.evidence.m12_iso_m2 = is_isomorphic(w.m12, w.m2).has_value();
    v.evidence.m21_iso_m1 = is_isomorphic(w.m21, w.m1).has_value();
    v.evidence.m12_iso_m1 = is_isomorphic(w.m12, w.m1).has_value();
    v.evidence.m21_iso_m2 = is_isomorphic(w.m21, w.m2).has_value();

    if (v.evidence.m12_iso_m21)
        v.classification = PairClass::independent;
    else if (v.evidence.m12_iso_m2)
        v.classification = PairClass::a1_depends_on_a2;
    else if (v.evidence.m21_iso_m1)
        v.classification = PairClass::a2_depends_on_a1;
    else if (v.evidence.m12_iso_m1)
        v.classification = PairClass::a1_disables_a2;
    else if (v.evidence.m21_iso_m2)
        v.classification = PairClass::a2_disables_a1;
    else
        v.classification = PairClass::divergent_unclassified;
    return v;
}

std::vector<Discrepancy> cross_check(const StateMachine& base,
                                     const std::vector<CompiledAspect>& compiled,
                                     const InteractionMatrix& matrix) {
    std::vector<Discrepancy> out;
    for (std::size_t i = 0; i < compiled.size(); ++i) {
        for (std::size_t j = i + 1; j < compiled.size(); ++j) {
            const CompiledAspect& a = compiled[i];
            const CompiledAspect& b = compiled[j];
            const InteractionMatrix::Cell* ab = matrix.cell(a.name, b.name);
            const InteractionMatrix::Cell* ba = matrix.cell(b.name, a.name);
            auto empty = [](const InteractionMatrix::Cell* c) {
                return !c || (c->conflict_pairs.empty() && c->dependency_pairs.empty() &&
                              !c->undecided);
            };
            if (!empty(ab) || !empty(ba)) continue; // CPA flagged it; nothing to assert
            OracleVerdict verdict = classify_pair(base, a, b);
            if (verdict.classification == PairClass::independent) continue;
            out.push_back({a.name, b.name, verdict, "no interaction reported",
                           "CPA silent but weaving orders diverge (" +
                               to_string(verdict.classification) + ")"});
        }
    }
    return out;
}

} // namespace aspectra
