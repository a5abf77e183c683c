#ifndef ASPECTRA_STATECHART_HPP
#define ASPECTRA_STATECHART_HPP

#include <string>
#include <vector>

#include "aspectra/graph.hpp"

namespace aspectra {

enum class StateKind { simple, composite, initial, final_state };
enum class TransitionKind { simple, fork, join };

std::string to_string(StateKind kind);
StateKind state_kind_from_string(const std::string& s);
std::string to_string(TransitionKind kind);
TransitionKind transition_kind_from_string(const std::string& s);

struct Region;

struct State {
    std::string id;
    StateKind kind = StateKind::simple;
    bool orthogonal = false;        // composite only
    std::vector<Region> regions;    // composite only
};

struct Region {
    std::string initial;            // default substate of this region
    std::vector<State> states;
};

struct Transition {
    std::string source;
    std::vector<std::string> targets; // length 1 unless fork
    std::string event;
    TransitionKind kind = TransitionKind::simple;
};

struct StateMachine {
    std::string name;
    std::vector<State> states;
    std::vector<Transition> transitions;
};

struct Diagnostic {
    std::string element;
    std::string message;
};

/// Structural well-formedness: unique state ids, resolvable transition
/// endpoints, region arity per composite kind, one top-level initial state,
/// fork targets in distinct regions of one orthogonal composite.
std::vector<Diagnostic> validate(const StateMachine& sm);

/// Cross product of per-region substate ids of an orthogonal composite,
/// rendered "top|...|bottom" in region declaration order, sorted.
std::vector<std::string> configurations(const State& composite);

struct FlattenOptions {
    bool prune_unreachable = false; // drop vertices unreachable from the initial
};

/// Flattening into the graph vocabulary: non-orthogonal composites are erased
/// (incoming transitions redirect to region initials, outgoing replicate from
/// every substate); orthogonal composites become one config vertex per
/// configuration; forks become single edges into the combined config vertex.
/// Throws FlattenError on invalid machines and on join transitions.
Graph flatten(const StateMachine& sm, const FlattenOptions& opts = {});

} // namespace aspectra

#endif
