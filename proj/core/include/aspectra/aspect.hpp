#ifndef ASPECTRA_ASPECT_HPP
#define ASPECTRA_ASPECT_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aspectra/rule.hpp"
#include "aspectra/statechart.hpp"

namespace aspectra {

/// Reference to one substate of an orthogonal composite. The full region
/// structure is declared inside the pattern so that compilation never
/// consults a base model.
struct MemberRef {
    std::vector<std::vector<std::string>> regions;
    std::string state;

    bool operator==(const MemberRef&) const = default;
};

/// Reference to one full configuration (one substate per region).
struct ConfigRef {
    std::vector<std::vector<std::string>> regions;
    std::vector<std::string> states;

    bool operator==(const ConfigRef&) const = default;
};

struct PatternState {
    std::string id;
    VertexKind kind = VertexKind::state;
    std::optional<MemberRef> member;
    std::optional<ConfigRef> config;
};

struct PatternEdge {
    std::string id; // optional in files; defaulted to t{index}
    std::string source;
    std::string target;
    std::string event;
};

struct Pattern {
    std::vector<PatternState> states;
    std::vector<PatternEdge> transitions;
    std::vector<std::vector<std::size_t>> xor_groups; // indices into transitions
    std::set<std::string> exposed;
};

struct CreateState {
    std::string id;
    std::string name; // defaults to id
    VertexKind kind = VertexKind::state;
};

struct CreateTransition {
    std::string source;
    std::vector<std::string> targets;
    std::string event;
    TransitionKind kind = TransitionKind::simple;
};

struct Advice {
    std::vector<CreateState> create_states;
    std::vector<CreateTransition> create_transitions;
    std::vector<std::string> deletes; // exposed pattern refs
};

struct Aspect {
    std::string name;
    Pattern pointcut;
    Advice advice;
};

struct Concern {
    std::string name;
    std::vector<Aspect> aspects;
};

struct CompiledAspect {
    std::string name;
    std::vector<Rule> rules; // named "{aspect}-R{k}", k from 1
};

struct CompileOptions {
    std::size_t max_variants = 1024;
};

/// Compiles one aspect into its GT rule set: the cartesian expansion over
/// xor alternatives and over the configurations containing each referenced
/// composite member, with one NAC per forbidden alternative instance.
/// Variants whose NACs merely duplicate their own lhs (an alternative whose
/// config realizes both branches at once) are unsatisfiable and dropped.
CompiledAspect compile(const Aspect& aspect, const CompileOptions& opts = {});

std::vector<CompiledAspect> compile_all(const std::vector<Concern>& concerns,
                                        const CompileOptions& opts = {});

/// Splits "A1-R2" into ("A1", 2). Throws UnparseableRuleName.
std::pair<std::string, int> parse_rule_name(const std::string& rule_name);

} // namespace aspectra

#endif
