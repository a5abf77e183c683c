#include "aspectra/statechart.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "aspectra/errors.hpp"

namespace aspectra {

std::string to_string(StateKind kind) {
    switch (kind) {
    case StateKind::simple: return "simple";
    case StateKind::composite: return "composite";
    case StateKind::initial: return "initial";
    case StateKind::final_state: return "final";
    }
    return "simple";
}

StateKind state_kind_from_string(const std::string& s) {
    if (s == "simple") return StateKind::simple;
    if (s == "composite") return StateKind::composite;
    if (s == "initial") return StateKind::initial;
    if (s == "final") return StateKind::final_state;
    throw Error("unknown state kind: " + s);
}

std::string to_string(TransitionKind kind) {
    switch (kind) {
    case TransitionKind::simple: return "simple";
    case TransitionKind::fork: return "fork";
    case TransitionKind::join: return "join";
    }
    return "simple";
}

TransitionKind transition_kind_from_string(const std::string& s) {
    if (s == "simple") return TransitionKind::simple;
    if (s == "fork") return TransitionKind::fork;
    if (s == "join") return TransitionKind::join;
    throw Error("unknown transition kind: " + s);
}

namespace {

struct StateCtx {
    const State* state = nullptr;
    const State* enclosing_orthogonal = nullptr;
    std::size_t region_index = 0;
};

struct Index {
    std::map<std::string, StateCtx> by_id;
    std::vector<Diagnostic> diags;

    void walk(const State& s, const State* orthogonal_parent, std::size_t region_idx) {
        if (by_id.count(s.id)) {
            diags.push_back({s.id, "duplicate state id"});
            return;
        }
        by_id[s.id] = {&s, orthogonal_parent, region_idx};
        if (s.kind != StateKind::composite) {
            if (!s.regions.empty())
                diags.push_back({s.id, "non-composite state must not declare regions"});
            return;
        }
        if (s.orthogonal && s.regions.size() < 2)
            diags.push_back({s.id, "orthogonal composite needs at least 2 regions"});
        if (!s.orthogonal && s.regions.size() != 1)
            diags.push_back({s.id, "non-orthogonal composite needs exactly 1 region"});
        for (std::size_t r = 0; r < s.regions.size(); ++r) {
            const Region& region = s.regions[r];
            bool initial_found = false;
            for (const State& sub : region.states) {
                if (s.orthogonal) {
                    if (sub.kind == StateKind::composite)
                        diags.push_back({sub.id, "composite substates inside orthogonal regions are unsupported"});
                    if (sub.kind == StateKind::initial)
                        diags.push_back({sub.id, "use the region 'initial' field instead of initial pseudostates"});
                    walk(sub, &s, r);
                } else {
                    if (sub.kind == StateKind::initial)
                        diags.push_back({sub.id, "use the region 'initial' field instead of initial pseudostates"});
                    walk(sub, orthogonal_parent, region_idx);
                }
                if (sub.id == region.initial) initial_found = true;
            }
            if (!initial_found)
                diags.push_back({s.id, "region initial '" + region.initial +
                                           "' is not a state of this region"});
        }
    }
};

Index build_index(const StateMachine& sm) {
    Index ix;
    for (const State& s : sm.states) ix.walk(s, nullptr, 0);
    return ix;
}

std::string join_config(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += "|";
        out += parts[i];
    }
    return out;
}

// Per-region substate id inventory of an orthogonal composite.
std::vector<std::vector<std::string>> region_inventory(const State& composite) {
    std::vector<std::vector<std::string>> regions;
    for (const Region& r : composite.regions) {
        std::vector<std::string> ids;
        for (const State& s : r.states) ids.push_back(s.id);
        regions.push_back(std::move(ids));
    }
    return regions;
}

void product(const std::vector<std::vector<std::string>>& regions, std::size_t idx,
             std::vector<std::string>& current, std::vector<std::string>& out) {
    if (idx == regions.size()) {
        out.push_back(join_config(current));
        return;
    }
    for (const std::string& s : regions[idx]) {
        current.push_back(s);
        product(regions, idx + 1, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<Diagnostic> validate(const StateMachine& sm) {
    Index ix = build_index(sm);
    std::vector<Diagnostic> diags = ix.diags;

    std::size_t initial_count = 0;
    for (const State& s : sm.states)
        if (s.kind == StateKind::initial) ++initial_count;
    if (initial_count != 1)
        diags.push_back({sm.name, "machine needs exactly one top-level initial state, found " +
                                      std::to_string(initial_count)});

    for (std::size_t t = 0; t < sm.transitions.size(); ++t) {
        const Transition& tr = sm.transitions[t];
        const std::string tid = "t" + std::to_string(t);
        auto resolve = [&](const std::string& id) -> const StateCtx* {
            auto it = ix.by_id.find(id);
            if (it == ix.by_id.end()) {
                diags.push_back({tid, "transition endpoint '" + id + "' is not a declared state"});
                return nullptr;
            }
            return &it->second;
        };
        const StateCtx* src = resolve(tr.source);
        std::vector<const StateCtx*> tgts;
        if (tr.targets.empty())
            diags.push_back({tid, "transition needs at least one target"});
        for (const std::string& g : tr.targets) tgts.push_back(resolve(g));

        if (tr.kind == TransitionKind::simple && tr.targets.size() != 1)
            diags.push_back({tid, "simple transition must have exactly one target"});
        if (tr.kind == TransitionKind::fork) {
            if (tr.targets.size() < 2)
                diags.push_back({tid, "fork needs at least two targets"});
            const State* composite = nullptr;
            std::set<std::size_t> regions_hit;
            for (const StateCtx* c : tgts) {
                if (!c) continue;
                if (!c->enclosing_orthogonal) {
                    diags.push_back({tid, "fork targets must be substates of an orthogonal composite"});
                    continue;
                }
                if (!composite) composite = c->enclosing_orthogonal;
                if (composite != c->enclosing_orthogonal)
                    diags.push_back({tid, "fork targets must lie in one orthogonal composite"});
                if (!regions_hit.insert(c->region_index).second)
                    diags.push_back({tid, "fork targets must lie in distinct regions"});
            }
        }
        if (tr.kind == TransitionKind::simple && src && !tgts.empty() && tgts[0]) {
            const StateCtx* g = tgts[0];
            if (src->enclosing_orthogonal && src->enclosing_orthogonal == g->enclosing_orthogonal &&
                src->region_index != g->region_index)
                diags.push_back({tid, "cross-region transitions inside an orthogonal composite are unsupported"});
        }
    }
    return diags;
}

std::vector<std::string> configurations(const State& composite) {
    if (composite.kind != StateKind::composite || !composite.orthogonal)
        throw Error("configurations() needs an orthogonal composite state");
    std::vector<std::string> out, current;
    product(region_inventory(composite), 0, current, out);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

struct Flattener {
    const StateMachine& sm;
    Index ix;
    Graph g;
    // orthogonal composite id -> per-region component inventory
    std::map<std::string, std::vector<std::vector<std::string>>> orth_regions;

    explicit Flattener(const StateMachine& m) : sm(m), ix(build_index(m)) {}

    static VertexKind vertex_kind(StateKind k) {
        switch (k) {
        case StateKind::initial: return VertexKind::initial;
        case StateKind::final_state: return VertexKind::final_state;
        default: return VertexKind::state;
        }
    }

    void add_state_vertices(const State& s) {
        if (s.kind != StateKind::composite) {
            g.add_vertex({s.id, vertex_kind(s.kind), {{"name", s.id}}});
            return;
        }
        if (!s.orthogonal) {
            for (const State& sub : s.regions.front().states) add_state_vertices(sub);
            return;
        }
        orth_regions[s.id] = region_inventory(s);
        for (const std::string& name : configurations(s))
            g.add_vertex({name, VertexKind::config, {{"name", name}}});
    }

    // Configs of `composite` that place `member` in its region; all other
    // regions range over `co` (their full inventory).
    std::vector<std::string> configs_containing(const State& composite,
                                                const std::string& member,
                                                std::size_t region_idx) const {
        auto regions = orth_regions.at(composite.id);
        regions[region_idx] = {member};
        std::vector<std::string> out, current;
        product(regions, 0, current, out);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::string config_of_initials(const State& composite) const {
        std::vector<std::string> parts;
        for (const Region& r : composite.regions) parts.push_back(r.initial);
        return join_config(parts);
    }

    // All flattened vertices a transition out of `id` fires from.
    std::vector<std::string> expand_source(const std::string& id) const {
        const StateCtx& ctx = ix.by_id.at(id);
        const State& s = *ctx.state;
        if (ctx.enclosing_orthogonal)
            return configs_containing(*ctx.enclosing_orthogonal, id, ctx.region_index);
        if (s.kind == StateKind::composite) {
            if (s.orthogonal) return configurations(s);
            std::vector<std::string> out;
            for (const State& sub : s.regions.front().states)
                for (const std::string& v : expand_source(sub.id)) out.push_back(v);
            std::sort(out.begin(), out.end());
            return out;
        }
        return {id};
    }

    // The single flattened vertex a transition into `id` lands on.
    std::string expand_target(const std::string& id) const {
        const StateCtx& ctx = ix.by_id.at(id);
        const State& s = *ctx.state;
        if (ctx.enclosing_orthogonal) {
            // default entry: referenced member plus the other regions' initials
            const State& o = *ctx.enclosing_orthogonal;
            std::vector<std::string> parts;
            for (std::size_t r = 0; r < o.regions.size(); ++r)
                parts.push_back(r == ctx.region_index ? id : o.regions[r].initial);
            return join_config(parts);
        }
        if (s.kind == StateKind::composite) {
            if (s.orthogonal) return config_of_initials(s);
            return expand_target(s.regions.front().initial);
        }
        return id;
    }

    void add_edges(std::size_t tindex, const Transition& tr) {
        std::vector<std::pair<std::string, std::string>> endpoints;

        if (tr.kind == TransitionKind::fork) {
            const StateCtx& first = ix.by_id.at(tr.targets.front());
            const State& o = *first.enclosing_orthogonal;
            std::vector<std::string> parts(o.regions.size());
            std::vector<bool> set(o.regions.size(), false);
            for (const std::string& t : tr.targets) {
                const StateCtx& c = ix.by_id.at(t);
                parts[c.region_index] = t;
                set[c.region_index] = true;
            }
            for (std::size_t r = 0; r < parts.size(); ++r)
                if (!set[r]) parts[r] = o.regions[r].initial;
            std::string target = join_config(parts);
            for (const std::string& src : expand_source(tr.source))
                endpoints.emplace_back(src, target);
        } else {
            const StateCtx& sctx = ix.by_id.at(tr.source);
            const StateCtx& gctx = ix.by_id.at(tr.targets.front());
            if (sctx.enclosing_orthogonal &&
                sctx.enclosing_orthogonal == gctx.enclosing_orthogonal) {
                // region-internal: co-regions stay fixed on both sides
                const State& o = *sctx.enclosing_orthogonal;
                const auto& regions = orth_regions.at(o.id);
                std::vector<std::size_t> odo(regions.size(), 0);
                for (;;) {
                    std::vector<std::string> from_parts, to_parts;
                    for (std::size_t r = 0; r < regions.size(); ++r) {
                        if (r == sctx.region_index) {
                            from_parts.push_back(tr.source);
                            to_parts.push_back(tr.targets.front());
                        } else {
                            from_parts.push_back(regions[r][odo[r]]);
                            to_parts.push_back(regions[r][odo[r]]);
                        }
                    }
                    endpoints.emplace_back(join_config(from_parts), join_config(to_parts));
                    std::size_t r = regions.size();
                    while (r-- > 0) {
                        if (r == sctx.region_index) continue;
                        if (++odo[r] < regions[r].size()) break;
                        odo[r] = 0;
                    }
                    bool wrapped = true;
                    for (std::size_t q = 0; q < regions.size(); ++q)
                        if (q != sctx.region_index && odo[q] != 0) wrapped = false;
                    if (wrapped) break;
                }
                std::sort(endpoints.begin(), endpoints.end());
            } else {
                std::string target = expand_target(tr.targets.front());
                for (const std::string& src : expand_source(tr.source))
                    endpoints.emplace_back(src, target);
            }
        }

        const std::string base = "t" + std::to_string(tindex);
        for (std::size_t k = 0; k < endpoints.size(); ++k) {
            std::string id = endpoints.size() == 1 ? base : base + "." + std::to_string(k + 1);
            g.add_edge({id, endpoints[k].first, endpoints[k].second, tr.event});
        }
    }

    Graph run(const FlattenOptions& opts) {
        for (const State& s : sm.states) add_state_vertices(s);
        for (std::size_t t = 0; t < sm.transitions.size(); ++t) {
            if (sm.transitions[t].kind == TransitionKind::join)
                throw FlattenError("join transitions are unsupported (t" + std::to_string(t) + ")");
            add_edges(t, sm.transitions[t]);
        }
        if (opts.prune_unreachable) prune();
        return std::move(g);
    }

    void prune() {
        std::string start;
        for (const auto& [id, v] : g.vertices())
            if (v.kind == VertexKind::initial) { start = id; break; }
        if (start.empty()) return;
        std::set<std::string> reached{start};
        std::deque<std::string> queue{start};
        while (!queue.empty()) {
            std::string cur = queue.front();
            queue.pop_front();
            for (const auto& [id, e] : g.edges())
                if (e.src == cur && reached.insert(e.tgt).second) queue.push_back(e.tgt);
        }
        Graph pruned;
        for (const auto& [id, v] : g.vertices())
            if (reached.count(id)) pruned.add_vertex(v);
        for (const auto& [id, e] : g.edges())
            if (reached.count(e.src) && reached.count(e.tgt)) pruned.add_edge(e);
        g = std::move(pruned);
    }
};

} // namespace

Graph flatten(const StateMachine& sm, const FlattenOptions& opts) {
    std::vector<Diagnostic> diags = validate(sm);
    if (!diags.empty()) {
        std::string msg = "invalid state machine:";
        for (const Diagnostic& d : diags) msg += "\n  [" + d.element + "] " + d.message;
        throw FlattenError(msg);
    }
    Flattener f(sm);
    return f.run(opts);
}

} // namespace aspectra
