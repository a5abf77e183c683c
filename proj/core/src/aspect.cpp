#include "aspectra/aspect.hpp"

#include <algorithm>
#include <map>

namespace aspectra {

namespace {

std::string structure_key(const std::vector<std::vector<std::string>>& regions) {
    std::string key;
    for (const auto& r : regions) {
        key += "[";
        for (const auto& s : r) key += s + ",";
        key += "]";
    }
    return key;
}

std::string join_config(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += "|";
        out += parts[i];
    }
    return out;
}

// region index of a member inside its declared structure
std::size_t member_region(const MemberRef& m, const std::string& context) {
    std::optional<std::size_t> found;
    for (std::size_t r = 0; r < m.regions.size(); ++r)
        if (std::find(m.regions[r].begin(), m.regions[r].end(), m.state) !=
            m.regions[r].end()) {
            if (found)
                throw CompileError(context + ": member '" + m.state +
                                   "' appears in more than one declared region");
            found = r;
        }
    if (!found)
        throw CompileError(context + ": member '" + m.state +
                           "' is not in any declared region");
    return *found;
}

// One orthogonal-composite instance shared by the refs that declared the
// same region structure; pins come from member/config refs, the remaining
// regions are free expansion axes.
struct Instance {
    std::vector<std::vector<std::string>> regions;
    std::map<std::size_t, std::string> pinned;
    std::vector<std::string> ref_ids; // pattern states resolving to this vertex
    std::string vertex_id;

    std::vector<std::size_t> free_regions() const {
        std::vector<std::size_t> out;
        for (std::size_t r = 0; r < regions.size(); ++r)
            if (!pinned.count(r)) out.push_back(r);
        return out;
    }

    std::string config_name(const std::map<std::size_t, std::string>& choices) const {
        std::vector<std::string> parts;
        for (std::size_t r = 0; r < regions.size(); ++r) {
            auto p = pinned.find(r);
            if (p != pinned.end())
                parts.push_back(p->second);
            else
                parts.push_back(choices.at(r));
        }
        return join_config(parts);
    }
};

struct Compiler {
    const Aspect& aspect;
    const CompileOptions& opts;

    std::map<std::string, const PatternState*> states_by_id;
    std::set<std::string> edge_ids;
    std::set<std::string> created_ids;
    std::vector<std::string> edge_id_of; // per transition index

    explicit Compiler(const Aspect& a, const CompileOptions& o) : aspect(a), opts(o) {
        validate();
    }

    const std::string& ctx() const { return aspect.name; }

    void validate() {
        const Pattern& pc = aspect.pointcut;
        for (const PatternState& s : pc.states) {
            if (s.id.empty()) throw CompileError(ctx() + ": pattern state with empty id");
            if (!states_by_id.emplace(s.id, &s).second)
                throw CompileError(ctx() + ": duplicate pattern state id '" + s.id + "'");
            if (s.member && s.config)
                throw CompileError(ctx() + ": state '" + s.id +
                                   "' cannot be both member and config reference");
            if (s.member) member_region(*s.member, ctx());
            if (s.config) {
                if (s.config->states.size() != s.config->regions.size())
                    throw CompileError(ctx() + ": config reference '" + s.id +
                                       "' needs one state per region");
                for (std::size_t r = 0; r < s.config->states.size(); ++r)
                    if (std::find(s.config->regions[r].begin(), s.config->regions[r].end(),
                                  s.config->states[r]) == s.config->regions[r].end())
                        throw CompileError(ctx() + ": config reference '" + s.id +
                                           "' component '" + s.config->states[r] +
                                           "' is not in region " + std::to_string(r));
            }
        }
        for (std::size_t i = 0; i < pc.transitions.size(); ++i) {
            const PatternEdge& e = pc.transitions[i];
            std::string id = e.id.empty() ? "t" + std::to_string(i) : e.id;
            edge_id_of.push_back(id);
            if (!edge_ids.insert(id).second)
                throw CompileError(ctx() + ": duplicate pattern edge id '" + id + "'");
            if (!states_by_id.count(e.source))
                throw CompileError(ctx() + ": edge '" + id + "' source '" + e.source +
                                   "' is not a pattern state");
            if (!states_by_id.count(e.target))
                throw CompileError(ctx() + ": edge '" + id + "' target '" + e.target +
                                   "' is not a pattern state");
        }
        std::set<std::size_t> grouped;
        for (const auto& group : pc.xor_groups) {
            if (group.size() < 2)
                throw CompileError(ctx() + ": xor group needs at least 2 alternatives");
            for (std::size_t idx : group) {
                if (idx >= pc.transitions.size())
                    throw CompileError(ctx() + ": xor group references edge index " +
                                       std::to_string(idx) + " out of range");
                if (!grouped.insert(idx).second)
                    throw CompileError(ctx() + ": edge index " + std::to_string(idx) +
                                       " appears in more than one xor group");
            }
        }
        for (const std::string& ref : pc.exposed)
            if (!states_by_id.count(ref) && !edge_ids.count(ref))
                throw CompileError(ctx() + ": exposed reference '" + ref +
                                   "' does not resolve");

        for (const CreateState& cs : aspect.advice.create_states) {
            if (cs.id.empty()) throw CompileError(ctx() + ": created state with empty id");
            if (states_by_id.count(cs.id) || !created_ids.insert(cs.id).second)
                throw CompileError(ctx() + ": created state id '" + cs.id + "' collides");
        }
        for (const CreateTransition& ct : aspect.advice.create_transitions) {
            check_advice_ref(ct.source);
            if (ct.targets.empty())
                throw CompileError(ctx() + ": created transition needs a target");
            if (ct.kind != TransitionKind::fork && ct.targets.size() != 1)
                throw CompileError(ctx() + ": non-fork created transition needs exactly one target");
            for (const std::string& t : ct.targets) check_advice_ref(t);
            if (ct.kind == TransitionKind::fork) {
                for (const std::string& t : ct.targets) {
                    auto it = states_by_id.find(t);
                    if (it == states_by_id.end() || !it->second->member)
                        throw CompileError(ctx() + ": fork targets must be composite member references");
                }
            }
        }
        for (const std::string& d : aspect.advice.deletes)
            if (!aspect.pointcut.exposed.count(d))
                throw CompileError(ctx() + ": delete of '" + d + "' which is not exposed");
    }

    void check_advice_ref(const std::string& ref) {
        if (created_ids.count(ref)) return;
        if (states_by_id.count(ref)) {
            if (!aspect.pointcut.exposed.count(ref))
                throw CompileError(ctx() + ": advice references '" + ref +
                                   "' which is not exposed");
            return;
        }
        throw CompileError(ctx() + ": advice reference '" + ref + "' does not resolve");
    }

    // --- expansion -------------------------------------------------------

    struct Variant {
        std::vector<std::size_t> chosen;         // per xor group: edge index
        std::set<std::size_t> live_edges;        // indices into transitions
        std::set<std::string> live_states;       // pattern state ids
        std::vector<Instance> instances;
        std::map<std::string, std::size_t> instance_of; // state id -> instance
    };

    std::vector<std::size_t> edges_referencing(const std::string& sid) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < aspect.pointcut.transitions.size(); ++i)
            if (aspect.pointcut.transitions[i].source == sid ||
                aspect.pointcut.transitions[i].target == sid)
                out.push_back(i);
        return out;
    }

    std::vector<Variant> xor_selections() const {
        const Pattern& pc = aspect.pointcut;
        std::vector<Variant> out;
        std::vector<std::size_t> odo(pc.xor_groups.size(), 0);
        for (;;) {
            Variant v;
            std::set<std::size_t> excluded;
            for (std::size_t gi = 0; gi < pc.xor_groups.size(); ++gi) {
                v.chosen.push_back(pc.xor_groups[gi][odo[gi]]);
                for (std::size_t idx : pc.xor_groups[gi])
                    if (idx != pc.xor_groups[gi][odo[gi]]) excluded.insert(idx);
            }
            for (std::size_t i = 0; i < pc.transitions.size(); ++i)
                if (!excluded.count(i)) v.live_edges.insert(i);
            for (const PatternState& s : pc.states) {
                auto refs = edges_referencing(s.id);
                bool live = refs.empty();
                for (std::size_t e : refs)
                    if (v.live_edges.count(e)) live = true;
                if (live) v.live_states.insert(s.id);
            }
            out.push_back(std::move(v));

            if (pc.xor_groups.empty()) break;
            std::size_t gi = pc.xor_groups.size();
            while (gi-- > 0) {
                if (++odo[gi] < pc.xor_groups[gi].size()) break;
                odo[gi] = 0;
            }
            bool wrapped = true;
            for (std::size_t q = 0; q < odo.size(); ++q)
                if (odo[q] != 0) wrapped = false;
            if (wrapped) break;
        }
        return out;
    }

    // Groups the live member/config refs by declared structure; every ref of
    // an instance resolves to the same config vertex.
    void build_instances(Variant& v) const {
        std::map<std::string, std::size_t> by_key;
        for (const PatternState& s : aspect.pointcut.states) {
            if (!v.live_states.count(s.id)) continue;
            if (!s.member && !s.config) continue;
            const auto& regions = s.member ? s.member->regions : s.config->regions;
            std::string key = structure_key(regions);
            auto it = by_key.find(key);
            if (it == by_key.end()) {
                by_key.emplace(key, v.instances.size());
                v.instances.push_back(Instance{regions, {}, {}, ""});
                it = by_key.find(key);
            }
            Instance& inst = v.instances[it->second];
            inst.ref_ids.push_back(s.id);
            v.instance_of[s.id] = it->second;
            if (s.member) {
                std::size_t r = member_region(*s.member, ctx());
                auto p = inst.pinned.find(r);
                if (p != inst.pinned.end() && p->second != s.member->state)
                    throw CompileError(ctx() + ": conflicting references into region " +
                                       std::to_string(r) + " ('" + p->second + "' vs '" +
                                       s.member->state + "')");
                inst.pinned[r] = s.member->state;
            } else {
                for (std::size_t r = 0; r < s.config->states.size(); ++r) {
                    auto p = inst.pinned.find(r);
                    if (p != inst.pinned.end() && p->second != s.config->states[r])
                        throw CompileError(ctx() + ": conflicting references into region " +
                                           std::to_string(r));
                    inst.pinned[r] = s.config->states[r];
                }
            }
        }
        for (Instance& inst : v.instances) {
            std::vector<std::string> ids = inst.ref_ids;
            std::sort(ids.begin(), ids.end());
            std::string vid;
            for (std::size_t i = 0; i < ids.size(); ++i) vid += (i ? "+" : "") + ids[i];
            inst.vertex_id = vid;
        }
        for (const CreateTransition& ct : aspect.advice.create_transitions) {
            auto live_ref = [&](const std::string& ref) {
                if (created_ids.count(ref)) return true;
                return v.live_states.count(ref) > 0;
            };
            if (!live_ref(ct.source))
                throw CompileError(ctx() + ": advice references '" + ct.source +
                                   "' which is not live in every xor selection");
            for (const std::string& t : ct.targets)
                if (!live_ref(t))
                    throw CompileError(ctx() + ": advice references '" + t +
                                       "' which is not live in every xor selection");
            if (ct.kind == TransitionKind::fork) {
                std::optional<std::size_t> inst;
                for (const std::string& t : ct.targets) {
                    auto it = v.instance_of.find(t);
                    if (it == v.instance_of.end())
                        throw CompileError(ctx() + ": fork target '" + t +
                                           "' is not a composite member reference");
                    if (inst && *inst != it->second)
                        throw CompileError(ctx() + ": fork targets must reference one orthogonal composite");
                    inst = it->second;
                }
            }
        }
        for (const std::string& d : aspect.advice.deletes) {
            if (states_by_id.count(d) && !v.live_states.count(d))
                throw CompileError(ctx() + ": deleted reference '" + d +
                                   "' is not live in every xor selection");
            for (std::size_t i = 0; i < edge_id_of.size(); ++i)
                if (edge_id_of[i] == d && !v.live_edges.count(i))
                    throw CompileError(ctx() + ": deleted edge '" + d +
                                       "' is not live in every xor selection");
        }
    }
};

struct VariantBuild {
    Graph lhs;
    std::map<std::string, std::string> vertex_of; // live pattern state -> lhs vertex id
    std::vector<Graph> nacs;
    bool vacuous = false;
};

} // namespace

CompiledAspect compile(const Aspect& aspect, const CompileOptions& opts) {
    Compiler comp(aspect, opts);
    const Pattern& pc = aspect.pointcut;

    CompiledAspect out;
    out.name = aspect.name;
    std::size_t variant_count = 0;

    for (Compiler::Variant& sel : comp.xor_selections()) {
        comp.build_instances(sel);

        // cartesian product over all instances' free regions
        struct Axis {
            std::size_t instance;
            std::size_t region;
            const std::vector<std::string>* choices;
        };
        std::vector<Axis> axes;
        for (std::size_t ii = 0; ii < sel.instances.size(); ++ii)
            for (std::size_t r : sel.instances[ii].free_regions())
                axes.push_back({ii, r, &sel.instances[ii].regions[r]});

        std::vector<std::size_t> odo(axes.size(), 0);
        for (;;) {
            if (++variant_count > opts.max_variants)
                throw ExpansionOverflow(aspect.name + ": expansion exceeds " +
                                        std::to_string(opts.max_variants) + " variants");

            std::vector<std::map<std::size_t, std::string>> choices(sel.instances.size());
            for (std::size_t a = 0; a < axes.size(); ++a)
                choices[axes[a].instance][axes[a].region] = (*axes[a].choices)[odo[a]];

            VariantBuild vb;
            // vertices
            for (const PatternState& s : pc.states) {
                if (!sel.live_states.count(s.id)) continue;
                auto inst_it = sel.instance_of.find(s.id);
                if (inst_it == sel.instance_of.end()) {
                    vb.lhs.add_vertex({s.id, s.kind, {{"name", s.id}}});
                    vb.vertex_of[s.id] = s.id;
                } else {
                    const Instance& inst = sel.instances[inst_it->second];
                    if (!vb.lhs.has_vertex(inst.vertex_id)) {
                        std::string name = inst.config_name(choices[inst_it->second]);
                        vb.lhs.add_vertex({inst.vertex_id, VertexKind::config, {{"name", name}}});
                    }
                    vb.vertex_of[s.id] = inst.vertex_id;
                }
            }
            // edges
            for (std::size_t ei : sel.live_edges) {
                const PatternEdge& e = pc.transitions[ei];
                vb.lhs.add_edge({comp.edge_id_of[ei], vb.vertex_of.at(e.source),
                                 vb.vertex_of.at(e.target), e.event});
            }

            // NACs: one per forbidden alternative instance
            for (std::size_t gi = 0; gi < pc.xor_groups.size() && !vb.vacuous; ++gi) {
                for (std::size_t idx : pc.xor_groups[gi]) {
                    if (idx == sel.chosen[gi]) continue;
                    const PatternEdge& f = pc.transitions[idx];

                    // expansion choices for non-live member endpoints
                    auto endpoint_options =
                        [&](const std::string& sid) -> std::vector<std::pair<std::string, VertexKind>> {
                        auto live = vb.vertex_of.find(sid);
                        if (live != vb.vertex_of.end()) {
                            const Vertex& v = vb.lhs.vertex(live->second);
                            return {{v.name(), v.kind}};
                        }
                        const PatternState& s = *comp.states_by_id.at(sid);
                        if (s.config) {
                            return {{join_config(s.config->states), VertexKind::config}};
                        }
                        if (!s.member) return {{s.id, s.kind}};
                        std::size_t mr = member_region(*s.member, comp.ctx());
                        std::vector<std::vector<std::string>> regions = s.member->regions;
                        regions[mr] = {s.member->state};
                        std::vector<std::pair<std::string, VertexKind>> opts_out;
                        std::vector<std::size_t> o(regions.size(), 0);
                        for (;;) {
                            std::vector<std::string> parts;
                            for (std::size_t r = 0; r < regions.size(); ++r)
                                parts.push_back(regions[r][o[r]]);
                            opts_out.push_back({join_config(parts), VertexKind::config});
                            std::size_t r = regions.size();
                            while (r-- > 0) {
                                if (++o[r] < regions[r].size()) break;
                                o[r] = 0;
                            }
                            bool wrapped = true;
                            for (std::size_t q = 0; q < o.size(); ++q)
                                if (o[q] != 0) wrapped = false;
                            if (wrapped) break;
                        }
                        return opts_out;
                    };

                    auto src_opts = endpoint_options(f.source);
                    auto tgt_opts = endpoint_options(f.target);
                    for (const auto& so : src_opts) {
                        for (const auto& to : tgt_opts) {
                            Graph nac = vb.lhs;
                            int fresh = 0;
                            auto place = [&](const std::pair<std::string, VertexKind>& want)
                                -> std::string {
                                for (const auto& [vid, v] : nac.vertices())
                                    if (v.kind == want.second && v.name() == want.first)
                                        return vid;
                                std::string vid = "n:" + comp.edge_id_of[idx] + ":" +
                                                  std::to_string(fresh++);
                                nac.add_vertex({vid, want.second, {{"name", want.first}}});
                                return vid;
                            };
                            std::string sv = place(so);
                            std::string tv = place(to);
                            std::string ne_id = "n:" + comp.edge_id_of[idx];
                            nac.add_edge({ne_id, sv, tv, f.event});

                            // a NAC whose only addition duplicates the lhs edge
                            // shape marks an unsatisfiable variant
                            bool new_vertices = fresh > 0;
                            bool duplicate_edge = false;
                            for (const auto& [leid, le] : vb.lhs.edges())
                                if (le.src == sv && le.tgt == tv && le.label == f.event)
                                    duplicate_edge = true;
                            if (!new_vertices && duplicate_edge) {
                                vb.vacuous = true;
                                break;
                            }
                            vb.nacs.push_back(std::move(nac));
                        }
                        if (vb.vacuous) break;
                    }
                    if (vb.vacuous) break;
                }
            }
            if (!vb.vacuous) {
                // rhs: lhs minus deletions plus advice creations
                Graph rhs;
                std::set<std::string> del_vertices, del_edges;
                for (const std::string& d : aspect.advice.deletes) {
                    auto v = vb.vertex_of.find(d);
                    if (v != vb.vertex_of.end()) {
                        del_vertices.insert(v->second);
                        continue;
                    }
                    // edge reference: map pattern edge id
                    for (std::size_t ei : sel.live_edges)
                        if (comp.edge_id_of[ei] == d) del_edges.insert(d);
                }
                for (const auto& [vid, v] : vb.lhs.vertices())
                    if (!del_vertices.count(vid)) rhs.add_vertex(v);
                for (const auto& [eid, e] : vb.lhs.edges())
                    if (!del_edges.count(eid) && !del_vertices.count(e.src) &&
                        !del_vertices.count(e.tgt))
                        rhs.add_edge(e);

                for (const CreateState& cs : aspect.advice.create_states)
                    rhs.add_vertex({cs.id, cs.kind,
                                    {{"name", cs.name.empty() ? cs.id : cs.name}}});
                int cidx = 0;
                for (const CreateTransition& ct : aspect.advice.create_transitions) {
                    auto resolve = [&](const std::string& ref) -> std::string {
                        auto v = vb.vertex_of.find(ref);
                        if (v != vb.vertex_of.end()) return v->second;
                        return ref; // created state id
                    };
                    std::string src = resolve(ct.source);
                    std::string tgt = resolve(ct.targets.front());
                    if (ct.kind == TransitionKind::fork) {
                        // all fork targets resolve to the one config vertex
                        for (const std::string& t : ct.targets) {
                            if (resolve(t) != tgt)
                                throw CompileError(aspect.name +
                                                   ": fork targets resolve to different vertices");
                        }
                    }
                    rhs.add_edge({"c" + std::to_string(cidx++), src, tgt, ct.event});
                }

                Rule rule;
                rule.name = aspect.name + "-R" + std::to_string(out.rules.size() + 1);
                rule.lhs = std::move(vb.lhs);
                rule.rhs = std::move(rhs);
                rule.nacs = std::move(vb.nacs);
                validate_rule(rule);
                out.rules.push_back(std::move(rule));
            }

            if (axes.empty()) break;
            std::size_t a = axes.size();
            while (a-- > 0) {
                if (++odo[a] < axes[a].choices->size()) break;
                odo[a] = 0;
            }
            bool wrapped = true;
            for (std::size_t q = 0; q < odo.size(); ++q)
                if (odo[q] != 0) wrapped = false;
            if (wrapped) break;
        }
    }

    if (out.rules.empty())
        throw CompileError(aspect.name + ": every expansion variant is unsatisfiable");
    return out;
}

std::vector<CompiledAspect> compile_all(const std::vector<Concern>& concerns,
                                        const CompileOptions& opts) {
    std::set<std::string> names;
    std::vector<CompiledAspect> out;
    for (const Concern& c : concerns)
        for (const Aspect& a : c.aspects) {
            if (!names.insert(a.name).second)
                throw DuplicateAspectName("duplicate aspect name: " + a.name);
            out.push_back(compile(a, opts));
        }
    return out;
}

std::pair<std::string, int> parse_rule_name(const std::string& rule_name) {
    auto pos = rule_name.rfind("-R");
    if (pos == std::string::npos || pos == 0 || pos + 2 >= rule_name.size())
        throw UnparseableRuleName("cannot parse rule name: " + rule_name);
    const std::string digits = rule_name.substr(pos + 2);
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw UnparseableRuleName("cannot parse rule name: " + rule_name);
    return {rule_name.substr(0, pos), std::stoi(digits)};
}

} // namespace aspectra
